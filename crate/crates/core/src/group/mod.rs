//! Finite permutation groups given by generators.
//!
//! Groups are enumerated exhaustively; every element gets a dense index and
//! all subgroup, coset and conjugacy computations work on those indices.

mod conjugacy;
mod coset;
mod exact;
mod intertwiner;
mod search;

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

pub use conjugacy::{
    almost_conjugate, almost_conjugate_with, conjugacy_classes, find_conjugator,
    is_conjugate_subgroups, AlmostConjugacyReport, ClassCount, ConjugacyClassTable,
};
pub use coset::{coset_action, permutation_character, CosetTable};
pub use exact::{determinant, IntMatrix};
pub use intertwiner::{
    average_intertwiner, build_intertwiner, unitarize_intertwiner, Intertwiner, IntertwinerSummary,
    INTERTWINER_ATTEMPTS,
};
pub use search::{search_gassmann, GassmannPair, SEARCH_CAP};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest group order that will be enumerated.
pub const ELEMENT_CAP: usize = 200_000;
/// Largest permutation degree accepted.
pub const DEGREE_CAP: usize = 10_000;
/// Groups up to this order get a cached multiplication table.
const CAYLEY_LIMIT: usize = 2048;

#[derive(Debug)]
pub struct PermGroup {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    inverses: Vec<u32>,
    cayley: OnceLock<Vec<u32>>,
}

/// Closure of `generators` under composition, identity first, in
/// breadth-first order. Fails once more than `cap` elements appear.
pub fn enumerate_elements(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>> {
    if degree == 0 {
        return Err(Error::InvalidPermutation("degree must be positive".into()));
    }
    if degree > DEGREE_CAP {
        return Err(Error::CapExceeded {
            what: "permutation degree",
            count: degree,
            cap: DEGREE_CAP,
        });
    }
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                got: g.degree(),
            });
        }
    }
    let identity = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    seen.insert(identity.clone(), ());
    let mut elements = vec![identity];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let next = elements[i].then(g);
            if seen.contains_key(&next) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "group order",
                    count: elements.len() + 1,
                    cap,
                });
            }
            seen.insert(next.clone(), ());
            queue.push_back(elements.len());
            elements.push(next);
        }
    }
    Ok(elements)
}

impl PermGroup {
    /// Enumerates the group generated by `generators` on `degree` points.
    pub fn new(
        name: impl Into<String>,
        degree: usize,
        generators: Vec<Permutation>,
    ) -> Result<Self> {
        let elements = enumerate_elements(degree, &generators, ELEMENT_CAP)?;
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        Ok(PermGroup {
            name: name.into(),
            degree,
            generators,
            elements,
            index,
            inverses,
            cayley: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    /// Index of the identity element.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    /// Like [`index_of`](Self::index_of) but reports non-membership as an error.
    pub fn require(&self, p: &Permutation) -> Result<usize> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: p.degree(),
            });
        }
        self.index_of(p)
            .ok_or_else(|| Error::NotInGroup(p.to_string()))
    }

    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators
            .iter()
            .map(|g| self.index_of(g).expect("generators are members"))
            .collect()
    }

    fn cayley(&self) -> Option<&[u32]> {
        let n = self.order();
        if n > CAYLEY_LIMIT {
            return None;
        }
        Some(self.cayley.get_or_init(|| {
            let mut table = Vec::with_capacity(n * n);
            for a in &self.elements {
                for b in &self.elements {
                    table.push(self.index[&a.then(b)]);
                }
            }
            table
        }))
    }

    /// Index of `elements[a] * elements[b]`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self.cayley() {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `g * x * g^-1` on indices.
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Breadth-first closure of the given element indices.
    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        member[0] = true;
        let mut out = vec![0usize];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// A subgroup of a [`PermGroup`], stored as sorted element indices of the
/// parent. Operations take the parent explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    generators: Vec<Permutation>,
    elements: Vec<usize>,
    parent_order: usize,
}

impl Subgroup {
    /// Subgroup generated by `generators`, each of which must lie in `parent`.
    pub fn generated(parent: &PermGroup, generators: Vec<Permutation>) -> Result<Self> {
        let idx = generators
            .iter()
            .map(|g| parent.require(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subgroup {
            elements: parent.closure(&idx),
            generators,
            parent_order: parent.order(),
        })
    }

    pub fn from_indices(parent: &PermGroup, gens: &[usize]) -> Self {
        Subgroup {
            generators: gens.iter().map(|&g| parent.element(g).clone()).collect(),
            elements: parent.closure(gens),
            parent_order: parent.order(),
        }
    }

    pub fn trivial(parent: &PermGroup) -> Self {
        Self::from_indices(parent, &[])
    }

    pub fn whole(parent: &PermGroup) -> Self {
        Subgroup {
            generators: parent.generators().to_vec(),
            elements: (0..parent.order()).collect(),
            parent_order: parent.order(),
        }
    }

    /// Wraps an element set already known to be a subgroup, picking a
    /// generating set greedily in index order.
    pub fn from_element_set(parent: &PermGroup, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let mut gens: Vec<usize> = Vec::new();
        let mut current = parent.closure(&gens);
        for &x in &elements {
            if current.binary_search(&x).is_err() {
                gens.push(x);
                current = parent.closure(&gens);
            }
        }
        if current != elements {
            return Err(Error::validation(
                "subgroup",
                "element set is not closed under multiplication",
            ));
        }
        Ok(Self::from_indices(parent, &gens))
    }

    /// Pointwise stabilizer of `point` under the natural action.
    pub fn stabilizer(parent: &PermGroup, point: usize) -> Result<Self> {
        let elements = (0..parent.order())
            .filter(|&i| parent.element(i).apply(point) == point)
            .collect();
        Self::from_element_set(parent, elements)
    }

    /// `g H g^-1` for the parent element `g`.
    pub fn conjugated(&self, parent: &PermGroup, g: usize) -> Self {
        let gens: Vec<usize> = self
            .generators
            .iter()
            .map(|h| parent.conjugate(parent.index_of(h).expect("member"), g))
            .collect();
        Self::from_indices(parent, &gens)
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn contains(&self, element: usize) -> bool {
        self.elements.binary_search(&element).is_ok()
    }

    pub fn same_elements(&self, other: &Subgroup) -> bool {
        self.elements == other.elements
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Membership mask over the parent's elements.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.parent_order];
        for &x in &self.elements {
            m[x] = true;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn trivial_group_has_only_identity() {
        let g = PermGroup::new("trivial", 3, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn s3_from_transposition_and_three_cycle() {
        let g = fixtures::symmetric_group(3);
        assert_eq!(g.order(), 6);
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let s = fixtures::symmetric_group(5);
        let err = enumerate_elements(5, s.generators(), 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 100, .. }));
        let err = enumerate_elements(DEGREE_CAP + 1, &[], 10).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn mismatched_generator_degree_is_rejected() {
        let err = PermGroup::new("bad", 3, vec![Permutation::identity(4)]).unwrap_err();
        assert!(matches!(
            err,
            Error::DegreeMismatch {
                expected: 3,
                got: 4
            }
        ));
    }

    #[test]
    fn subgroup_generators_must_be_members() {
        let a4 = PermGroup::new(
            "A4",
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap(),
                Permutation::from_cycles(4, &[&[1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(a4.order(), 12);
        let t = Permutation::from_cycles(4, &[&[0, 1]]).unwrap();
        assert!(matches!(
            Subgroup::generated(&a4, vec![t]),
            Err(Error::NotInGroup(_))
        ));
    }

    #[test]
    fn stabilizer_and_greedy_generators() {
        let s4 = fixtures::symmetric_group(4);
        let st = Subgroup::stabilizer(&s4, 0).unwrap();
        assert_eq!(st.order(), 6);
        assert!(st.generators().len() <= 2);
        assert!(st.elements().iter().all(|&i| s4.element(i).apply(0) == 0));
    }

    #[test]
    fn cayley_and_direct_products_agree() {
        let big = fixtures::symmetric_group(7); // 5040 > CAYLEY_LIMIT
        let small = fixtures::symmetric_group(4);
        for g in [&big, &small] {
            for (a, b) in [(1, 2), (3, 5), (7, 11)] {
                let direct = g.element(a).then(g.element(b));
                assert_eq!(g.element(g.mul(a, b)), &direct);
            }
        }
    }
}
