use super::{PermGroup, Subgroup};
use crate::perm::Permutation;

/// Right cosets `Hx` of a subgroup and the right-multiplication action of
/// the parent on them.
#[derive(Debug, Clone)]
pub struct CosetTable {
    subgroup: Subgroup,
    /// Lowest-index element of each coset; coset 0 is `H` itself.
    coset_reps: Vec<usize>,
    /// Coset index of every parent element.
    coset_of: Vec<u32>,
}

pub fn coset_action(group: &PermGroup, h: &Subgroup) -> CosetTable {
    let n = group.order();
    let mut coset_of = vec![u32::MAX; n];
    let mut coset_reps = Vec::with_capacity(n / h.order());
    for x in 0..n {
        if coset_of[x] != u32::MAX {
            continue;
        }
        let c = coset_reps.len() as u32;
        coset_reps.push(x);
        for &y in h.elements() {
            coset_of[group.mul(y, x)] = c;
        }
    }
    CosetTable {
        subgroup: h.clone(),
        coset_reps,
        coset_of,
    }
}

impl CosetTable {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    /// Coset containing the parent element `x`.
    #[inline]
    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x] as usize
    }

    /// Image of coset `c` under right multiplication by `g`.
    #[inline]
    pub fn act(&self, group: &PermGroup, c: usize, g: usize) -> usize {
        self.coset_of(group.mul(self.coset_reps[c], g))
    }

    /// The permutation of cosets induced by `g`. With right actions,
    /// `action(g * h) = action(g).then(action(h))`.
    pub fn action(&self, group: &PermGroup, g: usize) -> Permutation {
        let images: Vec<usize> = (0..self.index()).map(|c| self.act(group, c, g)).collect();
        Permutation::from_images(&images).expect("coset action is a bijection")
    }
}

/// Number of cosets fixed by `g`.
pub fn permutation_character(group: &PermGroup, table: &CosetTable, g: usize) -> usize {
    (0..table.index())
        .filter(|&c| table.act(group, c, g) == c)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn whole_group_has_index_one() {
        let g = fixtures::symmetric_group(3);
        let t = coset_action(&g, &Subgroup::whole(&g));
        assert_eq!(t.index(), 1);
        for x in 0..g.order() {
            assert!(t.action(&g, x).is_identity());
        }
    }

    #[test]
    fn trivial_subgroup_gives_regular_action() {
        let g = fixtures::symmetric_group(3);
        let t = coset_action(&g, &Subgroup::trivial(&g));
        assert_eq!(t.index(), 6);
        assert_eq!(permutation_character(&g, &t, g.identity()), 6);
        for x in 1..g.order() {
            assert_eq!(permutation_character(&g, &t, x), 0);
        }
    }

    #[test]
    fn cosets_partition_the_group() {
        let g = fixtures::symmetric_group(4);
        let h = Subgroup::stabilizer(&g, 3).unwrap();
        let t = coset_action(&g, &h);
        assert_eq!(t.index(), 4);
        let mut sizes = vec![0; 4];
        for x in 0..g.order() {
            sizes[t.coset_of(x)] += 1;
        }
        assert_eq!(sizes, vec![6; 4]);
        assert_eq!(t.coset_of(g.identity()), 0);
    }
}
