use serde::Serialize;

use super::{PermGroup, Subgroup};

/// Partition of a group into conjugacy classes.
#[derive(Debug, Clone)]
pub struct ConjugacyClassTable {
    /// Element index of the first (lowest-index) member of each class.
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Class index of every group element.
    pub class_of: Vec<usize>,
}

impl ConjugacyClassTable {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Number of elements of `h` in each class.
    pub fn intersection_counts(&self, h: &Subgroup) -> Vec<usize> {
        let mut counts = vec![0; self.len()];
        for &x in h.elements() {
            counts[self.class_of[x]] += 1;
        }
        counts
    }
}

/// Orbits of the conjugation action. Conjugating by generators is enough
/// because the orbit of a generated group is the closure under its generators.
pub fn conjugacy_classes(group: &PermGroup) -> ConjugacyClassTable {
    let n = group.order();
    let gens = group.generator_indices();
    let mut class_of = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let c = representatives.len();
        representatives.push(start);
        class_of[start] = c;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for &g in &gens {
                let y = group.conjugate(x, g);
                if class_of[y] == usize::MAX {
                    class_of[y] = c;
                    orbit.push(y);
                }
            }
        }
        sizes.push(orbit.len());
    }
    ConjugacyClassTable {
        representatives,
        sizes,
        class_of,
    }
}

/// Some `g` with `g H1 g^-1 = H2`, searching all of `group` in index order.
pub fn find_conjugator(group: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Option<usize> {
    if h1.order() != h2.order() {
        return None;
    }
    let gens: Vec<usize> = h1
        .generators()
        .iter()
        .map(|p| group.index_of(p).expect("subgroup generators are members"))
        .collect();
    // |gH1g^-1| = |H2|, so containment of the conjugated generators suffices.
    (0..group.order()).find(|&g| gens.iter().all(|&h| h2.contains(group.conjugate(h, g))))
}

pub fn is_conjugate_subgroups(group: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> bool {
    find_conjugator(group, h1, h2).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    /// Representative in cycle notation.
    pub representative: String,
    pub class_size: usize,
    pub gamma1: usize,
    pub gamma2: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlmostConjugacyReport {
    pub verdict: bool,
    pub per_class_counts: Vec<ClassCount>,
}

impl AlmostConjugacyReport {
    pub fn count_vectors(&self) -> (Vec<usize>, Vec<usize>) {
        self.per_class_counts
            .iter()
            .map(|c| (c.gamma1, c.gamma2))
            .unzip()
    }
}

/// Compares `|[g] ∩ H1|` with `|[g] ∩ H2|` for every conjugacy class `[g]`.
pub fn almost_conjugate(group: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> AlmostConjugacyReport {
    almost_conjugate_with(group, &conjugacy_classes(group), h1, h2)
}

pub fn almost_conjugate_with(
    group: &PermGroup,
    classes: &ConjugacyClassTable,
    h1: &Subgroup,
    h2: &Subgroup,
) -> AlmostConjugacyReport {
    let c1 = classes.intersection_counts(h1);
    let c2 = classes.intersection_counts(h2);
    let per_class_counts = (0..classes.len())
        .map(|c| ClassCount {
            representative: group.element(classes.representatives[c]).to_string(),
            class_size: classes.sizes[c],
            gamma1: c1[c],
            gamma2: c2[c],
        })
        .collect();
    AlmostConjugacyReport {
        verdict: c1 == c2,
        per_class_counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::perm::Permutation;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn trivial_group_has_one_class() {
        let g = PermGroup::new("1", 3, vec![]).unwrap();
        let t = conjugacy_classes(&g);
        assert_eq!(t.sizes, vec![1]);
    }

    #[test]
    fn s3_classes() {
        let g = fixtures::symmetric_group(3);
        let t = conjugacy_classes(&g);
        let mut sizes = t.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        // classes are exactly the cycle types in S_n
        for a in 0..6 {
            for b in 0..6 {
                let same_type = g.element(a).cycle_type() == g.element(b).cycle_type();
                assert_eq!(same_type, t.class_of[a] == t.class_of[b]);
            }
        }
    }

    #[test]
    fn conjugate_transpositions_in_s3() {
        let g = fixtures::symmetric_group(3);
        let h1 = Subgroup::generated(&g, vec![cyc(3, &[&[0, 1]])]).unwrap();
        let h2 = Subgroup::generated(&g, vec![cyc(3, &[&[1, 2]])]).unwrap();
        assert!(is_conjugate_subgroups(&g, &h1, &h2));
        let t = find_conjugator(&g, &h1, &h2).unwrap();
        assert!(h1.conjugated(&g, t).same_elements(&h2));
    }

    #[test]
    fn s4_transposition_vs_double_transposition() {
        let g = fixtures::symmetric_group(4);
        let h1 = Subgroup::generated(&g, vec![cyc(4, &[&[0, 1]])]).unwrap();
        let h2 = Subgroup::generated(&g, vec![cyc(4, &[&[0, 1], &[2, 3]])]).unwrap();
        assert!(!is_conjugate_subgroups(&g, &h1, &h2));
        let report = almost_conjugate(&g, &h1, &h2);
        assert!(!report.verdict);
        let classes = conjugacy_classes(&g);
        let t = g.index_of(&cyc(4, &[&[0, 1]])).unwrap();
        let row = &report.per_class_counts[classes.class_of[t]];
        assert_eq!((row.gamma1, row.gamma2), (1, 0));
    }

    #[test]
    fn identical_subgroups_are_almost_conjugate() {
        let g = fixtures::symmetric_group(4);
        let h = Subgroup::stabilizer(&g, 2).unwrap();
        let report = almost_conjugate(&g, &h, &h);
        assert!(report.verdict);
        let (a, b) = report.count_vectors();
        assert_eq!(a, b);
    }
}
