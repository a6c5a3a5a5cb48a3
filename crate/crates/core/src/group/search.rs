use std::collections::{BTreeMap, HashSet};

use super::{conjugacy_classes, is_conjugate_subgroups, PermGroup, Subgroup};
use crate::error::{Error, Result};

/// Upper bound on distinct candidate subgroups examined by
/// [`search_gassmann`].
pub const SEARCH_CAP: usize = 50_000;

#[derive(Debug, Clone)]
pub struct GassmannPair {
    pub h1: Subgroup,
    pub h2: Subgroup,
    /// Shared class-intersection count vector.
    pub class_counts: Vec<usize>,
}

/// All unordered pairs of subgroups generated by at most `max_generators`
/// elements (`max_generators <= 2`) that are almost conjugate but not
/// conjugate.
pub fn search_gassmann(group: &PermGroup, max_generators: usize) -> Result<Vec<GassmannPair>> {
    if max_generators > 2 {
        return Err(Error::validation(
            "max_generators",
            "subgroup search is limited to two generators",
        ));
    }
    let n = group.order();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut candidates: Vec<Subgroup> = Vec::new();
    let mut push = |h: Subgroup, candidates: &mut Vec<Subgroup>| -> Result<()> {
        if seen.insert(h.elements().to_vec()) {
            if candidates.len() >= SEARCH_CAP {
                return Err(Error::CapExceeded {
                    what: "candidate subgroups",
                    count: candidates.len() + 1,
                    cap: SEARCH_CAP,
                });
            }
            candidates.push(h);
        }
        Ok(())
    };

    push(Subgroup::trivial(group), &mut candidates)?;
    let mut cyclic: Vec<Subgroup> = Vec::new();
    if max_generators >= 1 {
        for a in 1..n {
            let h = Subgroup::from_indices(group, &[a]);
            cyclic.push(h.clone());
            push(h, &mut candidates)?;
        }
    }
    if max_generators >= 2 {
        for a in 1..n {
            let ca = &cyclic[a - 1];
            for b in a + 1..n {
                if ca.contains(b) || cyclic[b - 1].contains(a) {
                    continue;
                }
                push(Subgroup::from_indices(group, &[a, b]), &mut candidates)?;
            }
        }
    }

    let classes = conjugacy_classes(group);
    let mut buckets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, h) in candidates.iter().enumerate() {
        buckets
            .entry(classes.intersection_counts(h))
            .or_default()
            .push(i);
    }

    let mut pairs = Vec::new();
    for (counts, members) in buckets {
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                if !is_conjugate_subgroups(group, &candidates[i], &candidates[j]) {
                    pairs.push(GassmannPair {
                        h1: candidates[i].clone(),
                        h2: candidates[j].clone(),
                        class_counts: counts.clone(),
                    });
                }
            }
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn s3_has_no_gassmann_pairs() {
        let g = fixtures::symmetric_group(3);
        assert!(search_gassmann(&g, 2).unwrap().is_empty());
    }

    #[test]
    fn too_many_generators_rejected() {
        let g = fixtures::symmetric_group(3);
        assert!(search_gassmann(&g, 3).is_err());
    }
}
