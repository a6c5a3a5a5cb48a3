//! Brute-force oracles and fixture helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use sunada_lab::group::{PermGroup, Subgroup};
use sunada_lab::scenario::{bundled, Scenario};
use sunada_lab::Permutation;

pub fn fixtures_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    bundled::write_all(dir.path()).unwrap();
    dir
}

pub fn load(dir: &Path, name: &str) -> Scenario {
    Scenario::load(dir.join(format!("{name}.json"))).unwrap()
}

/// Closure of `gens` under composition, as a set of image vectors.
pub fn closure(degree: usize, gens: &[&Permutation]) -> BTreeSet<Vec<u32>> {
    let id = Permutation::identity(degree);
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::from([id.images().to_vec()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = p.then(g);
            if seen.insert(q.images().to_vec()) {
                frontier.push(q);
            }
        }
    }
    seen
}

/// Every subgroup generated by at most two elements, one per element set.
pub fn two_generator_subgroups(g: &PermGroup) -> Vec<Subgroup> {
    let els = g.elements();
    let mut sets: HashSet<BTreeSet<Vec<u32>>> = HashSet::new();
    let mut out = Vec::new();
    let mut add = |gens: &[usize]| {
        let perms: Vec<&Permutation> = gens.iter().map(|&i| &els[i]).collect();
        let set = closure(g.degree(), &perms);
        if sets.insert(set.clone()) {
            let idx = set
                .iter()
                .map(|v| {
                    let p = Permutation::from_images(
                        &v.iter().map(|&x| x as usize).collect::<Vec<_>>(),
                    )
                    .unwrap();
                    g.index_of(&p).unwrap()
                })
                .collect();
            out.push(Subgroup::from_element_set(g, idx).unwrap());
        }
    };
    add(&[]);
    for a in 0..els.len() {
        add(&[a]);
        for b in a + 1..els.len() {
            add(&[a, b]);
        }
    }
    out
}

/// `χ(g)` = number of right cosets `Hx` fixed by `g`, i.e.
/// `#{x : x g x⁻¹ ∈ H} / |H|`, by direct enumeration.
pub fn permutation_character(g: &PermGroup, h: &Subgroup) -> Vec<usize> {
    let els = g.elements();
    let members: HashSet<&[u32]> = h.elements().iter().map(|&i| els[i].images()).collect();
    els.iter()
        .map(|y| {
            let hits = els
                .iter()
                .filter(|x| members.contains(x.then(y).then(&x.inverse()).images()))
                .count();
            assert_eq!(hits % h.order(), 0);
            hits / h.order()
        })
        .collect()
}

/// Conjugacy classes of `g` by brute-force conjugation, as sets of indices.
pub fn classes(g: &PermGroup) -> Vec<BTreeSet<usize>> {
    let els = g.elements();
    let mut seen = vec![false; els.len()];
    let mut out = Vec::new();
    for i in 0..els.len() {
        if seen[i] {
            continue;
        }
        let class: BTreeSet<usize> = els
            .iter()
            .map(|x| g.index_of(&x.inverse().then(&els[i]).then(x)).unwrap())
            .collect();
        for &c in &class {
            seen[c] = true;
        }
        out.push(class);
    }
    out
}

/// `|C ∩ H|` for each class `C`.
pub fn class_counts(classes: &[BTreeSet<usize>], h: &Subgroup) -> Vec<usize> {
    classes
        .iter()
        .map(|c| h.elements().iter().filter(|e| c.contains(e)).count())
        .collect()
}

/// Is `h2 = x⁻¹ h1 x` for some `x`?
pub fn conjugate(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> bool {
    let els = g.elements();
    let target: BTreeSet<usize> = h2.elements().iter().copied().collect();
    els.iter().any(|x| {
        let img: BTreeSet<usize> = h1
            .elements()
            .iter()
            .map(|&e| g.index_of(&x.inverse().then(&els[e]).then(x)).unwrap())
            .collect();
        img == target
    })
}

/// `2 − 2cos(2πj/n + kθ)` for `j = 0..n`, sorted; `θ` the per-edge phase in
/// radians on a directed `n`-cycle.
pub fn cycle_spectrum(n: usize, k: i64, theta: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|j| {
            let a =
                (2.0 * std::f64::consts::PI * j as f64 + k as f64 * n as f64 * theta) / n as f64;
            2.0 - 2.0 * a.cos()
        })
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
