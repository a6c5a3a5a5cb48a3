use std::collections::BTreeMap;

use serde::Serialize;

use super::Turn;
use crate::cover::{sigma_edge_map, sigma_map, QuotientGraph, VoltageGraph};
use crate::error::{Error, Result};

/// A U(1) connection: one phase per oriented edge. Traversing an edge
/// against its orientation picks up the negated phase.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ConnectionData {
    pub phases: BTreeMap<usize, Turn>,
}

impl ConnectionData {
    pub fn zero(edge_count: usize) -> Self {
        ConnectionData {
            phases: (0..edge_count).map(|e| (e, Turn::zero())).collect(),
        }
    }

    pub fn from_turns(turns: Vec<Turn>) -> Self {
        ConnectionData {
            phases: turns.into_iter().enumerate().collect(),
        }
    }

    pub fn phase(&self, edge: usize) -> Result<&Turn> {
        self.phases.get(&edge).ok_or(Error::MissingPhase(edge))
    }

    /// Connection on `L^⊗k`: every phase multiplied by `k`.
    pub fn tensor_power(&self, k: i64) -> ConnectionData {
        ConnectionData {
            phases: self.phases.iter().map(|(&e, t)| (e, t.scale(k))).collect(),
        }
    }

    /// True when both connections carry the same phase, modulo whole turns,
    /// on every edge of either.
    pub fn congruent(&self, other: &ConnectionData) -> bool {
        self.phases.len() == other.phases.len()
            && self
                .phases
                .iter()
                .all(|(e, t)| other.phases.get(e).is_some_and(|s| t.congruent(s)))
    }
}

/// Real scalar field on vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Potential {
    pub values: Vec<f64>,
}

impl Potential {
    pub fn zero(n: usize) -> Self {
        Potential {
            values: vec![0.0; n],
        }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Potential {
            values: vec![value; n],
        }
    }
}

/// Phase of each quotient edge: the base phase of its parent edge plus,
/// when present, the phase of the matching edge on the intermediate
/// quotient `G\M` (the lift of the same base edge at coset `Gx`).
///
/// `target` must be a quotient by a subgroup of `G`.
pub fn descend_connection(
    base: &ConnectionData,
    mid: Option<(&QuotientGraph, &ConnectionData)>,
    target: &QuotientGraph,
) -> Result<ConnectionData> {
    if let Some((mid_q, _)) = mid {
        if !target
            .coset_table
            .subgroup()
            .is_subset_of(mid_q.coset_table.subgroup())
        {
            return Err(Error::SubgroupNotContained);
        }
    }
    let mut phases = BTreeMap::new();
    for e in 0..target.graph.edge_count() {
        let (be, c) = target.edge_label(e);
        let mut theta = base.phase(be)?.clone();
        if let Some((mid_q, mid_conn)) = mid {
            let x = target.coset_table.coset_reps()[c];
            let me = mid_q.edge(be, mid_q.coset_table.coset_of(x));
            theta = &theta + mid_conn.phase(me)?;
        }
        phases.insert(e, theta);
    }
    Ok(ConnectionData { phases })
}

/// Pushes a field on the vertices of the intermediate quotient `G\M` down
/// to a quotient by a subgroup of `G`.
pub fn descend_vertex_field(
    mid_q: &QuotientGraph,
    values: &[f64],
    target: &QuotientGraph,
) -> Result<Vec<f64>> {
    if values.len() != mid_q.graph.vertex_count {
        return Err(Error::LengthMismatch(
            values.len(),
            mid_q.graph.vertex_count,
        ));
    }
    if !target
        .coset_table
        .subgroup()
        .is_subset_of(mid_q.coset_table.subgroup())
    {
        return Err(Error::SubgroupNotContained);
    }
    Ok((0..target.graph.vertex_count)
        .map(|v| {
            let (u, c) = target.vertex_label(v);
            let x = target.coset_table.coset_reps()[c];
            values[mid_q.vertex(u, mid_q.coset_table.coset_of(x))]
        })
        .collect())
}

/// Reads a field given on the full cover down to `G\M`, failing with the
/// first `G`-orbit on which it is not constant. Cover vertex `(u, x)` has
/// index `u·|Ĝ| + x`.
pub fn invariant_cover_field(
    field: &'static str,
    cover_values: &[f64],
    mid_q: &QuotientGraph,
) -> Result<Vec<f64>> {
    let table = &mid_q.coset_table;
    let order = table.coset_reps().len() * table.subgroup().order();
    let base_vertices = mid_q.graph.vertex_count / mid_q.index();
    if cover_values.len() != base_vertices * order {
        return Err(Error::LengthMismatch(
            cover_values.len(),
            base_vertices * order,
        ));
    }
    let mut out = vec![f64::NAN; mid_q.graph.vertex_count];
    let mut orbits: Vec<Vec<usize>> = vec![Vec::new(); mid_q.graph.vertex_count];
    for u in 0..base_vertices {
        for x in 0..order {
            orbits[mid_q.vertex(u, table.coset_of(x))].push(u * order + x);
        }
    }
    for (v, orbit) in orbits.into_iter().enumerate() {
        let first = cover_values[orbit[0]];
        if orbit.iter().any(|&w| cover_values[w] != first) {
            let values = orbit.iter().map(|&w| cover_values[w]).collect();
            return Err(Error::NotInvariant {
                field,
                orbit,
                values,
            });
        }
        out[v] = first;
    }
    Ok(out)
}

/// `σ*∇₂` on `M₁`: the phase on the lift of `e` at `Γ₁x` is the phase of
/// `conn2` on the lift of `e` at `Γ₂τx`.
pub fn pullback_by_sigma(
    vg: &VoltageGraph,
    conn2: &ConnectionData,
    tau: usize,
    m1: &QuotientGraph,
    m2: &QuotientGraph,
) -> Result<ConnectionData> {
    sigma_map(vg, m1, m2, tau)?;
    let emap = sigma_edge_map(vg, m1, m2, tau);
    let mut phases = BTreeMap::new();
    for (e, &f) in emap.iter().enumerate() {
        phases.insert(e, conn2.phase(f)?.clone());
    }
    Ok(ConnectionData { phases })
}

/// `σ*Q` on `M₁`.
pub fn pullback_potential_by_sigma(
    vg: &VoltageGraph,
    q2: &Potential,
    tau: usize,
    m1: &QuotientGraph,
    m2: &QuotientGraph,
) -> Result<Potential> {
    let vmap = sigma_map(vg, m1, m2, tau)?;
    if q2.values.len() != m2.graph.vertex_count {
        return Err(Error::LengthMismatch(
            q2.values.len(),
            m2.graph.vertex_count,
        ));
    }
    Ok(Potential {
        values: vmap.iter().map(|&w| q2.values[w]).collect(),
    })
}
