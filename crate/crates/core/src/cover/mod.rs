//! Voltage graphs, their derived covers, and quotients of those covers by
//! subgroups of the voltage group.
//!
//! A base edge `e: u -> v` with voltage `σ` lifts to the cover edges
//! `(u, x) -> (v, x σ)` for every group element `x`. The deck group acts by
//! left multiplication, `h · (u, x) = (u, h x)`, which commutes with the right
//! multiplication used by edges. The quotient by `H` therefore lives on pairs
//! `(u, Hx)` and is built straight from the right-coset table of `H`.

mod iso;

use std::sync::Arc;

use serde::Serialize;

pub use iso::{graph_isomorphic, is_isomorphism, IsoCertificate, IsoVerdict, VERTEX_CAP};

use crate::error::{Error, Result};
use crate::group::{coset_action, CosetTable, PermGroup, Subgroup};

/// Finite multigraph with oriented edges. Loops and parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Multigraph {
    pub vertex_count: usize,
    /// `(tail, head)` per edge.
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(t, h)) in edges.iter().enumerate() {
            if t >= vertex_count || h >= vertex_count {
                return Err(Error::validation(
                    format!("edges[{i}]"),
                    format!("endpoint out of range for {vertex_count} vertices"),
                ));
            }
        }
        Ok(Multigraph {
            vertex_count,
            edges,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Each vertex's incident edges in edge order, as `(edge, neighbour)`. A
    /// loop is listed twice.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            inc[t].push((e, h));
            inc[h].push((e, t));
        }
        inc
    }

    /// Degree with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for &(t, h) in &self.edges {
            d[t] += 1;
            d[h] += 1;
        }
        d
    }

    pub fn cycle(n: usize) -> Self {
        Multigraph {
            vertex_count: n,
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    pub fn path(n: usize) -> Self {
        Multigraph {
            vertex_count: n,
            edges: (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }
}

/// Number of connected components.
pub fn connectivity(g: &Multigraph) -> usize {
    let inc = g.incidence();
    let mut seen = vec![false; g.vertex_count];
    let mut components = 0;
    for start in 0..g.vertex_count {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(_, w) in &inc[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    components
}

/// Base multigraph whose edges carry external ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    pub graph: Multigraph,
    pub ids: Vec<u64>,
}

impl BaseGraph {
    pub fn new(graph: Multigraph, ids: Vec<u64>) -> Result<Self> {
        if ids.len() != graph.edge_count() {
            return Err(Error::LengthMismatch(ids.len(), graph.edge_count()));
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("edges", "edge ids are not unique"));
        }
        Ok(BaseGraph { graph, ids })
    }

    /// Ids are the edge positions.
    pub fn from_graph(graph: Multigraph) -> Self {
        let ids = (0..graph.edge_count() as u64).collect();
        BaseGraph { graph, ids }
    }

    pub fn edge_index(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }
}

#[derive(Debug, Clone)]
pub struct VoltageGraph {
    pub base: BaseGraph,
    pub group: Arc<PermGroup>,
    /// Element index of each base edge's voltage.
    pub voltages: Vec<usize>,
}

impl VoltageGraph {
    pub fn new(base: BaseGraph, group: Arc<PermGroup>, voltages: Vec<usize>) -> Result<Self> {
        if voltages.len() != base.graph.edge_count() {
            return Err(Error::LengthMismatch(
                voltages.len(),
                base.graph.edge_count(),
            ));
        }
        if let Some(i) = voltages.iter().position(|&v| v >= group.order()) {
            return Err(Error::validation(
                format!("edges[{i}].voltage"),
                "voltage is not an element of the group",
            ));
        }
        Ok(VoltageGraph {
            base,
            group,
            voltages,
        })
    }
}

/// Quotient of the derived cover by a subgroup `H`. Vertex `(u, c)` has
/// index `u * index + c`; the lift of base edge `e` starting at coset `c`
/// has index `e * index + c`.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    pub graph: Multigraph,
    pub parent_edge: Vec<usize>,
    pub coset_table: CosetTable,
}

impl QuotientGraph {
    pub fn index(&self) -> usize {
        self.coset_table.index()
    }

    pub fn vertex(&self, base_vertex: usize, coset: usize) -> usize {
        base_vertex * self.index() + coset
    }

    /// `(base vertex, coset)` of a quotient vertex.
    pub fn vertex_label(&self, v: usize) -> (usize, usize) {
        (v / self.index(), v % self.index())
    }

    pub fn edge(&self, base_edge: usize, coset: usize) -> usize {
        base_edge * self.index() + coset
    }

    /// `(base edge, coset of the tail)` of a quotient edge.
    pub fn edge_label(&self, e: usize) -> (usize, usize) {
        (e / self.index(), e % self.index())
    }
}

pub fn quotient(vg: &VoltageGraph, h: &Subgroup) -> QuotientGraph {
    let table = coset_action(&vg.group, h);
    let idx = table.index();
    let base = &vg.base.graph;
    let mut edges = Vec::with_capacity(base.edge_count() * idx);
    let mut parent_edge = Vec::with_capacity(base.edge_count() * idx);
    for (e, &(u, v)) in base.edges.iter().enumerate() {
        for c in 0..idx {
            let d = table.act(&vg.group, c, vg.voltages[e]);
            edges.push((u * idx + c, v * idx + d));
            parent_edge.push(e);
        }
    }
    QuotientGraph {
        graph: Multigraph {
            vertex_count: base.vertex_count * idx,
            edges,
        },
        parent_edge,
        coset_table: table,
    }
}

/// The full derived cover: the quotient by the trivial subgroup.
pub fn derive_cover(vg: &VoltageGraph) -> QuotientGraph {
    quotient(vg, &Subgroup::trivial(&vg.group))
}

/// True iff no non-identity element of `h` fixes a vertex of the derived
/// cover under the deck action `(u, x) -> (u, h x)`.
pub fn check_free_action(vg: &VoltageGraph, h: &Subgroup) -> bool {
    let g = &vg.group;
    h.elements()
        .iter()
        .filter(|&&x| x != g.identity())
        .all(|&x| (0..g.order()).all(|y| g.mul(x, y) != y))
}

/// Vertex map `(u, Γ1 x) -> (u, Γ2 τ x)` between two quotients. Requires
/// `τ Γ1 τ^-1 = Γ2`.
pub fn sigma_map(
    vg: &VoltageGraph,
    m1: &QuotientGraph,
    m2: &QuotientGraph,
    tau: usize,
) -> Result<Vec<usize>> {
    let g = &vg.group;
    let conj = m1.coset_table.subgroup().conjugated(g, tau);
    if !conj.same_elements(m2.coset_table.subgroup()) {
        return Err(Error::NotNormalizing);
    }
    let t1 = &m1.coset_table;
    let t2 = &m2.coset_table;
    Ok((0..m1.graph.vertex_count)
        .map(|v| {
            let (u, c) = m1.vertex_label(v);
            let x = t1.coset_reps()[c];
            m2.vertex(u, t2.coset_of(g.mul(tau, x)))
        })
        .collect())
}

/// Edge map matching [`sigma_map`]: lift of `e` at `Γ1 x` goes to the lift
/// of `e` at `Γ2 τ x`.
pub fn sigma_edge_map(
    vg: &VoltageGraph,
    m1: &QuotientGraph,
    m2: &QuotientGraph,
    tau: usize,
) -> Vec<usize> {
    let g = &vg.group;
    (0..m1.graph.edge_count())
        .map(|e| {
            let (be, c) = m1.edge_label(e);
            let x = m1.coset_table.coset_reps()[c];
            m2.edge(be, m2.coset_table.coset_of(g.mul(tau, x)))
        })
        .collect()
}
