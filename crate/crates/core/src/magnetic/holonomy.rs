use std::collections::BTreeMap;

use serde::Serialize;

use super::{ConnectionData, Turn};
use crate::cover::Multigraph;
use crate::error::{Error, Result};

/// Spanning forest from breadth-first search, roots and edges taken in
/// increasing index order.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    /// Tree edge entering each vertex, `None` at roots.
    pub parent_edge: Vec<Option<usize>>,
    pub root_of: Vec<usize>,
    pub is_tree_edge: Vec<bool>,
    /// Vertices in discovery order.
    pub order: Vec<usize>,
}

pub fn spanning_forest(graph: &Multigraph) -> SpanningForest {
    let n = graph.vertex_count;
    let inc = graph.incidence();
    let mut parent_edge = vec![None; n];
    let mut root_of = vec![usize::MAX; n];
    let mut is_tree_edge = vec![false; graph.edge_count()];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if root_of[root] != usize::MAX {
            continue;
        }
        root_of[root] = root;
        order.push(root);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(e, w) in &inc[v] {
                if root_of[w] == usize::MAX {
                    root_of[w] = root;
                    parent_edge[w] = Some(e);
                    is_tree_edge[e] = true;
                    order.push(w);
                }
            }
        }
    }
    SpanningForest {
        parent_edge,
        root_of,
        is_tree_edge,
        order,
    }
}

/// Phase accumulated along the tree path from each vertex's root.
fn tree_potential(
    graph: &Multigraph,
    conn: &ConnectionData,
    forest: &SpanningForest,
) -> Result<Vec<Turn>> {
    let mut pot = vec![Turn::zero(); graph.vertex_count];
    for &v in &forest.order {
        if let Some(e) = forest.parent_edge[v] {
            let (t, h) = graph.edges[e];
            let theta = conn.phase(e)?;
            pot[v] = if h == v {
                &pot[t] + theta
            } else {
                &pot[h] - theta
            };
        }
    }
    Ok(pot)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalCycle {
    /// The non-tree edge closing the cycle, traversed along its orientation.
    pub edge: usize,
    /// Holonomy in turns, reduced to `(-1/2, 1/2]`.
    pub holonomy: Turn,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HolonomyReport {
    pub tree_edges: Vec<usize>,
    pub cycles: Vec<FundamentalCycle>,
}

impl HolonomyReport {
    /// Largest angular distance in radians between matching cycles.
    pub fn max_difference(&self, other: &HolonomyReport) -> Result<f64> {
        if self.cycles.len() != other.cycles.len() {
            return Err(Error::LengthMismatch(self.cycles.len(), other.cycles.len()));
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.cycles.iter().zip(&other.cycles) {
            if a.edge != b.edge {
                return Err(Error::DimensionMismatch(
                    "holonomy reports use different cycle bases".into(),
                ));
            }
            worst = worst.max((&a.holonomy - &b.holonomy).centered_radians().abs());
        }
        Ok(worst)
    }
}

/// Holonomy around each fundamental cycle of the deterministic spanning
/// forest: for a non-tree edge `e: u → v` it is `θ_e + A(u) − A(v)`, with
/// `A` the tree potential.
pub fn holonomy_report(graph: &Multigraph, conn: &ConnectionData) -> Result<HolonomyReport> {
    let forest = spanning_forest(graph);
    let pot = tree_potential(graph, conn, &forest)?;
    let mut cycles = Vec::new();
    let mut tree_edges = Vec::new();
    for (e, &(t, h)) in graph.edges.iter().enumerate() {
        if forest.is_tree_edge[e] {
            tree_edges.push(e);
            continue;
        }
        let hol = &(conn.phase(e)? + &pot[t]) - &pot[h];
        cycles.push(FundamentalCycle {
            edge: e,
            holonomy: hol.centered(),
        });
    }
    Ok(HolonomyReport { tree_edges, cycles })
}

/// `θ'(v→w) = θ + gauge(w) − gauge(v)`.
pub fn gauge_transform(
    graph: &Multigraph,
    conn: &ConnectionData,
    gauge: &[Turn],
) -> Result<ConnectionData> {
    if gauge.len() != graph.vertex_count {
        return Err(Error::LengthMismatch(gauge.len(), graph.vertex_count));
    }
    let mut phases = BTreeMap::new();
    for (e, &(t, h)) in graph.edges.iter().enumerate() {
        let theta = &(conn.phase(e)? + &gauge[h]) - &gauge[t];
        phases.insert(e, theta);
    }
    Ok(ConnectionData { phases })
}

/// Gauge that zeroes every tree-edge phase; afterwards each non-tree edge
/// carries its cycle's holonomy.
pub fn tree_gauge(graph: &Multigraph, conn: &ConnectionData) -> Result<Vec<Turn>> {
    let forest = spanning_forest(graph);
    Ok(tree_potential(graph, conn, &forest)?
        .iter()
        .map(|t| -t)
        .collect())
}
