//! Numbered cycles from dimension-1 persistence intervals.
//!
//! Each qualifying interval (positive persistence, with a representative)
//! becomes one closed vertex loop. Cycles are numbered by ascending death,
//! ties broken by ascending birth and then by the lexicographically smallest
//! canonical loop, so numbering is reproducible run to run.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::homology::PersistenceInterval;
use crate::network::{DissimilarityMatrix, MusicGraph, NodeId};
use num::ToPrimitive;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("representative is not a union of closed loops: stuck at node {0}")]
    InvalidRepresentative(u32),
    #[error("representative does not contain its own birth edge")]
    MissingBirthEdge,
    #[error("cannot summarize an empty cycle list")]
    EmptyCycleList,
}

/// One edge of a cycle loop. `weight` is the adjacency count when the two
/// nodes are directly connected in the music network; a representative may
/// also use pairs that are only close through intermediate nodes, which have
/// no weight of their own.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleEdge {
    pub a: NodeId,
    pub b: NodeId,
    pub weight: Option<u64>,
    pub distance: f64,
}

/// A numbered 1-cycle with its interval, loop, per-edge annotations and
/// average edge weight (simple mean over the weighted edges).
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    /// 1-based cycle number in death order.
    pub number: u32,
    pub birth: f64,
    pub death: f64,
    /// Closed loop as a cyclic node list (first node not repeated at the
    /// end), rotated/directed canonically.
    pub node_loop: Vec<NodeId>,
    pub edges: Vec<CycleEdge>,
    pub average_weight: f64,
    pub node_count: usize,
    /// Edges of the representative that fell outside the loop kept for this
    /// cycle (a mod-2 representative may carry extra disjoint loops).
    pub residual_edge_count: usize,
}

impl Cycle {
    pub fn node_set(&self) -> BTreeSet<NodeId> {
        self.node_loop.iter().copied().collect()
    }

    /// Unordered edge set of the loop.
    pub fn edge_set(&self) -> BTreeSet<(NodeId, NodeId)> {
        self.edges
            .iter()
            .map(|e| if e.a.0 < e.b.0 { (e.a, e.b) } else { (e.b, e.a) })
            .collect()
    }
}

/// Aggregate cycle statistics: unweighted means over cycles.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CycleSetSummary {
    pub cycle_count: usize,
    pub average_node_number: f64,
    pub average_weight: f64,
}

/// Turn dimension-1 intervals into numbered cycles, annotating edges with
/// network weights and dissimilarities. Zero-length intervals and intervals
/// without representatives are skipped.
pub fn extract_cycles(
    intervals: &[PersistenceInterval],
    graph: &MusicGraph,
    d: &DissimilarityMatrix,
) -> Result<Vec<Cycle>, CycleError> {
    extract_cycles_impl(intervals, d, &|a, b| graph.weight(a, b))
}

/// Cycle extraction when only a dissimilarity matrix is available (no
/// adjacency weights).
pub fn extract_cycles_unweighted(
    intervals: &[PersistenceInterval],
    d: &DissimilarityMatrix,
) -> Result<Vec<Cycle>, CycleError> {
    extract_cycles_impl(intervals, d, &|_, _| None)
}

fn extract_cycles_impl(
    intervals: &[PersistenceInterval],
    d: &DissimilarityMatrix,
    weight_of: &dyn Fn(NodeId, NodeId) -> Option<u64>,
) -> Result<Vec<Cycle>, CycleError> {
    let dist = |a: u32, b: u32| -> f64 {
        d.get(a as usize, b as usize).to_f64().unwrap()
    };
    let mut cycles = Vec::new();
    for iv in intervals {
        if iv.dimension != 1 || iv.is_zero_length() {
            continue;
        }
        let Some(rep) = &iv.representative else { continue };
        if rep.is_empty() {
            continue;
        }
        // The birth edge is the latest edge of the representative in the
        // filtration order (value, then vertex order).
        let birth_edge = *rep
            .iter()
            .max_by(|x, y| {
                dist(x.0, x.1)
                    .partial_cmp(&dist(y.0, y.1))
                    .unwrap()
                    .then(x.cmp(y))
            })
            .expect("representative is non-empty");
        let loops = decompose_into_loops(rep)?;
        let total_edges = rep.len();
        let kept = loops
            .into_iter()
            .find(|l| loop_contains_edge(l, birth_edge))
            .ok_or(CycleError::MissingBirthEdge)?;
        let node_loop: Vec<NodeId> =
            canonical_loop(&kept).into_iter().map(|v| NodeId(v as usize)).collect();
        let mut edges = Vec::with_capacity(node_loop.len());
        for i in 0..node_loop.len() {
            let a = node_loop[i];
            let b = node_loop[(i + 1) % node_loop.len()];
            edges.push(CycleEdge {
                a,
                b,
                weight: weight_of(a, b),
                distance: dist(a.0 as u32, b.0 as u32),
            });
        }
        let weights: Vec<u64> = edges.iter().filter_map(|e| e.weight).collect();
        let average_weight = if weights.is_empty() {
            0.0
        } else {
            weights.iter().sum::<u64>() as f64 / weights.len() as f64
        };
        cycles.push(Cycle {
            number: 0,
            birth: iv.birth,
            death: iv.death,
            node_count: node_loop.len(),
            residual_edge_count: total_edges - edges.len(),
            node_loop,
            edges,
            average_weight,
        });
    }
    cycles.sort_by(|a, b| {
        a.death
            .partial_cmp(&b.death)
            .unwrap()
            .then(a.birth.partial_cmp(&b.birth).unwrap())
            .then_with(|| a.node_loop.cmp(&b.node_loop))
    });
    for (i, c) in cycles.iter_mut().enumerate() {
        c.number = (i + 1) as u32;
    }
    Ok(cycles)
}

/// Split a mod-2 edge set into edge-disjoint simple loops (vertex lists).
/// Deterministic: walks always take the smallest available neighbor.
fn decompose_into_loops(edges: &[(u32, u32)]) -> Result<Vec<Vec<u32>>, CycleError> {
    let mut adj: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    let mut loops = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    loop {
        if stack.is_empty() {
            match adj.iter().find(|(_, ns)| !ns.is_empty()) {
                Some((&v, _)) => stack.push(v),
                None => break,
            }
        }
        let v = *stack.last().unwrap();
        let Some(&u) = adj.get(&v).and_then(|ns| ns.iter().next()) else {
            if stack.len() > 1 {
                return Err(CycleError::InvalidRepresentative(v));
            }
            stack.pop();
            continue;
        };
        adj.get_mut(&v).unwrap().remove(&u);
        adj.get_mut(&u).unwrap().remove(&v);
        if let Some(pos) = stack.iter().position(|&x| x == u) {
            loops.push(stack[pos..].to_vec());
            stack.truncate(pos + 1);
        } else {
            stack.push(u);
        }
    }
    Ok(loops)
}

fn loop_contains_edge(l: &[u32], (a, b): (u32, u32)) -> bool {
    (0..l.len()).any(|i| {
        let (x, y) = (l[i], l[(i + 1) % l.len()]);
        (x, y) == (a, b) || (y, x) == (a, b)
    })
}

/// Rotate the loop so its smallest node comes first and its second node is
/// the smaller of the first node's two neighbors.
fn canonical_loop(l: &[u32]) -> Vec<u32> {
    let n = l.len();
    let start = (0..n).min_by_key(|&i| l[i]).unwrap();
    let forward = l[(start + 1) % n];
    let backward = l[(start + n - 1) % n];
    let mut out = Vec::with_capacity(n);
    if forward <= backward {
        for k in 0..n {
            out.push(l[(start + k) % n]);
        }
    } else {
        for k in 0..n {
            out.push(l[(start + n - k) % n]);
        }
    }
    out
}

/// Unweighted means of node counts and average weights over a cycle set.
pub fn summarize_cycles(cycles: &[Cycle]) -> Result<CycleSetSummary, CycleError> {
    if cycles.is_empty() {
        return Err(CycleError::EmptyCycleList);
    }
    let n = cycles.len() as f64;
    Ok(CycleSetSummary {
        cycle_count: cycles.len(),
        average_node_number: cycles.iter().map(|c| c.node_count as f64).sum::<f64>() / n,
        average_weight: cycles.iter().map(|c| c.average_weight).sum::<f64>() / n,
    })
}

/// For every node of the graph, the sorted numbers of the cycles whose loop
/// contains it (empty for nodes in no cycle).
pub fn cycles_per_node(graph: &MusicGraph, cycles: &[Cycle]) -> BTreeMap<NodeId, Vec<u32>> {
    let mut map: BTreeMap<NodeId, Vec<u32>> =
        (0..graph.node_count()).map(|i| (NodeId(i), Vec::new())).collect();
    for c in cycles {
        for &node in &c.node_loop {
            map.get_mut(&node).expect("cycle node within graph").push(c.number);
        }
    }
    for v in map.values_mut() {
        v.sort_unstable();
        v.dedup();
    }
    map
}
