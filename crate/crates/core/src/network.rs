//! Weighted music network built from a score.
//!
//! A node is a distinct (pitch, length) pair; nodes are numbered in ascending
//! (pitch, length) order. Two nodes are joined whenever they sound adjacent
//! in time, and the edge weight counts those adjacencies. The dissimilarity
//! between two nodes is the sum of inverse weights along a minimum-hop path
//! (ties broken by the smaller inverse-weight sum), so heavily co-occurring
//! notes end up close. The result is a genuine dissimilarity, not a metric:
//! the triangle inequality is not guaranteed and nothing downstream assumes
//! it.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::notation::{Duration, Pitch, Score};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("cannot build a network from an empty score")]
    EmptyScore,
    #[error("graph is disconnected: no path between nodes {0} and {1}")]
    Disconnected(usize, usize),
    #[error("invalid edge ({0}, {1}): {2}")]
    InvalidEdge(usize, usize, String),
    #[error("invalid dissimilarity matrix: {0}")]
    InvalidMatrix(String),
}

/// Dense 0-based node index. Printed as `n0`, `n1`, ... to match the node
/// catalog.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, serde::Deserialize,
)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Undirected weighted adjacency over (pitch, length) nodes plus the score
/// rendered as a node sequence in temporal order.
#[derive(Debug, Clone)]
pub struct MusicGraph {
    nodes: Vec<(Pitch, Duration)>,
    /// Edge weights keyed by (i, j) with i < j; weights are >= 1.
    weights: BTreeMap<(usize, usize), u64>,
    node_sequence: Vec<NodeId>,
}

impl MusicGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[(Pitch, Duration)] {
        &self.nodes
    }

    pub fn node_sequence(&self) -> &[NodeId] {
        &self.node_sequence
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, a: NodeId, b: NodeId) -> Option<u64> {
        let key = if a.0 < b.0 { (a.0, b.0) } else { (b.0, a.0) };
        self.weights.get(&key).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u64)> + '_ {
        self.weights.iter().map(|(&(i, j), &w)| (NodeId(i), NodeId(j), w))
    }

    /// Neighbors of `v` with edge weights, ascending by node index.
    pub fn neighbors(&self, v: NodeId) -> Vec<(NodeId, u64)> {
        let mut out: Vec<(NodeId, u64)> = Vec::new();
        for (&(i, j), &w) in &self.weights {
            if i == v.0 {
                out.push((NodeId(j), w));
            } else if j == v.0 {
                out.push((NodeId(i), w));
            }
        }
        out.sort_by_key(|(n, _)| n.0);
        out
    }

    /// Build a graph from a bare node sequence: weights count adjacent
    /// unordered pairs exactly as [`build_network`] does, but node identity
    /// is given directly instead of through (pitch, length) labels.
    pub fn from_node_sequence(
        node_count: usize,
        sequence: &[usize],
    ) -> Result<MusicGraph, NetworkError> {
        if let Some(&bad) = sequence.iter().find(|&&v| v >= node_count) {
            return Err(NetworkError::InvalidEdge(bad, bad, "sequence id out of range".into()));
        }
        let nodes = placeholder_nodes(node_count);
        let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for pair in sequence.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a != b {
                let key = if a < b { (a, b) } else { (b, a) };
                *weights.entry(key).or_insert(0) += 1;
            }
        }
        Ok(MusicGraph {
            nodes,
            weights,
            node_sequence: sequence.iter().map(|&v| NodeId(v)).collect(),
        })
    }

    /// Build a graph directly from weighted edges, for analyses that start
    /// from an adjacency rather than a score. Nodes get placeholder
    /// (pitch, length) labels and the node sequence is empty.
    pub fn from_weighted_edges(
        node_count: usize,
        edges: &[(usize, usize, u64)],
    ) -> Result<MusicGraph, NetworkError> {
        let nodes = placeholder_nodes(node_count);
        let mut weights = BTreeMap::new();
        for &(a, b, w) in edges {
            if a >= node_count || b >= node_count {
                return Err(NetworkError::InvalidEdge(a, b, "endpoint out of range".into()));
            }
            if a == b {
                return Err(NetworkError::InvalidEdge(a, b, "self-loops not allowed".into()));
            }
            if w == 0 {
                return Err(NetworkError::InvalidEdge(a, b, "zero weight".into()));
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if weights.insert(key, w).is_some() {
                return Err(NetworkError::InvalidEdge(a, b, "duplicate edge".into()));
            }
        }
        Ok(MusicGraph { nodes, weights, node_sequence: Vec::new() })
    }
}

/// Distinct dummy labels for graphs built without a score.
fn placeholder_nodes(node_count: usize) -> Vec<(Pitch, Duration)> {
    (0..node_count)
        .map(|i| {
            (
                Pitch::from_index(0).unwrap(),
                Duration::new(i as i64 + 1, 1).unwrap(),
            )
        })
        .collect()
}

/// Build the music network of a score: one node per distinct (pitch, length)
/// pair, edges counting adjacent occurrences. Consecutive repeats of the
/// same node add no edge.
pub fn build_network(score: &Score) -> Result<MusicGraph, NetworkError> {
    if score.events.is_empty() {
        return Err(NetworkError::EmptyScore);
    }
    let mut nodes: Vec<(Pitch, Duration)> =
        score.events.iter().map(|e| (e.pitch, e.duration)).collect();
    nodes.sort();
    nodes.dedup();

    let index_of = |pitch: Pitch, duration: Duration| -> usize {
        nodes.binary_search(&(pitch, duration)).expect("every event node is cataloged")
    };
    let node_sequence: Vec<NodeId> = score
        .events
        .iter()
        .map(|e| NodeId(index_of(e.pitch, e.duration)))
        .collect();

    let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for pair in node_sequence.windows(2) {
        let (a, b) = (pair[0].0, pair[1].0);
        if a != b {
            let key = if a < b { (a, b) } else { (b, a) };
            *weights.entry(key).or_insert(0) += 1;
        }
    }
    Ok(MusicGraph { nodes, weights, node_sequence })
}

/// Which path objective defines the dissimilarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MetricMode {
    /// Fewest edges first, then smallest inverse-weight sum.
    #[default]
    MinHop,
    /// Smallest inverse-weight sum outright.
    MinCost,
}

impl fmt::Display for MetricMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricMode::MinHop => write!(f, "min-hop"),
            MetricMode::MinCost => write!(f, "min-cost"),
        }
    }
}

/// Symmetric, zero-diagonal table of exact pairwise dissimilarities.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    entries: Vec<BigRational>, // row-major n*n
}

impl DissimilarityMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_f64().unwrap()).collect())
            .collect()
    }

    /// Validate and wrap a raw floating-point matrix (each entry kept as the
    /// exact rational value of its float).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<DissimilarityMatrix, NetworkError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(NetworkError::InvalidMatrix("matrix is not square".into()));
        }
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let v = rows[i][j];
                if !v.is_finite() {
                    return Err(NetworkError::InvalidMatrix(format!(
                        "entry ({i}, {j}) is not finite"
                    )));
                }
                let r = BigRational::from_float(v)
                    .ok_or_else(|| NetworkError::InvalidMatrix("non-finite entry".into()))?;
                if r.is_negative() {
                    return Err(NetworkError::InvalidMatrix(format!(
                        "entry ({i}, {j}) is negative"
                    )));
                }
                entries[i * n + j] = r;
            }
        }
        for i in 0..n {
            if !entries[i * n + i].is_zero() {
                return Err(NetworkError::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(NetworkError::InvalidMatrix(format!(
                        "asymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(DissimilarityMatrix { n, entries })
    }
}

/// Path cost tracked by the all-pairs sweep: hop count plus exact
/// inverse-weight sum.
#[derive(Debug, Clone, PartialEq, Eq)]
struct PathCost {
    hops: u64,
    cost: BigRational,
}

impl PathCost {
    fn key(&self, mode: MetricMode) -> (u64, &BigRational, u64) {
        match mode {
            MetricMode::MinHop => (self.hops, &self.cost, 0),
            MetricMode::MinCost => (0, &self.cost, self.hops),
        }
    }

    fn better_than(&self, other: &PathCost, mode: MetricMode) -> bool {
        self.key(mode) < other.key(mode)
    }
}

/// All-pairs dissimilarities per the inverse-weight path objective.
/// Floyd-Warshall over the (hops, cost) ordering; exact arithmetic
/// throughout.
pub fn distance_matrix(
    graph: &MusicGraph,
    mode: MetricMode,
) -> Result<DissimilarityMatrix, NetworkError> {
    let n = graph.node_count();
    let mut best: Vec<Option<PathCost>> = vec![None; n * n];
    for i in 0..n {
        best[i * n + i] = Some(PathCost { hops: 0, cost: BigRational::zero() });
    }
    for (a, b, w) in graph.edges() {
        let cost = PathCost {
            hops: 1,
            cost: BigRational::new(BigInt::one(), BigInt::from(w)),
        };
        best[a.0 * n + b.0] = Some(cost.clone());
        best[b.0 * n + a.0] = Some(cost);
    }
    for k in 0..n {
        for i in 0..n {
            if i == k {
                continue;
            }
            let Some(ik) = best[i * n + k].clone() else { continue };
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let Some(kj) = &best[k * n + j] else { continue };
                let via = PathCost { hops: ik.hops + kj.hops, cost: &ik.cost + &kj.cost };
                match &best[i * n + j] {
                    Some(cur) if !via.better_than(cur, mode) => {}
                    _ => best[i * n + j] = Some(via),
                }
            }
        }
    }
    let mut entries = vec![BigRational::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            match &best[i * n + j] {
                Some(pc) => entries[i * n + j] = pc.cost.clone(),
                None => return Err(NetworkError::Disconnected(i, j)),
            }
        }
    }
    Ok(DissimilarityMatrix { n, entries })
}

/// The minimum-hop path realizing the dissimilarity between two nodes,
/// with ties broken by inverse-weight sum and then by the lexicographically
/// smallest node sequence. Mostly useful for inspecting why two nodes are
/// close.
pub fn min_edge_path(
    graph: &MusicGraph,
    from: NodeId,
    to: NodeId,
    mode: MetricMode,
) -> Result<Vec<NodeId>, NetworkError> {
    let n = graph.node_count();
    if from == to {
        return Ok(vec![from]);
    }
    // Bellman-Ford style relaxation over (cost key, path) with full path
    // comparison; fine at catalog sizes.
    let mut best: Vec<Option<(PathCost, Vec<NodeId>)>> = vec![None; n];
    best[from.0] = Some((PathCost { hops: 0, cost: BigRational::zero() }, vec![from]));
    for _ in 0..n {
        let mut changed = false;
        for (a, b, w) in graph.edges() {
            for (u, v) in [(a, b), (b, a)] {
                let Some((cu, pu)) = best[u.0].clone() else { continue };
                let cand = PathCost {
                    hops: cu.hops + 1,
                    cost: cu.cost + BigRational::new(BigInt::one(), BigInt::from(w)),
                };
                let mut path = pu;
                path.push(v);
                let better = match &best[v.0] {
                    None => true,
                    Some((cv, pv)) => {
                        cand.better_than(cv, mode)
                            || (!cv.better_than(&cand, mode) && path < *pv)
                    }
                };
                if better {
                    best[v.0] = Some((cand, path));
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    best[to.0]
        .take()
        .map(|(_, p)| p)
        .ok_or(NetworkError::Disconnected(from.0, to.0))
}

/// One row of the node-frequency table.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct FrequencyRow {
    pub rank: usize,
    pub node: NodeId,
    pub count: u64,
    /// Base-10 log of the count, for semi-log rank plots.
    pub log10_count: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct FrequencyTable {
    pub rows: Vec<FrequencyRow>,
}

/// Occurrence counts per node, ranked by descending count with ties broken
/// by ascending node index.
pub fn frequency_table(graph: &MusicGraph) -> FrequencyTable {
    let mut counts = vec![0u64; graph.node_count()];
    for id in graph.node_sequence() {
        counts[id.0] += 1;
    }
    let mut order: Vec<usize> = (0..graph.node_count()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(counts[i]), i));
    let rows = order
        .into_iter()
        .enumerate()
        .map(|(r, i)| FrequencyRow {
            rank: r + 1,
            node: NodeId(i),
            count: counts[i],
            log10_count: (counts[i] as f64).log10(),
        })
        .collect();
    FrequencyTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_score;

    fn graph_of(src: &str) -> MusicGraph {
        build_network(&parse_score(src).unwrap()).unwrap()
    }

    #[test]
    fn aba_sequence_weights() {
        // A=hwang(1), B=tae(1): sequence A B A -> w_AB = 2.
        let g = graph_of("hwang\ntae\nhwang\n");
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.weight(NodeId(0), NodeId(1)), Some(2));
        assert_eq!(g.node_sequence().len(), 3);
    }

    #[test]
    fn single_event_graph() {
        let g = graph_of("hwang\n");
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn consecutive_repeats_add_no_edge() {
        let g = graph_of("hwang\nhwang\ntae\n");
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.weight(NodeId(0), NodeId(1)), Some(1));
    }

    #[test]
    fn nodes_sorted_by_pitch_then_length() {
        // tae(1/2), tae(1/2) ... events: hwang 1, tae 1/2 tae... craft:
        // hwang(1), tae(1), hwang(1/2)+hwang(1/2)
        let g = graph_of("hwang\ntae\nhwang hwang\n");
        let names: Vec<String> = g
            .nodes()
            .iter()
            .map(|(p, d)| format!("{} {}", p.scientific(), d))
            .collect();
        assert_eq!(names, vec!["D#4 1/2", "D#4 1", "F4 1"]);
    }

    #[test]
    fn empty_score_rejected() {
        let score = parse_score("#title empty\n").unwrap();
        assert!(matches!(build_network(&score), Err(NetworkError::EmptyScore)));
    }

    #[test]
    fn single_edge_distance_is_inverse_weight() {
        let g = MusicGraph::from_weighted_edges(2, &[(0, 1, 4)]).unwrap();
        let d = distance_matrix(&g, MetricMode::MinHop).unwrap();
        assert_eq!(*d.get(0, 1), BigRational::new(1.into(), 4.into()));
        assert!(d.get(0, 0).is_zero());
    }

    #[test]
    fn chain_distance_sums_inverse_weights() {
        // A-B w=2, B-C w=4; d_AC = 1/2 + 1/4 = 3/4.
        let g = MusicGraph::from_weighted_edges(3, &[(0, 1, 2), (1, 2, 4)]).unwrap();
        let d = distance_matrix(&g, MetricMode::MinHop).unwrap();
        assert_eq!(*d.get(0, 2), BigRational::new(3.into(), 4.into()));
    }

    #[test]
    fn min_hop_beats_cheaper_longer_path() {
        // Direct edge 0-2 w=1 (cost 1, 1 hop); path 0-1-2 w=10 each
        // (cost 1/5, 2 hops). Min-hop picks the direct edge; min-cost the
        // detour.
        let g =
            MusicGraph::from_weighted_edges(3, &[(0, 2, 1), (0, 1, 10), (1, 2, 10)]).unwrap();
        let hop = distance_matrix(&g, MetricMode::MinHop).unwrap();
        let cost = distance_matrix(&g, MetricMode::MinCost).unwrap();
        assert_eq!(*hop.get(0, 2), BigRational::from_integer(1.into()));
        assert_eq!(*cost.get(0, 2), BigRational::new(1.into(), 5.into()));
    }

    #[test]
    fn min_hop_tie_broken_by_cost() {
        // Two 2-hop routes 0-1-3 (w 2,2 -> cost 1) and 0-2-3 (w 4,4 -> 1/2).
        let g = MusicGraph::from_weighted_edges(
            4,
            &[(0, 1, 2), (1, 3, 2), (0, 2, 4), (2, 3, 4)],
        )
        .unwrap();
        let d = distance_matrix(&g, MetricMode::MinHop).unwrap();
        assert_eq!(*d.get(0, 3), BigRational::new(1.into(), 2.into()));
        let p = min_edge_path(&g, NodeId(0), NodeId(3), MetricMode::MinHop).unwrap();
        assert_eq!(p, vec![NodeId(0), NodeId(2), NodeId(3)]);
    }

    #[test]
    fn full_tie_broken_lexicographically() {
        // Both 2-hop routes cost 1/2+1/2; the n1 route is lexicographically
        // first.
        let g = MusicGraph::from_weighted_edges(
            4,
            &[(0, 1, 2), (1, 3, 2), (0, 2, 2), (2, 3, 2)],
        )
        .unwrap();
        let p = min_edge_path(&g, NodeId(0), NodeId(3), MetricMode::MinHop).unwrap();
        assert_eq!(p, vec![NodeId(0), NodeId(1), NodeId(3)]);
    }

    #[test]
    fn disconnected_reported() {
        let g = MusicGraph::from_weighted_edges(3, &[(0, 1, 1)]).unwrap();
        assert!(matches!(
            distance_matrix(&g, MetricMode::MinHop),
            Err(NetworkError::Disconnected(_, _))
        ));
    }

    #[test]
    fn frequency_ranking_and_ties() {
        let g = graph_of("hwang\nhwang\ntae\n");
        let t = frequency_table(&g);
        assert_eq!(t.rows[0].node, NodeId(0)); // hwang(1) occurs twice
        assert_eq!(t.rows[0].count, 2);
        assert_eq!(t.rows[1].count, 1);
        let total: u64 = t.rows.iter().map(|r| r.count).sum();
        assert_eq!(total, g.node_sequence().len() as u64);
    }

    #[test]
    fn equal_counts_rank_by_node_index() {
        let g = graph_of("hwang\ntae\nhwang\ntae\n");
        let t = frequency_table(&g);
        assert_eq!(t.rows[0].node, NodeId(0));
        assert_eq!(t.rows[1].node, NodeId(1));
        assert_eq!(t.rows[0].count, t.rows[1].count);
    }

    #[test]
    fn matrix_validation() {
        assert!(DissimilarityMatrix::from_rows(&[
            vec![0.0, 1.0],
            vec![1.0, 0.0]
        ])
        .is_ok());
        assert!(DissimilarityMatrix::from_rows(&[
            vec![0.0, 1.0],
            vec![2.0, 0.0]
        ])
        .is_err());
        assert!(DissimilarityMatrix::from_rows(&[
            vec![0.5, 1.0],
            vec![1.0, 0.0]
        ])
        .is_err());
        assert!(DissimilarityMatrix::from_rows(&[
            vec![0.0, -1.0],
            vec![-1.0, 0.0]
        ])
        .is_err());
    }
}
