//! Matching cycles against the music's temporal node sequence.
//!
//! Two views: full-form occurrences (consecutive windows that traverse a
//! cycle's edges, closed or open) and the binary overlap matrix on s-scale,
//! whose row i marks every position sitting inside a run of at least `s`
//! consecutive notes that all belong to cycle i's node set. The overlap
//! statistics (denseness, overlap percentage) are read off that matrix.

use serde::Serialize;

use crate::cycles::Cycle;
use crate::network::MusicGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OccurrenceKind {
    /// Full loop returning to its starting node: length node_count + 1.
    Closed,
    /// All loop nodes once, following loop edges, without closing.
    OpenChain,
    /// All loop nodes once in any order (loose matching only).
    SetRun,
}

/// One appearance of a cycle in the note sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct OccurrenceEvent {
    pub cycle_number: u32,
    /// Index into the node sequence.
    pub start: usize,
    pub len: usize,
    pub kind: OccurrenceKind,
}

impl OccurrenceEvent {
    fn span(&self) -> (usize, usize) {
        (self.start, self.start + self.len)
    }

    fn contains(&self, other: &OccurrenceEvent) -> bool {
        let (a1, b1) = self.span();
        let (a2, b2) = other.span();
        a1 <= a2 && b2 <= b1 && (a1, b1) != (a2, b2)
    }
}

/// Scan the node sequence for whole-form appearances of a cycle, in either
/// traversal direction and from any starting node. With `loose` enabled,
/// windows covering the node set without respecting edge order are reported
/// too (as [`OccurrenceKind::SetRun`]). Windows inside a larger match are
/// dropped; events come back in temporal order.
pub fn find_full_occurrences(
    cycle: &Cycle,
    graph: &MusicGraph,
    loose: bool,
) -> Vec<OccurrenceEvent> {
    let seq = graph.node_sequence();
    let n = cycle.node_count;
    let nodes = cycle.node_set();
    let edges = cycle.edge_set();
    let is_edge = |a: crate::network::NodeId, b: crate::network::NodeId| {
        edges.contains(&if a.0 < b.0 { (a, b) } else { (b, a) })
    };

    let mut events: Vec<OccurrenceEvent> = Vec::new();
    // Closed: node_count + 1 positions, first == last, all steps on loop
    // edges, every loop node visited.
    if seq.len() >= n + 1 {
        'outer: for start in 0..=(seq.len() - n - 1) {
            let w = &seq[start..start + n + 1];
            if w[0] != w[n] {
                continue;
            }
            for i in 0..n {
                if !is_edge(w[i], w[i + 1]) {
                    continue 'outer;
                }
            }
            let covered: std::collections::BTreeSet<_> = w.iter().copied().collect();
            if covered == nodes {
                events.push(OccurrenceEvent {
                    cycle_number: cycle.number,
                    start,
                    len: n + 1,
                    kind: OccurrenceKind::Closed,
                });
            }
        }
    }
    // Open chain: node_count positions, all distinct, all steps on loop
    // edges. Set runs: same length, loop nodes in any order.
    if seq.len() >= n {
        'outer2: for start in 0..=(seq.len() - n) {
            let w = &seq[start..start + n];
            let covered: std::collections::BTreeSet<_> = w.iter().copied().collect();
            if covered != nodes || covered.len() != n {
                continue;
            }
            for i in 0..n - 1 {
                if !is_edge(w[i], w[i + 1]) {
                    if loose {
                        events.push(OccurrenceEvent {
                            cycle_number: cycle.number,
                            start,
                            len: n,
                            kind: OccurrenceKind::SetRun,
                        });
                    }
                    continue 'outer2;
                }
            }
            events.push(OccurrenceEvent {
                cycle_number: cycle.number,
                start,
                len: n,
                kind: OccurrenceKind::OpenChain,
            });
        }
    }
    let kept: Vec<OccurrenceEvent> = events
        .iter()
        .filter(|e| !events.iter().any(|other| other.contains(e)))
        .copied()
        .collect();
    let mut kept = kept;
    kept.sort_by_key(|e| (e.start, e.len));
    kept
}

/// The binary cycle-by-time matrix on s-scale: entry (i, j) is 1 exactly
/// when position j lies inside a run of at least `s` consecutive positions
/// whose notes all belong to cycle i's node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapMatrix {
    pub s: usize,
    /// One row per cycle, in cycle-number order.
    pub rows: Vec<Vec<bool>>,
}

impl OverlapMatrix {
    pub fn cycle_count(&self) -> usize {
        self.rows.len()
    }

    pub fn sequence_len(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Maximal runs of ones as (row, start, end-exclusive) triples, row by
    /// row in temporal order.
    pub fn runs(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut j = 0;
            while j < row.len() {
                if row[j] {
                    let start = j;
                    while j < row.len() && row[j] {
                        j += 1;
                    }
                    out.push((i, start, j));
                } else {
                    j += 1;
                }
            }
        }
        out
    }
}

/// Build the overlap matrix on s-scale from numbered cycles and the note
/// sequence. Rows follow the cycle order given.
pub fn overlap_matrix(cycles: &[Cycle], graph: &MusicGraph, s: usize) -> OverlapMatrix {
    let seq = graph.node_sequence();
    let rows = cycles
        .iter()
        .map(|c| {
            let nodes = c.node_set();
            let membership: Vec<bool> = seq.iter().map(|id| nodes.contains(id)).collect();
            keep_runs_of_at_least(&membership, s)
        })
        .collect();
    OverlapMatrix { s, rows }
}

/// Zero out every run of ones shorter than `s`.
pub fn keep_runs_of_at_least(membership: &[bool], s: usize) -> Vec<bool> {
    let mut out = vec![false; membership.len()];
    let mut j = 0;
    while j < membership.len() {
        if membership[j] {
            let start = j;
            while j < membership.len() && membership[j] {
                j += 1;
            }
            if j - start >= s {
                out[start..j].fill(true);
            }
        } else {
            j += 1;
        }
    }
    out
}

/// How simultaneity events are counted for the overlap percentage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NsMode {
    /// Unordered pairs of runs from distinct rows whose column spans
    /// intersect.
    #[default]
    RunPairs,
    /// Maximal column intervals in which at least two rows are active.
    ColumnIntervals,
}

impl std::fmt::Display for NsMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NsMode::RunPairs => write!(f, "run-pairs"),
            NsMode::ColumnIntervals => write!(f, "column-intervals"),
        }
    }
}

/// Occupancy and simultaneity statistics of an overlap matrix. Both
/// simultaneity counting modes are always computed so reports can show
/// them side by side.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct OverlapStats {
    /// Number of 1 entries.
    pub a_c: u64,
    /// Total entries (cycles x sequence length).
    pub a_f: u64,
    /// a_c / a_f; 0 for an empty matrix.
    pub denseness: f64,
    /// Total maximal runs across rows.
    pub n_c: u64,
    pub n_s_run_pairs: u64,
    pub n_s_column_intervals: u64,
    pub overlap_percent_run_pairs: f64,
    pub overlap_percent_column_intervals: f64,
}

impl OverlapStats {
    pub fn n_s(&self, mode: NsMode) -> u64 {
        match mode {
            NsMode::RunPairs => self.n_s_run_pairs,
            NsMode::ColumnIntervals => self.n_s_column_intervals,
        }
    }

    pub fn overlap_percent(&self, mode: NsMode) -> f64 {
        match mode {
            NsMode::RunPairs => self.overlap_percent_run_pairs,
            NsMode::ColumnIntervals => self.overlap_percent_column_intervals,
        }
    }
}

pub fn overlap_stats(m: &OverlapMatrix) -> OverlapStats {
    let k = m.cycle_count();
    let d = m.sequence_len();
    let a_f = (k * d) as u64;
    let a_c = m.rows.iter().flatten().filter(|&&b| b).count() as u64;
    let runs = m.runs();
    let n_c = runs.len() as u64;

    let mut run_pairs = 0u64;
    for (i, &(r1, s1, e1)) in runs.iter().enumerate() {
        for &(r2, s2, e2) in &runs[i + 1..] {
            if r1 != r2 && s1 < e2 && s2 < e1 {
                run_pairs += 1;
            }
        }
    }

    let mut column_intervals = 0u64;
    let mut in_interval = false;
    for j in 0..d {
        let active = m.rows.iter().filter(|row| row[j]).count();
        if active >= 2 {
            if !in_interval {
                column_intervals += 1;
                in_interval = true;
            }
        } else {
            in_interval = false;
        }
    }

    let pct = |n_s: u64| if n_c == 0 { 0.0 } else { 100.0 * n_s as f64 / n_c as f64 };
    OverlapStats {
        a_c,
        a_f,
        denseness: if a_f == 0 { 0.0 } else { a_c as f64 / a_f as f64 },
        n_c,
        n_s_run_pairs: run_pairs,
        n_s_column_intervals: column_intervals,
        overlap_percent_run_pairs: pct(run_pairs),
        overlap_percent_column_intervals: pct(column_intervals),
    }
}

/// Literal form of the s-scale condition: position `j` qualifies when some
/// backward reach `l` and forward reach `t` with `t + l >= s - 1` keep every
/// position from `j - l` to `j + t` inside the membership set. Used as the
/// oracle for the run-based construction.
pub fn s_scale_by_quantifier(membership: &[bool], s: usize, j: usize) -> bool {
    if !membership[j] {
        return false;
    }
    let d = membership.len();
    for l in 0..=j {
        if (j - l..=j).any(|p| !membership[p]) {
            break;
        }
        for t in 0..(d - j) {
            if membership[j + t] && t + l + 1 >= s {
                return true;
            }
            if !membership[j + t] {
                break;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{Cycle, CycleEdge};
    use crate::network::{build_network, MusicGraph, NodeId};
    use crate::notation::parse_score;

    /// Hand-built cycle over the given loop; weights/distances are dummies.
    fn cycle_over(number: u32, loop_nodes: &[usize]) -> Cycle {
        let node_loop: Vec<NodeId> = loop_nodes.iter().map(|&i| NodeId(i)).collect();
        let edges = (0..node_loop.len())
            .map(|i| CycleEdge {
                a: node_loop[i],
                b: node_loop[(i + 1) % node_loop.len()],
                weight: Some(1),
                distance: 1.0,
            })
            .collect();
        Cycle {
            number,
            birth: 0.5,
            death: 1.0,
            node_count: node_loop.len(),
            node_loop,
            edges,
            average_weight: 1.0,
            residual_edge_count: 0,
        }
    }

    /// Graph whose node sequence is exactly `seq` over max(seq)+1 nodes.
    fn graph_with_sequence(seq: &[usize]) -> MusicGraph {
        // pitches indexed by node id; every node is (pitch i, 1 beat)
        let tokens = ["jung", "im", "nam", "hwang", "tae", "jung'", "im'", "nam'", "hwang'", "tae'"];
        let src: String = seq.iter().map(|&i| format!("{}\n", tokens[i])).collect();
        let g = build_network(&parse_score(&src).unwrap()).unwrap();
        // node ids follow pitch order = our order because durations equal
        assert_eq!(
            g.node_sequence().iter().map(|n| n.0).collect::<Vec<_>>(),
            seq.to_vec()
        );
        g
    }

    #[test]
    fn closed_occurrence_found_once() {
        // loop 0-1-2-3; sequence walks it closed, with separators (node 4).
        let g = graph_with_sequence(&[4, 0, 1, 2, 3, 0, 4]);
        let c = cycle_over(1, &[0, 1, 2, 3]);
        let ev = find_full_occurrences(&c, &g, false);
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, OccurrenceKind::Closed);
        assert_eq!((ev[0].start, ev[0].len), (1, 5));
    }

    #[test]
    fn open_chain_without_return() {
        let g = graph_with_sequence(&[4, 1, 2, 3, 0, 4]);
        let c = cycle_over(1, &[0, 1, 2, 3]);
        let ev = find_full_occurrences(&c, &g, false);
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, OccurrenceKind::OpenChain);
        assert_eq!((ev[0].start, ev[0].len), (1, 4));
    }

    #[test]
    fn reverse_direction_counts() {
        let g = graph_with_sequence(&[4, 3, 2, 1, 0, 4]);
        let c = cycle_over(1, &[0, 1, 2, 3]);
        let ev = find_full_occurrences(&c, &g, false);
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, OccurrenceKind::OpenChain);
    }

    #[test]
    fn set_run_only_with_loose() {
        // 0, 2, 1, 3 covers the node set but 0-2 and 1-3 are loop diagonals.
        let g = graph_with_sequence(&[4, 0, 2, 1, 3, 4]);
        let c = cycle_over(1, &[0, 1, 2, 3]);
        assert!(find_full_occurrences(&c, &g, false).is_empty());
        let ev = find_full_occurrences(&c, &g, true);
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, OccurrenceKind::SetRun);
    }

    #[test]
    fn sub_windows_of_closed_are_suppressed() {
        let g = graph_with_sequence(&[0, 1, 2, 3, 0]);
        let c = cycle_over(1, &[0, 1, 2, 3]);
        let ev = find_full_occurrences(&c, &g, true);
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, OccurrenceKind::Closed);
    }

    #[test]
    fn overlap_matrix_rows() {
        // cycle nodes {0, 1}, sequence [0, 1, 2], s = 2 -> row 1 1 0.
        let g = graph_with_sequence(&[0, 1, 2]);
        let c = cycle_over(1, &[0, 1]);
        let m = overlap_matrix(&[c], &g, 2);
        assert_eq!(m.rows, vec![vec![true, true, false]]);
    }

    #[test]
    fn scale_larger_than_longest_run_clears_row() {
        let g = graph_with_sequence(&[0, 1, 2, 0, 1, 2]);
        let c = cycle_over(1, &[0, 1]);
        let m = overlap_matrix(&[c], &g, 3);
        assert!(m.rows[0].iter().all(|&b| !b));
    }

    #[test]
    fn stats_on_small_matrix() {
        // 2x5 with 3 ones -> denseness 0.3
        let m = OverlapMatrix {
            s: 1,
            rows: vec![
                vec![true, true, false, false, false],
                vec![false, false, true, false, false],
            ],
        };
        let st = overlap_stats(&m);
        assert_eq!(st.a_c, 3);
        assert_eq!(st.a_f, 10);
        assert_eq!(st.denseness, 0.3);
    }

    #[test]
    fn intersecting_runs_count_one_pair() {
        // runs [1..3] and [2..4] (inclusive) intersect -> N_c 2, N_s 1, 50%.
        let m = OverlapMatrix {
            s: 1,
            rows: vec![
                vec![false, true, true, true, false],
                vec![false, false, true, true, true],
            ],
        };
        let st = overlap_stats(&m);
        assert_eq!(st.n_c, 2);
        assert_eq!(st.n_s_run_pairs, 1);
        assert_eq!(st.overlap_percent_run_pairs, 50.0);
        assert_eq!(st.n_s_column_intervals, 1);
    }

    #[test]
    fn single_row_never_overlaps() {
        let m = OverlapMatrix { s: 1, rows: vec![vec![true, true, true]] };
        let st = overlap_stats(&m);
        assert_eq!(st.n_s_run_pairs, 0);
        assert_eq!(st.overlap_percent_run_pairs, 0.0);
    }

    #[test]
    fn quantifier_form_matches_runs() {
        let membership = vec![true, true, false, true, true, true, false, true];
        for s in 1..=5 {
            let by_runs = keep_runs_of_at_least(&membership, s);
            for j in 0..membership.len() {
                assert_eq!(
                    by_runs[j],
                    s_scale_by_quantifier(&membership, s, j),
                    "mismatch at s={s}, j={j}"
                );
            }
        }
    }

    #[test]
    fn empty_matrix_stats() {
        let m = OverlapMatrix { s: 4, rows: vec![] };
        let st = overlap_stats(&m);
        assert_eq!(st.denseness, 0.0);
        assert_eq!(st.overlap_percent_run_pairs, 0.0);
    }
}
