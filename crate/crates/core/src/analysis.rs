//! End-to-end analysis: score or raw matrix in, report out.
//!
//! `analyze_score` runs parse -> network -> dissimilarities -> persistence ->
//! cycles -> occurrences -> overlap; `analyze_matrix` runs the homology part
//! alone for callers that already have a dissimilarity matrix. Both return an
//! [`Analysis`] whose [`Analysis::report`] is the serializable artifact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{
    cycles_per_node, extract_cycles, extract_cycles_unweighted, Cycle, CycleError,
};
use crate::homology::{
    build_filtration, compute_persistence, HomologyError, PersistenceInterval,
};
use crate::network::{
    build_network, distance_matrix, frequency_table, DissimilarityMatrix, FrequencyTable,
    MetricMode, MusicGraph, NetworkError, NodeId,
};
use crate::notation::{Duration, Score, ScoreError};
use crate::overlap::{
    find_full_occurrences, overlap_matrix, overlap_stats, NsMode, OccurrenceEvent, OverlapMatrix,
    OverlapStats,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("notation: {0}")]
    Notation(#[from] ScoreError),
    #[error("network: {0}")]
    Network(#[from] NetworkError),
    #[error("homology: {0}")]
    Homology(#[from] HomologyError),
    #[error("cycles: {0}")]
    Cycles(#[from] CycleError),
}

/// Output formats the exporter can produce.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash,
)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Json,
    Csv,
    Svg,
    Text,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            "svg" => Ok(ExportFormat::Svg),
            "text" => Ok(ExportFormat::Text),
            other => Err(format!("unknown format '{other}' (json|csv|svg|text)")),
        }
    }
}

/// Every knob of a run. Serializes to/from a single JSON file and is embedded
/// verbatim in the report so results are reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    pub schema_version: u32,
    pub metric_mode: MetricMode,
    pub max_dim: usize,
    pub max_filtration: f64,
    /// s-scale of the overlap matrix.
    pub overlap_scale: usize,
    /// Length of the short note emitted by the ingeojil symbol.
    pub ingeojil_short: Duration,
    pub ns_mode: NsMode,
    /// Also report node-set occurrences that ignore edge order.
    pub loose_matching: bool,
    pub formats: std::collections::BTreeSet<ExportFormat>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            schema_version: SCHEMA_VERSION,
            metric_mode: MetricMode::MinHop,
            max_dim: 3,
            max_filtration: 2.0,
            overlap_scale: 4,
            ingeojil_short: Duration::new(1, 6).unwrap(),
            ns_mode: NsMode::RunPairs,
            loose_matching: false,
            formats: [
                ExportFormat::Json,
                ExportFormat::Csv,
                ExportFormat::Svg,
                ExportFormat::Text,
            ]
            .into_iter()
            .collect(),
        }
    }
}

impl AnalysisConfig {
    /// Dimensions whose intervals are reliable homology under this config
    /// (the top enumerated dimension cannot be killed and is reported only
    /// through the Euler bookkeeping).
    pub fn report_dims(&self) -> std::ops::RangeInclusive<usize> {
        if self.max_dim == 0 {
            0..=0
        } else {
            0..=self.max_dim - 1
        }
    }
}

/// In-memory result of one analysis run.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub piece: String,
    pub config: AnalysisConfig,
    pub score: Option<Score>,
    pub graph: Option<MusicGraph>,
    pub matrix: DissimilarityMatrix,
    pub intervals: Vec<PersistenceInterval>,
    pub cycles: Vec<Cycle>,
    pub occurrences: Vec<OccurrenceEvent>,
    pub overlap: Option<(OverlapMatrix, OverlapStats)>,
    pub frequency: Option<FrequencyTable>,
    pub cycles_per_node: Option<BTreeMap<NodeId, Vec<u32>>>,
}

/// Full pipeline over a parsed score.
pub fn analyze_score(
    piece: &str,
    score: &Score,
    config: &AnalysisConfig,
) -> Result<Analysis, AnalysisError> {
    let graph = build_network(score)?;
    let matrix = distance_matrix(&graph, config.metric_mode)?;
    let filtration = build_filtration(&matrix.to_f64(), config.max_dim, config.max_filtration)?;
    let intervals = compute_persistence(&filtration)?;
    let cycles = extract_cycles(&intervals, &graph, &matrix)?;

    let mut occurrences: Vec<OccurrenceEvent> = cycles
        .iter()
        .flat_map(|c| find_full_occurrences(c, &graph, config.loose_matching))
        .collect();
    occurrences.sort_by_key(|e| (e.start, e.cycle_number, e.len));

    let m = overlap_matrix(&cycles, &graph, config.overlap_scale);
    let stats = overlap_stats(&m);
    let frequency = frequency_table(&graph);
    let membership = cycles_per_node(&graph, &cycles);

    Ok(Analysis {
        piece: piece.to_string(),
        config: config.clone(),
        score: Some(score.clone()),
        graph: Some(graph),
        matrix,
        intervals,
        cycles,
        occurrences,
        overlap: Some((m, stats)),
        frequency: Some(frequency),
        cycles_per_node: Some(membership),
    })
}

/// Homology-only pipeline over a raw dissimilarity matrix. Cycles are
/// extracted (without weights); occurrence and overlap analyses need a note
/// sequence and are skipped.
pub fn analyze_matrix(
    piece: &str,
    rows: &[Vec<f64>],
    config: &AnalysisConfig,
) -> Result<Analysis, AnalysisError> {
    let matrix = DissimilarityMatrix::from_rows(rows)?;
    let filtration = build_filtration(&matrix.to_f64(), config.max_dim, config.max_filtration)?;
    let intervals = compute_persistence(&filtration)?;
    let cycles = extract_cycles_unweighted(&intervals, &matrix)?;
    Ok(Analysis {
        piece: piece.to_string(),
        config: config.clone(),
        score: None,
        graph: None,
        matrix,
        intervals,
        cycles,
        occurrences: Vec::new(),
        overlap: None,
        frequency: None,
        cycles_per_node: None,
    })
}

// ---------------------------------------------------------------------------
// Report structures (the serialized artifact)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMeta {
    pub title: String,
    pub jeonggan_per_column: u8,
    pub jeonggan_count: u64,
    pub event_count: usize,
    pub total_duration: Duration,
}

/// One row of the node catalog: id, note name, pitch, length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeCatalogEntry {
    pub node: NodeId,
    pub name: String,
    pub pitch: String,
    pub length: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarcodeInterval {
    pub dimension: usize,
    pub birth: f64,
    /// `null` marks an essential class (infinite death).
    pub death: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleEdgeReport {
    pub from: NodeId,
    pub to: NodeId,
    /// Adjacency count; `null` when the pair is close only through
    /// intermediate nodes.
    pub weight: Option<u64>,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub number: u32,
    pub birth: f64,
    pub death: Option<f64>,
    pub node_loop: Vec<NodeId>,
    /// Loop nodes joined to the catalog (names and lengths), score runs only.
    pub nodes: Vec<NodeCatalogEntry>,
    pub edges: Vec<CycleEdgeReport>,
    pub average_weight: f64,
    pub node_count: usize,
    pub residual_edge_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeCycles {
    pub node: NodeId,
    pub cycles: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapSection {
    pub s: usize,
    /// Rows of '0'/'1' characters, one per cycle in number order.
    pub matrix: Vec<String>,
    pub stats: OverlapStats,
}

/// The six comparison statistics of a piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub piece: String,
    pub cycle_count: usize,
    pub average_node_count: f64,
    pub average_weight: f64,
    pub occurrences_per_cycle: f64,
    pub denseness: f64,
    pub overlap_percent: f64,
}

/// Column labels of the comparison table, in order.
pub const COMPARISON_COLUMNS: [&str; 6] = [
    "# of cycles",
    "Average node #",
    "Average weight",
    "Occurrence/Cycle",
    "Denseness",
    "Overlap (%)",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub piece: String,
    pub config: AnalysisConfig,
    pub score: Option<ScoreMeta>,
    pub node_catalog: Option<Vec<NodeCatalogEntry>>,
    pub frequency: Option<FrequencyTable>,
    pub barcode: Vec<BarcodeInterval>,
    pub cycles: Vec<CycleReport>,
    pub cycles_per_node: Option<Vec<NodeCycles>>,
    pub occurrences: Option<Vec<OccurrenceEvent>>,
    pub overlap: Option<OverlapSection>,
    pub comparison: ComparisonRow,
}

impl Analysis {
    pub fn node_catalog(&self) -> Option<Vec<NodeCatalogEntry>> {
        let graph = self.graph.as_ref()?;
        Some(
            graph
                .nodes()
                .iter()
                .enumerate()
                .map(|(i, (p, d))| NodeCatalogEntry {
                    node: NodeId(i),
                    name: p.name().to_string(),
                    pitch: p.scientific().to_string(),
                    length: *d,
                })
                .collect(),
        )
    }

    /// Barcode intervals for the reliable dimensions, zero-length pairs
    /// suppressed, sorted by (dimension, birth, death).
    pub fn barcode(&self) -> Vec<BarcodeInterval> {
        let dims = self.config.report_dims();
        self.intervals
            .iter()
            .filter(|iv| dims.contains(&iv.dimension) && !iv.is_zero_length())
            .map(|iv| BarcodeInterval {
                dimension: iv.dimension,
                birth: iv.birth,
                death: (!iv.is_essential()).then_some(iv.death),
            })
            .collect()
    }

    pub fn comparison_row(&self) -> ComparisonRow {
        let cycle_count = self.cycles.len();
        let (avg_nodes, avg_weight) = if cycle_count == 0 {
            (0.0, 0.0)
        } else {
            (
                self.cycles.iter().map(|c| c.node_count as f64).sum::<f64>() / cycle_count as f64,
                self.cycles.iter().map(|c| c.average_weight).sum::<f64>() / cycle_count as f64,
            )
        };
        let occurrences_per_cycle = if cycle_count == 0 {
            0.0
        } else {
            self.occurrences.len() as f64 / cycle_count as f64
        };
        let (denseness, overlap_percent) = match &self.overlap {
            Some((_, stats)) => (stats.denseness, stats.overlap_percent(self.config.ns_mode)),
            None => (0.0, 0.0),
        };
        ComparisonRow {
            piece: self.piece.clone(),
            cycle_count,
            average_node_count: avg_nodes,
            average_weight: avg_weight,
            occurrences_per_cycle,
            denseness,
            overlap_percent,
        }
    }

    pub fn report(&self) -> AnalysisReport {
        let catalog = self.node_catalog();
        let catalog_of = |id: NodeId| -> Option<NodeCatalogEntry> {
            catalog.as_ref().map(|c| c[id.0].clone())
        };
        let cycles = self
            .cycles
            .iter()
            .map(|c| CycleReport {
                number: c.number,
                birth: c.birth,
                death: (!c.death.is_infinite()).then_some(c.death),
                node_loop: c.node_loop.clone(),
                nodes: c.node_loop.iter().filter_map(|&id| catalog_of(id)).collect(),
                edges: c
                    .edges
                    .iter()
                    .map(|e| CycleEdgeReport {
                        from: e.a,
                        to: e.b,
                        weight: e.weight,
                        distance: e.distance,
                    })
                    .collect(),
                average_weight: c.average_weight,
                node_count: c.node_count,
                residual_edge_count: c.residual_edge_count,
            })
            .collect();
        AnalysisReport {
            schema_version: SCHEMA_VERSION,
            piece: self.piece.clone(),
            config: self.config.clone(),
            score: self.score.as_ref().map(|s| ScoreMeta {
                title: s.title.clone(),
                jeonggan_per_column: s.jeonggan_per_column,
                jeonggan_count: s.jeonggan_count,
                event_count: s.events.len(),
                total_duration: Duration::from_beats(s.total_duration())
                    .unwrap_or_else(|_| Duration::new(1, 1).unwrap()),
            }),
            node_catalog: catalog,
            frequency: self.frequency.clone(),
            barcode: self.barcode(),
            cycles,
            cycles_per_node: self.cycles_per_node.as_ref().map(|m| {
                m.iter()
                    .map(|(&node, cycles)| NodeCycles { node, cycles: cycles.clone() })
                    .collect()
            }),
            occurrences: self.score.is_some().then(|| self.occurrences.clone()),
            overlap: self.overlap.as_ref().map(|(m, stats)| OverlapSection {
                s: m.s,
                matrix: m
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
                    .collect(),
                stats: stats.clone(),
            }),
            comparison: self.comparison_row(),
        }
    }
}
