//! dodeuri-core: cyclic-structure analysis of Jeongganbo-notated music.
//!
//! The pipeline: parse a JGB-v1 score into note events, build the weighted
//! (pitch, length) adjacency network, derive the inverse-weight dissimilarity
//! matrix, run Vietoris-Rips persistent homology over it, number the
//! resulting 1-cycles by death order, and match those cycles back against the
//! music's note sequence (full-form occurrences, the binary overlap matrix on
//! s-scale, denseness and overlap statistics).
//!
//! Entry points: [`notation::parse_score`], [`network::build_network`],
//! [`analysis::analyze_score`].

pub mod analysis;
pub mod cycles;
pub mod export;
pub mod homology;
pub mod network;
pub mod notation;
pub mod overlap;

pub use analysis::{analyze_matrix, analyze_score, AnalysisConfig, AnalysisReport};
pub use cycles::{extract_cycles, summarize_cycles, Cycle, CycleSetSummary};
pub use homology::{
    betti_at, betti_curve, build_filtration, compute_persistence, euler_characteristic_check,
    BettiCurve, Filtration, PersistenceInterval, Simplex,
};
pub use network::{
    build_network, distance_matrix, frequency_table, DissimilarityMatrix, FrequencyTable,
    MetricMode, MusicGraph, NodeId,
};
pub use notation::{parse_score, serialize_score, total_duration, Duration, Pitch, Score};
pub use overlap::{
    find_full_occurrences, overlap_matrix, overlap_stats, NsMode, OccurrenceEvent, OccurrenceKind,
    OverlapMatrix, OverlapStats,
};
