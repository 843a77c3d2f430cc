//! Jeongganbo score model: the eleven-pitch scale, exact beat-fraction
//! durations, and the ordered note events of a parsed score.
//!
//! Scores are written in the JGB-v1 text format. One line of the body is one
//! Jeonggan (one beat). Within a line, `/` separates the vertical rows of the
//! Jeonggan and whitespace separates the slots of a row, so a slot lasts
//! `1 / (rows * slots_in_row)` beats. Pitch tokens are the five note names
//! `jung im nam hwang tae` with 0-2 trailing `'` octave marks; the special
//! tokens `-`, `^`, `^^`, `vv`, `=`, `!` are resolved against the previous
//! sounded note during parsing.

mod parse;
mod serialize;

pub use parse::{parse_score, parse_score_with, resolve_symbol, ParseOptions, Resolution, Symbol};
pub use serialize::serialize_score;

use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational position/length arithmetic used throughout the notation
/// layer. Denominators stay within the 1/6-beat grid.
pub type Beats = Ratio<i64>;

/// Names of the five notes used by the Haegeum pieces, in scale order.
pub const NOTE_NAMES: [&str; 5] = ["Jung", "Im", "Nam", "Hwang", "Tae"];

/// Scientific pitch names for the full eleven-degree scale.
pub const SCALE: [&str; 11] = [
    "G#3", "A#3", "C4", "D#4", "F4", "G#4", "A#4", "C5", "D#5", "F5", "G#5",
];

/// Error raised while reading or building a score. Syntax errors are
/// malformed input; semantic errors are well-formed input that breaks a
/// notation rule. Both carry the 1-based line and column of the offence.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("semantic error at line {line}, column {col}: {msg}")]
    Semantic { line: usize, col: usize, msg: String },
    #[error("invalid score: {0}")]
    Invalid(String),
}

impl ScoreError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ScoreError::Syntax { line, .. } | ScoreError::Semantic { line, .. } => Some(*line),
            ScoreError::Invalid(_) => None,
        }
    }
}

/// One of the eleven playable pitches, indexed 0 (G#3) through 10 (G#5).
///
/// The scale cycles through the five note names once per octave: index 3 is
/// Hwang (D#4), index 8 is Hwang one octave up (D#5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pitch(u8);

impl Pitch {
    pub const COUNT: u8 = 11;
    pub const TOP: Pitch = Pitch(10);

    pub fn from_index(index: u8) -> Option<Pitch> {
        (index < Self::COUNT).then_some(Pitch(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Note name without octave, e.g. "Hwang".
    pub fn name(self) -> &'static str {
        NOTE_NAMES[(self.0 % 5) as usize]
    }

    /// Octave offset above the base register: 0, 1, or 2.
    pub fn octave_marks(self) -> u8 {
        self.0 / 5
    }

    /// Scientific pitch name, e.g. "D#4".
    pub fn scientific(self) -> &'static str {
        SCALE[self.0 as usize]
    }

    /// JGB-v1 token: lowercase name plus octave apostrophes, e.g. `hwang'`.
    pub fn token(self) -> String {
        let mut t = self.name().to_lowercase();
        for _ in 0..self.octave_marks() {
            t.push('\'');
        }
        t
    }

    pub fn step_up(self, degrees: u8) -> Option<Pitch> {
        Pitch::from_index(self.0.checked_add(degrees)?)
    }

    pub fn step_down(self, degrees: u8) -> Option<Pitch> {
        self.0.checked_sub(degrees).map(Pitch)
    }
}

impl fmt::Display for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name(), self.scientific())
    }
}

/// A note length in Jeonggan units, kept exact. After reduction the
/// denominator always divides 6; anything finer than the 1/6-beat grid is
/// rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Duration(Beats);

impl Duration {
    pub fn new(numer: i64, denom: i64) -> Result<Duration, ScoreError> {
        if denom == 0 {
            return Err(ScoreError::Invalid("zero denominator".into()));
        }
        Duration::from_beats(Ratio::new(numer, denom))
    }

    pub fn from_beats(value: Beats) -> Result<Duration, ScoreError> {
        if value <= Beats::zero() {
            return Err(ScoreError::Invalid(format!(
                "duration must be positive, got {value}"
            )));
        }
        if 6 % value.denom() != 0 {
            return Err(ScoreError::Invalid(format!(
                "duration {value} is off the 1/6-Jeonggan grid"
            )));
        }
        Ok(Duration(value))
    }

    pub fn beats(self) -> Beats {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    /// Sum of two grid durations; stays on the grid.
    pub fn plus(self, other: Duration) -> Duration {
        Duration(self.0 + other.0)
    }

    pub fn halved(self) -> Result<Duration, ScoreError> {
        Duration::from_beats(self.0 / 2)
    }

    pub fn minus(self, other: Duration) -> Result<Duration, ScoreError> {
        Duration::from_beats(self.0 - other.0)
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Duration {
    type Err = ScoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<i64>().map_err(|e| ScoreError::Invalid(e.to_string()))?,
                d.trim().parse::<i64>().map_err(|e| ScoreError::Invalid(e.to_string()))?,
            ),
            None => (
                s.trim().parse::<i64>().map_err(|e| ScoreError::Invalid(e.to_string()))?,
                1,
            ),
        };
        Duration::new(n, d)
    }
}

impl Serialize for Duration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Duration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A sounded pitch with its exact length and onset, both in Jeonggan units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NoteEvent {
    pub pitch: Pitch,
    pub duration: Duration,
    /// Onset measured from the start of the piece.
    #[serde(serialize_with = "ser_beats")]
    pub start: Beats,
}

fn ser_beats<S: serde::Serializer>(b: &Beats, s: S) -> Result<S::Ok, S::Error> {
    if b.denom().is_one() {
        s.collect_str(b.numer())
    } else {
        s.collect_str(&format_args!("{}/{}", b.numer(), b.denom()))
    }
}

/// A parsed piece: gapless, onset-ordered note events covering
/// `jeonggan_count` beats arranged in columns of 6 or 12 Jeonggans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Score {
    pub title: String,
    pub jeonggan_per_column: u8,
    pub jeonggan_count: u64,
    pub events: Vec<NoteEvent>,
}

impl Score {
    /// Exact sum of event durations; equals `jeonggan_count` for any score
    /// produced by the parser.
    pub fn total_duration(&self) -> Beats {
        self.events.iter().map(|e| e.duration.beats()).sum()
    }
}

/// Total playing time of a score in Jeonggan units.
pub fn total_duration(score: &Score) -> Beats {
    score.total_duration()
}
