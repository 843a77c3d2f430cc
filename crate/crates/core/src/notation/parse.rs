//! JGB-v1 text parser.
//!
//! Grammar, line by line:
//! - `#title <text>` and `#jeonggan-per-column 6|12` headers, before the body;
//! - `%` starts a comment anywhere;
//! - `|` alone on a line is a column break and must close a group of exactly
//!   `jeonggan-per-column` Jeonggan lines;
//! - every other non-blank line is one Jeonggan: rows separated by `/`,
//!   slots within a row by whitespace, at most three of each. A slot lasts
//!   `1/(rows * slots_in_row)` beats; subdivisions off the 1/6 grid are
//!   rejected.

use super::{Beats, Duration, NoteEvent, Pitch, Score, ScoreError};
use num::Zero;

/// The five context-dependent note symbols. The continuation token `-` is
/// not a symbol: it lengthens the previous note instead of sounding one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    /// `^` one degree above the previous note.
    StepUp,
    /// `^^` two degrees above the previous note.
    StepUpTwo,
    /// `vv` the pair one and two degrees below the previous note, splitting
    /// the slot equally.
    LowerPair,
    /// `=` repeat of the previous note.
    Repeat,
    /// `!` hold the previous note longer, then a short note one degree up.
    Ingeojil,
}

impl Symbol {
    pub fn from_token(tok: &str) -> Option<Symbol> {
        match tok {
            "^" => Some(Symbol::StepUp),
            "^^" => Some(Symbol::StepUpTwo),
            "vv" => Some(Symbol::LowerPair),
            "=" => Some(Symbol::Repeat),
            "!" => Some(Symbol::Ingeojil),
            _ => None,
        }
    }
}

/// What a resolved symbol does to the event stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    /// Extra length merged into the previous note before any new note sounds.
    pub extend_previous: Option<Duration>,
    /// Notes emitted by the symbol, in order.
    pub notes: Vec<(Pitch, Duration)>,
}

/// Resolve one symbol against the previous sounded pitch and the slot length
/// it occupies. `ingeojil_short` is the configured length of the short note
/// emitted by `!`.
pub fn resolve_symbol(
    symbol: Symbol,
    previous: Pitch,
    slot: Duration,
    ingeojil_short: Duration,
) -> Result<Resolution, ScoreError> {
    let up = |n: u8| {
        previous.step_up(n).ok_or_else(|| {
            ScoreError::Invalid(format!(
                "no pitch {n} degree(s) above {} on the eleven-degree scale",
                previous.scientific()
            ))
        })
    };
    let down = |n: u8| {
        previous.step_down(n).ok_or_else(|| {
            ScoreError::Invalid(format!(
                "no pitch {n} degree(s) below {} on the eleven-degree scale",
                previous.scientific()
            ))
        })
    };
    match symbol {
        Symbol::StepUp => Ok(Resolution {
            extend_previous: None,
            notes: vec![(up(1)?, slot)],
        }),
        Symbol::StepUpTwo => Ok(Resolution {
            extend_previous: None,
            notes: vec![(up(2)?, slot)],
        }),
        Symbol::LowerPair => {
            let half = slot.halved().map_err(|_| {
                ScoreError::Invalid(format!(
                    "half of a {slot}-Jeonggan slot is off the 1/6 grid"
                ))
            })?;
            Ok(Resolution {
                extend_previous: None,
                notes: vec![(down(1)?, half), (down(2)?, half)],
            })
        }
        Symbol::Repeat => Ok(Resolution {
            extend_previous: None,
            notes: vec![(previous, slot)],
        }),
        Symbol::Ingeojil => {
            let hold = slot.minus(ingeojil_short).map_err(|_| {
                ScoreError::Invalid(format!(
                    "ingeojil slot ({slot}) not longer than the short note ({ingeojil_short})"
                ))
            })?;
            Ok(Resolution {
                extend_previous: Some(hold),
                notes: vec![(up(1)?, ingeojil_short)],
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Length of the short note produced by `!`; the spec of the notation
    /// gives no ratio, so the smallest grid duration is the default.
    pub ingeojil_short: Duration,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            ingeojil_short: Duration::new(1, 6).expect("1/6 is on the grid"),
        }
    }
}

/// Parse a JGB-v1 source into a [`Score`] with default options.
pub fn parse_score(source: &str) -> Result<Score, ScoreError> {
    parse_score_with(source, &ParseOptions::default())
}

pub fn parse_score_with(source: &str, opts: &ParseOptions) -> Result<Score, ScoreError> {
    Parser::new(opts).run(source)
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ScoreError {
    ScoreError::Syntax { line, col, msg: msg.into() }
}

fn semantic(line: usize, col: usize, msg: impl Into<String>) -> ScoreError {
    ScoreError::Semantic { line, col, msg: msg.into() }
}

struct Parser<'o> {
    opts: &'o ParseOptions,
    title: String,
    jeonggan_per_column: u8,
    events: Vec<NoteEvent>,
    clock: Beats,
    jeonggan_count: u64,
    lines_since_break: u64,
    in_body: bool,
}

impl<'o> Parser<'o> {
    fn new(opts: &'o ParseOptions) -> Self {
        Parser {
            opts,
            title: String::new(),
            jeonggan_per_column: 6,
            events: Vec::new(),
            clock: Beats::zero(),
            jeonggan_count: 0,
            lines_since_break: 0,
            in_body: false,
        }
    }

    fn run(mut self, source: &str) -> Result<Score, ScoreError> {
        for (idx, raw) in source.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.find('%') {
                Some(p) => &raw[..p],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.trim_start().strip_prefix('#') {
                self.header(lineno, rest.trim_end())?;
            } else if line.trim() == "|" {
                self.column_break(lineno)?;
            } else {
                self.jeonggan_line(lineno, line)?;
            }
        }
        Ok(Score {
            title: self.title,
            jeonggan_per_column: self.jeonggan_per_column,
            jeonggan_count: self.jeonggan_count,
            events: self.events,
        })
    }

    fn header(&mut self, lineno: usize, rest: &str) -> Result<(), ScoreError> {
        if self.in_body {
            return Err(syntax(lineno, 1, "header line after the body has started"));
        }
        let (key, value) = match rest.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => (rest, ""),
        };
        match key {
            "title" => {
                self.title = value.to_string();
                Ok(())
            }
            "jeonggan-per-column" => match value {
                "6" => {
                    self.jeonggan_per_column = 6;
                    Ok(())
                }
                "12" => {
                    self.jeonggan_per_column = 12;
                    Ok(())
                }
                other => Err(semantic(
                    lineno,
                    1,
                    format!("jeonggan-per-column must be 6 or 12, got '{other}'"),
                )),
            },
            other => Err(syntax(lineno, 1, format!("unknown header key '#{other}'"))),
        }
    }

    fn column_break(&mut self, lineno: usize) -> Result<(), ScoreError> {
        let expected = u64::from(self.jeonggan_per_column);
        if self.lines_since_break != expected {
            return Err(semantic(
                lineno,
                1,
                format!(
                    "column break after {} Jeonggan(s); expected {expected} per column",
                    self.lines_since_break
                ),
            ));
        }
        self.lines_since_break = 0;
        Ok(())
    }

    fn jeonggan_line(&mut self, lineno: usize, line: &str) -> Result<(), ScoreError> {
        self.in_body = true;
        let rows = tokenize_rows(lineno, line)?;
        if rows.len() > 3 {
            return Err(syntax(lineno, 1, format!("{} rows in one Jeonggan (max 3)", rows.len())));
        }
        let row_count = rows.len() as i64;
        for row in &rows {
            if row.len() > 3 {
                return Err(syntax(
                    lineno,
                    row[0].0,
                    format!("{} slots in one row (max 3)", row.len()),
                ));
            }
            let cells = row_count * row.len() as i64;
            if 6 % cells != 0 {
                return Err(semantic(
                    lineno,
                    row[0].0,
                    format!("slot of 1/{cells} Jeonggan is off the 1/6 grid"),
                ));
            }
            let slot = Duration::new(1, cells).expect("cells divides 6");
            for &(col, tok) in row {
                self.apply_token(lineno, col, tok, slot)?;
            }
        }
        self.jeonggan_count += 1;
        self.lines_since_break += 1;
        Ok(())
    }

    fn apply_token(
        &mut self,
        line: usize,
        col: usize,
        tok: &str,
        slot: Duration,
    ) -> Result<(), ScoreError> {
        if tok == "-" {
            let last = self
                .events
                .last_mut()
                .ok_or_else(|| semantic(line, col, "continuation '-' with no preceding note"))?;
            last.duration = last.duration.plus(slot);
            self.clock += slot.beats();
            return Ok(());
        }
        if let Some(symbol) = Symbol::from_token(tok) {
            let previous = self
                .events
                .last()
                .map(|e| e.pitch)
                .ok_or_else(|| semantic(line, col, format!("symbol '{tok}' with no preceding note")))?;
            let resolved = resolve_symbol(symbol, previous, slot, self.opts.ingeojil_short)
                .map_err(|e| match e {
                    ScoreError::Invalid(msg) => semantic(line, col, msg),
                    other => other,
                })?;
            if let Some(hold) = resolved.extend_previous {
                let last = self.events.last_mut().expect("previous note exists");
                last.duration = last.duration.plus(hold);
                self.clock += hold.beats();
            }
            for (pitch, duration) in resolved.notes {
                self.push_note(pitch, duration);
            }
            return Ok(());
        }
        let pitch = parse_pitch_token(tok)
            .ok_or_else(|| syntax(line, col, format!("unrecognized token '{tok}'")))?
            .map_err(|msg| semantic(line, col, msg))?;
        self.push_note(pitch, slot);
        Ok(())
    }

    fn push_note(&mut self, pitch: Pitch, duration: Duration) {
        self.events.push(NoteEvent { pitch, duration, start: self.clock });
        self.clock += duration.beats();
    }
}

/// Rows of `(column, token)` pairs for one Jeonggan line. Columns are
/// 1-based character positions.
fn tokenize_rows(lineno: usize, line: &str) -> Result<Vec<Vec<(usize, &str)>>, ScoreError> {
    let mut rows: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    let mut start: Option<(usize, usize)> = None; // (char col, byte offset)
    for (chars, (byte, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() || ch == '/' {
            if let Some((col, s)) = start.take() {
                rows.last_mut().unwrap().push((col, &line[s..byte]));
            }
            if ch == '/' {
                rows.push(Vec::new());
            }
        } else if start.is_none() {
            start = Some((chars + 1, byte));
        }
    }
    if let Some((col, s)) = start.take() {
        rows.last_mut().unwrap().push((col, &line[s..]));
    }
    for row in &rows {
        if row.is_empty() {
            return Err(syntax(lineno, 1, "empty row in Jeonggan line"));
        }
    }
    Ok(rows)
}

/// `Some(Ok(pitch))` for a valid pitch token, `Some(Err(msg))` for a pitch
/// token naming a degree off the scale, `None` if not a pitch token at all.
fn parse_pitch_token(tok: &str) -> Option<Result<Pitch, String>> {
    let marks = tok.chars().rev().take_while(|&c| c == '\'').count();
    if marks > 2 {
        return Some(Err(format!("at most two octave marks allowed, got '{tok}'")));
    }
    let base = &tok[..tok.len() - marks];
    let degree = match base {
        "jung" => 0u8,
        "im" => 1,
        "nam" => 2,
        "hwang" => 3,
        "tae" => 4,
        _ => return None,
    };
    let index = degree + 5 * marks as u8;
    match Pitch::from_index(index) {
        Some(p) => Some(Ok(p)),
        None => Some(Err(format!(
            "'{tok}' is beyond the top of the eleven-degree scale"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dur(n: i64, d: i64) -> Duration {
        Duration::new(n, d).unwrap()
    }

    fn pitch(i: u8) -> Pitch {
        Pitch::from_index(i).unwrap()
    }

    fn evs(score: &Score) -> Vec<(u8, Beats)> {
        score.events.iter().map(|e| (e.pitch.index(), e.duration.beats())).collect()
    }

    #[test]
    fn one_note_one_jeonggan() {
        let s = parse_score("hwang\n").unwrap();
        assert_eq!(evs(&s), vec![(3, Beats::new(1, 1))]);
        assert_eq!(s.jeonggan_count, 1);
    }

    #[test]
    fn two_slots_split_the_beat() {
        let s = parse_score("hwang tae\n").unwrap();
        assert_eq!(evs(&s), vec![(3, Beats::new(1, 2)), (4, Beats::new(1, 2))]);
    }

    #[test]
    fn continuation_sums_durations() {
        let s = parse_score("hwang\n-\n").unwrap();
        assert_eq!(evs(&s), vec![(3, Beats::new(2, 1))]);
        assert_eq!(s.jeonggan_count, 2);
    }

    #[test]
    fn step_up_after_hwang_is_tae() {
        let s = parse_score("hwang\n^\n").unwrap();
        assert_eq!(evs(&s), vec![(3, Beats::new(1, 1)), (4, Beats::new(1, 1))]);
    }

    #[test]
    fn rows_and_slots_durations() {
        // 3 rows; middle row has 2 slots of 1/6 each.
        let s = parse_score("jung / im nam / hwang\n").unwrap();
        assert_eq!(
            evs(&s),
            vec![
                (0, Beats::new(1, 3)),
                (1, Beats::new(1, 6)),
                (2, Beats::new(1, 6)),
                (3, Beats::new(1, 3)),
            ]
        );
    }

    #[test]
    fn lower_pair_splits_slot() {
        // previous note Jung (G#4, index 5): vv -> Tae (4), Hwang (3).
        let s = parse_score("jung'\nvv\n").unwrap();
        assert_eq!(
            evs(&s)[1..],
            [(4, Beats::new(1, 2)), (3, Beats::new(1, 2))]
        );
    }

    #[test]
    fn step_up_two_from_jung_octave() {
        let r = resolve_symbol(Symbol::StepUpTwo, pitch(5), dur(1, 1), dur(1, 6)).unwrap();
        assert_eq!(r.notes, vec![(pitch(7), dur(1, 1))]); // C5
    }

    #[test]
    fn repeat_keeps_pitch() {
        let r = resolve_symbol(Symbol::Repeat, pitch(4), dur(1, 2), dur(1, 6)).unwrap();
        assert_eq!(r.extend_previous, None);
        assert_eq!(r.notes, vec![(pitch(4), dur(1, 2))]);
    }

    #[test]
    fn ingeojil_holds_then_short_note() {
        let s = parse_score("im\n!\n").unwrap();
        // im held 1 + 5/6, then nam for 1/6.
        assert_eq!(
            evs(&s),
            vec![(1, Beats::new(11, 6)), (2, Beats::new(1, 6))]
        );
    }

    #[test]
    fn ingeojil_slot_too_short() {
        // `!` in a 1/6 slot leaves nothing to hold.
        let err = parse_score("im\ntae ! / hwang / tae\n");
        assert!(err.is_err());
        match err.unwrap_err() {
            ScoreError::Semantic { line, .. } => assert_eq!(line, 2),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn symbol_without_previous_note_fails() {
        match parse_score("^\n").unwrap_err() {
            ScoreError::Semantic { msg, .. } => assert!(msg.contains("no preceding note")),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn step_up_over_the_top_fails() {
        assert!(parse_score("jung''\n^\n").is_err());
    }

    #[test]
    fn lower_pair_needs_two_degrees() {
        assert!(parse_score("im\nvv\n").is_err()); // im has only one lower degree
        assert!(parse_score("nam\nvv\n").is_ok());
    }

    #[test]
    fn off_grid_subdivision_rejected() {
        // 2 rows x 2 slots = quarter-beat slots.
        match parse_score("hwang tae / im nam\n").unwrap_err() {
            ScoreError::Semantic { msg, .. } => assert!(msg.contains("1/4")),
            other => panic!("expected semantic error, got {other:?}"),
        }
        // 3 rows x 3 slots = ninth-beat slots.
        assert!(parse_score("jung im nam / jung im nam / jung im nam\n").is_err());
    }

    #[test]
    fn too_many_rows_or_slots() {
        assert!(matches!(
            parse_score("a / b / c / d\n").unwrap_err(),
            ScoreError::Syntax { .. }
        ));
        assert!(matches!(
            parse_score("jung im nam hwang\n").unwrap_err(),
            ScoreError::Syntax { .. }
        ));
    }

    #[test]
    fn column_break_validation() {
        let ok = "#jeonggan-per-column 6\nhwang\nhwang\nhwang\nhwang\nhwang\nhwang\n|\nhwang\n";
        assert!(parse_score(ok).is_ok());
        let bad = "#jeonggan-per-column 6\nhwang\nhwang\n|\n";
        match parse_score(bad).unwrap_err() {
            ScoreError::Semantic { line, .. } => assert_eq!(line, 4),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn headers_and_comments() {
        let src = "#title Test Piece % trailing comment\n#jeonggan-per-column 12\n% full comment line\nhwang % another\n";
        let s = parse_score(src).unwrap();
        assert_eq!(s.title, "Test Piece");
        assert_eq!(s.jeonggan_per_column, 12);
        assert_eq!(s.jeonggan_count, 1);
    }

    #[test]
    fn header_after_body_fails() {
        assert!(matches!(
            parse_score("hwang\n#title Late\n").unwrap_err(),
            ScoreError::Syntax { line: 2, .. }
        ));
    }

    #[test]
    fn unknown_token_reports_position() {
        match parse_score("hwang\njung xyz\n").unwrap_err() {
            ScoreError::Syntax { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 6);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn onsets_are_gapless() {
        let s = parse_score("hwang tae\nim\n- nam nam\n").unwrap();
        let mut clock = Beats::zero();
        for e in &s.events {
            assert_eq!(e.start, clock);
            clock += e.duration.beats();
        }
        assert_eq!(clock, Beats::new(3, 1));
    }

    #[test]
    fn symbol_context_crosses_jeonggan_boundary() {
        // previous sounded note is the short ingeojil note, one degree up.
        let s = parse_score("im\n!\n=\n").unwrap();
        let last = s.events.last().unwrap();
        assert_eq!(last.pitch.index(), 2); // nam repeated
    }
}
