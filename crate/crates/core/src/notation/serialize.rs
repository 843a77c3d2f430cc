//! Canonical JGB-v1 writer.
//!
//! Symbols do not survive parsing, so the canonical form spells every note
//! with a concrete pitch token and `-` continuations. Each Jeonggan gets the
//! coarsest row/slot layout whose slot boundaries contain every onset inside
//! that beat, which makes the output stable under parse/serialize cycles.

use super::{Beats, Score, ScoreError};
use num::Zero;

/// Row layouts whose slots stay on the 1/6 grid, coarsest first.
/// Each entry lists the slot count per row.
const LAYOUTS: &[&[i64]] = &[
    &[1],
    &[2],
    &[1, 1],
    &[3],
    &[1, 1, 1],
    &[3, 1],
    &[1, 3],
    &[2, 1, 1],
    &[1, 2, 1],
    &[1, 1, 2],
    &[2, 2, 1],
    &[2, 1, 2],
    &[1, 2, 2],
    &[3, 3],
    &[2, 2, 2],
];

/// Serialize a score to canonical JGB-v1 text. Fails if the events are not
/// gapless from onset zero or do not fill a whole number of Jeonggans.
pub fn serialize_score(score: &Score) -> Result<String, ScoreError> {
    let mut clock = Beats::zero();
    for e in &score.events {
        if e.start != clock {
            return Err(ScoreError::Invalid(format!(
                "event at onset {} leaves a gap (expected onset {clock})",
                e.start
            )));
        }
        clock += e.duration.beats();
    }
    if *clock.denom() != 1 {
        return Err(ScoreError::Invalid(format!(
            "total duration {clock} is not a whole number of Jeonggans"
        )));
    }
    let total = clock.to_integer() as u64;

    let mut out = String::new();
    if !score.title.is_empty() {
        out.push_str("#title ");
        out.push_str(&score.title);
        out.push('\n');
    }
    out.push_str(&format!("#jeonggan-per-column {}\n", score.jeonggan_per_column));

    let mut next_event = 0usize;
    let mut sounding: Option<usize> = None; // index of event covering the clock
    for jeonggan in 0..total {
        let base = Beats::new(jeonggan as i64, 1);
        // Onsets that fall inside this beat, as fractions of the beat.
        let mut onsets: Vec<Beats> = Vec::new();
        let mut idx = next_event;
        while idx < score.events.len() {
            let off = score.events[idx].start - base;
            if off >= Beats::new(1, 1) {
                break;
            }
            onsets.push(off);
            idx += 1;
        }
        let layout = pick_layout(&onsets).ok_or_else(|| {
            ScoreError::Invalid(format!(
                "onsets in Jeonggan {jeonggan} do not fit any 1/6-grid layout"
            ))
        })?;

        let mut line = String::new();
        let rows = layout.len() as i64;
        let mut row_start = Beats::zero();
        for (r, &slots) in layout.iter().enumerate() {
            if r > 0 {
                line.push_str(" / ");
            }
            let slot_len = Beats::new(1, rows * slots);
            for s in 0..slots {
                if s > 0 {
                    line.push(' ');
                }
                let t = row_start + Beats::new(s, 1) * slot_len;
                if next_event < score.events.len() && score.events[next_event].start - base == t {
                    line.push_str(&score.events[next_event].pitch.token());
                    sounding = Some(next_event);
                    next_event += 1;
                } else {
                    debug_assert!(sounding.is_some(), "slot before the first event");
                    line.push('-');
                }
            }
            row_start += Beats::new(1, rows);
        }
        out.push_str(&line);
        out.push('\n');
        if (jeonggan + 1) % u64::from(score.jeonggan_per_column) == 0 && jeonggan + 1 < total {
            out.push_str("|\n");
        }
    }
    Ok(out)
}

/// Coarsest layout whose slot boundaries cover every onset fraction.
fn pick_layout(onsets: &[Beats]) -> Option<&'static [i64]> {
    'layout: for &layout in LAYOUTS {
        let rows = layout.len() as i64;
        for &t in onsets {
            // t must equal row/rows + s/(rows*slots) for some row, slot index.
            let scaled = t * Beats::new(rows, 1);
            let row = scaled.floor().to_integer().min(rows - 1);
            let within = scaled - Beats::new(row, 1);
            let slots = layout[row as usize];
            let pos = within * Beats::new(slots, 1);
            if *pos.denom() != 1 {
                continue 'layout;
            }
        }
        return Some(layout);
    }
    None
}
