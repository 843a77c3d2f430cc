//! Random instance generators for the property and acceptance suites.
//! Everything is seeded, so failures replay deterministically.

use rand::rngs::StdRng;
use rand::Rng;

/// A randomly generated grammatical JGB-v1 source plus the ground truth the
/// generator knows about it.
pub struct GeneratedScore {
    pub source: String,
    pub jeonggan_lines: u64,
}

const PITCH_TOKENS: [&str; 11] = [
    "jung", "im", "nam", "hwang", "tae", "jung'", "im'", "nam'", "hwang'", "tae'", "jung''",
];

/// Slot layouts on the 1/6 grid, as slot counts per row.
const LAYOUTS: [&[usize]; 9] = [
    &[1],
    &[2],
    &[3],
    &[1, 1],
    &[3, 1],
    &[1, 3],
    &[1, 1, 1],
    &[2, 1, 1],
    &[1, 2, 2],
];

/// Generate a random grammatical score. Symbols are only emitted where the
/// notation rules allow them, tracked against the previous sounded pitch.
pub fn random_score(rng: &mut StdRng) -> GeneratedScore {
    let jpc: u64 = if rng.gen_bool(0.5) { 6 } else { 12 };
    let lines: u64 = rng.gen_range(1..=26);
    let mut src = String::new();
    if rng.gen_bool(0.7) {
        src.push_str(&format!("#title Generated {}\n", rng.gen_range(0..1000)));
    }
    src.push_str(&format!("#jeonggan-per-column {jpc}\n"));

    let mut prev: Option<u8> = None;
    let mut since_break = 0u64;
    let use_breaks = rng.gen_bool(0.6);
    for _line_no in 0..lines {
        if rng.gen_bool(0.05) {
            src.push_str("% interlude comment\n");
        }
        if rng.gen_bool(0.04) {
            src.push('\n');
        }
        let layout = LAYOUTS[rng.gen_range(0..LAYOUTS.len())];
        let rows = layout.len();
        let mut line = String::new();
        for (r, &slots) in layout.iter().enumerate() {
            if r > 0 {
                line.push_str(" / ");
            }
            // slot length = 1/(rows*slots); in sixths of a beat:
            let slot_sixths = 6 / (rows * slots);
            for s in 0..slots {
                if s > 0 {
                    line.push(' ');
                }
                line.push_str(&random_token(rng, &mut prev, slot_sixths));
            }
        }
        if rng.gen_bool(0.08) {
            line.push_str(" % note");
        }
        src.push_str(&line);
        src.push('\n');
        since_break += 1;
        if since_break == jpc {
            if use_breaks {
                src.push_str("|\n");
            }
            since_break = 0;
        }
    }
    GeneratedScore { source: src, jeonggan_lines: lines }
}

/// One slot token, respecting symbol preconditions. `slot_sixths` is the
/// slot duration in sixths of a Jeonggan.
fn random_token(rng: &mut StdRng, prev: &mut Option<u8>, slot_sixths: usize) -> String {
    let Some(p) = *prev else {
        let idx = rng.gen_range(0..11u8);
        *prev = Some(idx);
        return PITCH_TOKENS[idx as usize].to_string();
    };
    // candidate symbols that are legal in this state
    let mut options: Vec<&str> = vec!["pitch", "pitch", "pitch", "pitch", "-", "-", "="];
    if p + 1 < 11 {
        options.push("^");
    }
    if p + 2 < 11 {
        options.push("^^");
    }
    // vv needs two lower degrees and an even split on the grid
    if p >= 2 && slot_sixths % 2 == 0 {
        options.push("vv");
    }
    // ingeojil needs spare length beyond the 1/6 short note and a higher note
    if slot_sixths > 1 && p + 1 < 11 {
        options.push("!");
    }
    match options[rng.gen_range(0..options.len())] {
        "pitch" => {
            let idx = rng.gen_range(0..11u8);
            *prev = Some(idx);
            PITCH_TOKENS[idx as usize].to_string()
        }
        "-" => "-".to_string(),
        "=" => "=".to_string(),
        "^" => {
            *prev = Some(p + 1);
            "^".to_string()
        }
        "^^" => {
            *prev = Some(p + 2);
            "^^".to_string()
        }
        "vv" => {
            *prev = Some(p - 2);
            "vv".to_string()
        }
        "!" => {
            *prev = Some(p + 1);
            "!".to_string()
        }
        _ => unreachable!(),
    }
}

/// Random connected undirected weighted graph: spanning tree plus extras.
pub fn random_connected_graph(rng: &mut StdRng, max_nodes: usize) -> (usize, Vec<(usize, usize, u64)>) {
    let n = rng.gen_range(2..=max_nodes);
    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, rng.gen_range(1..=9)));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if edges.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
                continue;
            }
            if rng.gen_bool(0.25) {
                edges.push((i, j, rng.gen_range(1..=9)));
            }
        }
    }
    (n, edges)
}

/// Random symmetric zero-diagonal dissimilarity matrix. Half the time the
/// values snap to a coarse grid so equal thresholds (filtration ties) get
/// exercised.
pub fn random_dissimilarity(rng: &mut StdRng, min_n: usize, max_n: usize) -> Vec<Vec<f64>> {
    let n = rng.gen_range(min_n..=max_n);
    let snap = rng.gen_bool(0.5);
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = if snap {
                0.25 * rng.gen_range(1..=8) as f64
            } else {
                rng.gen_range(0.05..2.0)
            };
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Random 0/1 membership sequence with geometric-ish runs.
pub fn random_membership(rng: &mut StdRng, len: usize) -> Vec<bool> {
    let p = rng.gen_range(0.3..0.85);
    (0..len).map(|_| rng.gen_bool(p)).collect()
}
