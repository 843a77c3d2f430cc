//! Deterministic renderings of an analysis: CSV tables, plain-text barcode,
//! SVG figures, and the JSON report. Identical analyses produce identical
//! bytes; all geometry constants are fixed here.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::analysis::{
    Analysis, AnalysisReport, ComparisonRow, ExportFormat, COMPARISON_COLUMNS,
};
use crate::homology::PersistenceInterval;
use crate::overlap::OccurrenceEvent;

/// Shortest-roundtrip float with a decimal point (1 -> "1.0"), "inf" for
/// infinity. Used by all text and CSV output.
fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `dim birth death` lines, one interval per line, `inf` for essential
/// classes. Zero-length pairs are already excluded by the report.
pub fn barcode_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    for iv in &report.barcode {
        let death = iv.death.map_or("inf".to_string(), fmt_f64);
        writeln!(out, "{} {} {}", iv.dimension, fmt_f64(iv.birth), death).unwrap();
    }
    out
}

/// Persistence diagram as CSV: dim, birth, death.
pub fn persistence_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("dim,birth,death\n");
    for iv in &report.barcode {
        let death = iv.death.map_or("inf".to_string(), fmt_f64);
        writeln!(out, "{},{},{}", iv.dimension, fmt_f64(iv.birth), death).unwrap();
    }
    out
}

/// Node catalog CSV: node, name, pitch, length.
pub fn node_catalog_csv(report: &AnalysisReport) -> Option<String> {
    let catalog = report.node_catalog.as_ref()?;
    let mut out = String::from("node,name,pitch,length\n");
    for e in catalog {
        writeln!(out, "{},{},{},{}", e.node, e.name, e.pitch, e.length).unwrap();
    }
    Some(out)
}

/// Pairwise dissimilarities with node-id headers.
pub fn distance_matrix_csv(analysis: &Analysis) -> String {
    let rows = analysis.matrix.to_f64();
    let n = rows.len();
    let mut out = String::from("node");
    for j in 0..n {
        write!(out, ",n{j}").unwrap();
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        write!(out, "n{i}").unwrap();
        for v in row {
            write!(out, ",{}", fmt_f64(*v)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Frequency table CSV: rank, node, count.
pub fn frequency_csv(report: &AnalysisReport) -> Option<String> {
    let freq = report.frequency.as_ref()?;
    let mut out = String::from("rank,node,count\n");
    for row in &freq.rows {
        writeln!(out, "{},{},{}", row.rank, row.node, row.count).unwrap();
    }
    Some(out)
}

/// Occurrence timeline CSV: cycle, start, length, kind.
pub fn occurrences_csv(events: &[OccurrenceEvent]) -> String {
    let mut out = String::from("cycle,start,length,kind\n");
    for e in events {
        let kind = match e.kind {
            crate::overlap::OccurrenceKind::Closed => "closed",
            crate::overlap::OccurrenceKind::OpenChain => "open-chain",
            crate::overlap::OccurrenceKind::SetRun => "set-run",
        };
        writeln!(out, "{},{},{},{}", e.cycle_number, e.start, e.len, kind).unwrap();
    }
    out
}

/// Overlap matrix as rows of 0/1 entries, first column the cycle number.
pub fn overlap_matrix_csv(report: &AnalysisReport) -> Option<String> {
    let section = report.overlap.as_ref()?;
    let mut out = String::from("cycle");
    let d = section.matrix.first().map_or(0, |r| r.len());
    for j in 0..d {
        write!(out, ",t{j}").unwrap();
    }
    out.push('\n');
    for (i, row) in section.matrix.iter().enumerate() {
        write!(out, "{}", i + 1).unwrap();
        for ch in row.chars() {
            write!(out, ",{ch}").unwrap();
        }
        out.push('\n');
    }
    Some(out)
}

/// Comparison table CSV, one row per piece, columns in the canonical order.
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("piece");
    for c in COMPARISON_COLUMNS {
        write!(out, ",{}", csv_field(c)).unwrap();
    }
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(&r.piece),
            r.cycle_count,
            fmt_f64(r.average_node_count),
            fmt_f64(r.average_weight),
            fmt_f64(r.occurrences_per_cycle),
            fmt_f64(r.denseness),
            fmt_f64(r.overlap_percent),
        )
        .unwrap();
    }
    out
}

/// Aligned text rendering of the comparison table.
pub fn comparison_text(rows: &[ComparisonRow]) -> String {
    let mut cells: Vec<Vec<String>> = vec![std::iter::once("piece".to_string())
        .chain(COMPARISON_COLUMNS.iter().map(|s| s.to_string()))
        .collect()];
    for r in rows {
        cells.push(vec![
            r.piece.clone(),
            r.cycle_count.to_string(),
            fmt_f64(r.average_node_count),
            fmt_f64(r.average_weight),
            fmt_f64(r.occurrences_per_cycle),
            fmt_f64(r.denseness),
            fmt_f64(r.overlap_percent),
        ]);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap())
        .collect();
    let mut out = String::new();
    for (i, row) in cells.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}", w = w))
            .collect();
        writeln!(out, "{}", line.join("  ")).unwrap();
        if i == 0 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            writeln!(out, "{}", "-".repeat(total)).unwrap();
        }
    }
    out
}

/// Human-oriented run summary.
pub fn report_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    writeln!(out, "piece: {}", report.piece).unwrap();
    if let Some(score) = &report.score {
        writeln!(
            out,
            "score: {} Jeonggan(s), {} events, {} per column",
            score.jeonggan_count, score.event_count, score.jeonggan_per_column
        )
        .unwrap();
    }
    if let Some(catalog) = &report.node_catalog {
        writeln!(out, "nodes: {}", catalog.len()).unwrap();
    }
    writeln!(out, "barcode intervals: {}", report.barcode.len()).unwrap();
    writeln!(out, "cycles: {}", report.cycles.len()).unwrap();
    for c in &report.cycles {
        let death = c.death.map_or("inf".into(), fmt_f64);
        let loop_str: Vec<String> = c.node_loop.iter().map(|n| n.to_string()).collect();
        writeln!(
            out,
            "  cycle {}: [{}, {}) loop {} avg weight {}",
            c.number,
            fmt_f64(c.birth),
            death,
            loop_str.join("-"),
            fmt_f64(c.average_weight)
        )
        .unwrap();
    }
    if let Some(o) = &report.overlap {
        writeln!(out, "overlap (s = {}):", o.s).unwrap();
        writeln!(
            out,
            "  denseness {} ({} of {})",
            fmt_f64(o.stats.denseness),
            o.stats.a_c,
            o.stats.a_f
        )
        .unwrap();
        writeln!(
            out,
            "  overlap% run-pairs {} | column-intervals {} (N_c = {})",
            fmt_f64(o.stats.overlap_percent_run_pairs),
            fmt_f64(o.stats.overlap_percent_column_intervals),
            o.stats.n_c
        )
        .unwrap();
    }
    let c = &report.comparison;
    writeln!(
        out,
        "comparison: cycles {} | avg nodes {} | avg weight {} | occ/cycle {} | denseness {} | overlap% {}",
        c.cycle_count,
        fmt_f64(c.average_node_count),
        fmt_f64(c.average_weight),
        fmt_f64(c.occurrences_per_cycle),
        fmt_f64(c.denseness),
        fmt_f64(c.overlap_percent)
    )
    .unwrap();
    out
}

// ---------------------------------------------------------------------------
// SVG rendering. Fixed geometry keeps output byte-stable.
// ---------------------------------------------------------------------------

const SVG_WIDTH: f64 = 800.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const BAND_HEIGHT: f64 = 8.0;
const BAND_GAP: f64 = 4.0;
const DIM_GAP: f64 = 28.0;
const DIM_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn xml_open(out: &mut String, width: f64, height: f64) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
}

/// Barcode figure: one band per interval, grouped by dimension, threshold on
/// the horizontal axis. Essential classes run to the right edge with an open
/// end marker.
pub fn barcode_svg(intervals: &[PersistenceInterval], report_dims: &[usize], axis_max: f64) -> String {
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let x_of = |tau: f64| MARGIN_LEFT + (tau / axis_max).min(1.0) * plot_w;

    let mut groups: Vec<(usize, Vec<&PersistenceInterval>)> = Vec::new();
    for &dim in report_dims {
        let mut ivs: Vec<&PersistenceInterval> = intervals
            .iter()
            .filter(|iv| iv.dimension == dim && !iv.is_zero_length())
            .collect();
        ivs.sort_by(|a, b| {
            a.birth
                .partial_cmp(&b.birth)
                .unwrap()
                .then(a.death.partial_cmp(&b.death).unwrap())
        });
        groups.push((dim, ivs));
    }
    let total_bands: usize = groups.iter().map(|(_, g)| g.len().max(1)).sum();
    let height = MARGIN_TOP
        + groups.len() as f64 * DIM_GAP
        + total_bands as f64 * (BAND_HEIGHT + BAND_GAP)
        + 40.0;

    let mut out = String::new();
    xml_open(&mut out, SVG_WIDTH, height);
    let mut y = MARGIN_TOP;
    for (dim, ivs) in &groups {
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="13">H{} ({} interval{})</text>"#,
            MARGIN_LEFT,
            y,
            dim,
            ivs.len(),
            if ivs.len() == 1 { "" } else { "s" }
        )
        .unwrap();
        y += 10.0;
        if ivs.is_empty() {
            y += BAND_HEIGHT + BAND_GAP;
        }
        for iv in ivs {
            let x0 = x_of(iv.birth);
            let x1 = if iv.is_essential() { MARGIN_LEFT + plot_w } else { x_of(iv.death) };
            let color = DIM_COLORS[iv.dimension % DIM_COLORS.len()];
            writeln!(
                out,
                r#"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{BAND_HEIGHT:.2}" fill="{color}"/>"#,
                (x1 - x0).max(0.75),
            )
            .unwrap();
            if iv.is_essential() {
                writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="10" fill="{color}">&#8734;</text>"#,
                    x1 + 2.0,
                    y + BAND_HEIGHT
                )
                .unwrap();
            }
            y += BAND_HEIGHT + BAND_GAP;
        }
        y += DIM_GAP - 10.0;
    }
    // axis
    let axis_y = y + 6.0;
    writeln!(
        out,
        r#"<line x1="{MARGIN_LEFT:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black"/>"#,
        MARGIN_LEFT + plot_w
    )
    .unwrap();
    for k in 0..=4 {
        let tau = axis_max * k as f64 / 4.0;
        let x = x_of(tau);
        writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{axis_y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            axis_y + 4.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" font-family="monospace" font-size="11" text-anchor="middle">{}</text>"#,
            axis_y + 16.0,
            fmt_f64((tau * 1000.0).round() / 1000.0)
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

/// Occurrence strip chart: time on the horizontal axis, one lane per cycle,
/// a box per occurrence.
pub fn occurrences_svg(events: &[OccurrenceEvent], cycle_count: usize, seq_len: usize) -> String {
    let lanes = cycle_count.max(1);
    let lane_h = 22.0;
    let height = MARGIN_TOP + lanes as f64 * lane_h + 30.0;
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let x_of = |pos: usize| MARGIN_LEFT + pos as f64 / seq_len.max(1) as f64 * plot_w;

    let mut out = String::new();
    xml_open(&mut out, SVG_WIDTH, height);
    for lane in 0..lanes {
        let y = MARGIN_TOP + lane as f64 * lane_h;
        writeln!(
            out,
            r#"<text x="8" y="{:.2}" font-family="monospace" font-size="12">cycle {}</text>"#,
            y + lane_h * 0.7,
            lane + 1
        )
        .unwrap();
        writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            y + lane_h - 2.0,
            MARGIN_LEFT + plot_w,
            y + lane_h - 2.0
        )
        .unwrap();
    }
    for e in events {
        let lane = (e.cycle_number as usize).saturating_sub(1);
        let y = MARGIN_TOP + lane as f64 * lane_h + 3.0;
        let x0 = x_of(e.start);
        let x1 = x_of(e.start + e.len);
        let color = match e.kind {
            crate::overlap::OccurrenceKind::Closed => "#1f77b4",
            crate::overlap::OccurrenceKind::OpenChain => "#2ca02c",
            crate::overlap::OccurrenceKind::SetRun => "#ff7f0e",
        };
        writeln!(
            out,
            r#"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.85"/>"#,
            (x1 - x0).max(1.0),
            lane_h - 8.0
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

// ---------------------------------------------------------------------------
// File emission
// ---------------------------------------------------------------------------

/// Write every export of an analysis into `out_dir`, honoring the configured
/// format set. Returns the paths written.
pub fn write_analysis(analysis: &Analysis, out_dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let report = analysis.report();
    let formats = &analysis.config.formats;
    let mut written = Vec::new();
    let emit = |name: &str, content: String, written: &mut Vec<PathBuf>| -> io::Result<()> {
        let path = out_dir.join(name);
        fs::write(&path, content)?;
        written.push(path);
        Ok(())
    };

    if formats.contains(&ExportFormat::Json) {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        emit("report.json", json + "\n", &mut written)?;
        if let Some(catalog) = &report.node_catalog {
            let json = serde_json::to_string_pretty(catalog).expect("catalog serializes");
            emit("nodes.json", json + "\n", &mut written)?;
        }
        let matrix_json = serde_json::to_string_pretty(&analysis.matrix.to_f64())
            .expect("matrix serializes");
        emit("distance_matrix.json", matrix_json + "\n", &mut written)?;
        if let Some(o) = &report.overlap {
            let json = serde_json::to_string_pretty(&o.stats).expect("stats serialize");
            emit("overlap_stats.json", json + "\n", &mut written)?;
        }
    }
    if formats.contains(&ExportFormat::Csv) {
        emit("persistence.csv", persistence_csv(&report), &mut written)?;
        emit("distance_matrix.csv", distance_matrix_csv(analysis), &mut written)?;
        if let Some(csv) = node_catalog_csv(&report) {
            emit("nodes.csv", csv, &mut written)?;
        }
        if let Some(csv) = frequency_csv(&report) {
            emit("frequency.csv", csv, &mut written)?;
        }
        if report.occurrences.is_some() {
            emit("occurrences.csv", occurrences_csv(&analysis.occurrences), &mut written)?;
        }
        if let Some(csv) = overlap_matrix_csv(&report) {
            emit("overlap_matrix.csv", csv, &mut written)?;
        }
        emit(
            "comparison.csv",
            comparison_csv(std::slice::from_ref(&report.comparison)),
            &mut written,
        )?;
    }
    if formats.contains(&ExportFormat::Text) {
        emit("barcode.txt", barcode_text(&report), &mut written)?;
        emit("report.txt", report_text(&report), &mut written)?;
    }
    if formats.contains(&ExportFormat::Svg) {
        let dims: Vec<usize> = analysis.config.report_dims().collect();
        emit(
            "barcode.svg",
            barcode_svg(&analysis.intervals, &dims, analysis.config.max_filtration),
            &mut written,
        )?;
        if let Some(graph) = &analysis.graph {
            emit(
                "occurrences.svg",
                occurrences_svg(
                    &analysis.occurrences,
                    analysis.cycles.len(),
                    graph.node_sequence().len(),
                ),
                &mut written,
            )?;
        }
    }
    Ok(written)
}
