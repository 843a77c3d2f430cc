use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use dodeuri_core::analysis::{
    analyze_matrix, analyze_score, Analysis, AnalysisConfig, AnalysisError, ExportFormat,
};
use dodeuri_core::export;
use dodeuri_core::network::MetricMode;
use dodeuri_core::notation::{parse_score_with, ParseOptions, ScoreError};
use dodeuri_core::overlap::NsMode;
use dodeuri_core::Duration;

#[derive(Parser)]
#[command(
    name = "dodeuri",
    version,
    about = "Cycle analysis of Jeongganbo scores via weighted note networks and persistent homology"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Parse a JGB-v1 score and print its note events and node catalog.
    Parse {
        /// Score file.
        input: PathBuf,
        /// Length of the ingeojil short note, e.g. 1/6.
        #[arg(long, value_name = "BEATS")]
        ingeojil_short: Option<Duration>,
    },
    /// Run the full pipeline and write every report into a directory.
    Analyze {
        /// Score file, or a CSV dissimilarity matrix with --matrix.
        input: PathBuf,
        #[command(flatten)]
        opts: AnalysisOpts,
        /// Output directory (default: ./out).
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Analyze several pieces and print the comparison table.
    Compare {
        /// Score files (or CSV matrices with --matrix).
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        opts: AnalysisOpts,
        /// Directory for comparison.csv / comparison.txt (optional).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the barcode of a score or matrix as `dim birth death` lines.
    Barcode {
        /// Score file, or a CSV dissimilarity matrix with --matrix.
        input: PathBuf,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
}

#[derive(Args, Clone)]
pub struct AnalysisOpts {
    /// JSON config file; command-line flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Treat the input as a raw CSV dissimilarity matrix.
    #[arg(long)]
    pub matrix: bool,
    /// Overlap-matrix scale (minimum run length).
    #[arg(long = "s", value_name = "N")]
    pub overlap_scale: Option<usize>,
    /// Path objective for the dissimilarity: min-hop or min-cost.
    #[arg(long, value_name = "MODE")]
    pub metric: Option<String>,
    /// Top simplex dimension of the filtration (0-3).
    #[arg(long, value_name = "D")]
    pub max_dim: Option<usize>,
    /// Filtration cap.
    #[arg(long, value_name = "TAU")]
    pub max_filtration: Option<f64>,
    /// Length of the ingeojil short note, e.g. 1/6.
    #[arg(long, value_name = "BEATS")]
    pub ingeojil_short: Option<Duration>,
    /// Simultaneity counting: run-pairs or column-intervals.
    #[arg(long, value_name = "MODE")]
    pub ns_mode: Option<String>,
    /// Also match cycles by node set, ignoring edge order.
    #[arg(long)]
    pub loose: bool,
    /// Comma-separated outputs: json,csv,svg,text.
    #[arg(long, value_delimiter = ',')]
    pub formats: Vec<ExportFormat>,
}

pub enum CommandOutcome {
    Usage(String),
    Parse(String),
    Analysis(String),
}

impl From<ScoreError> for CommandOutcome {
    fn from(e: ScoreError) -> Self {
        CommandOutcome::Parse(e.to_string())
    }
}

impl From<AnalysisError> for CommandOutcome {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Notation(err) => CommandOutcome::Parse(err.to_string()),
            other => CommandOutcome::Analysis(other.to_string()),
        }
    }
}

fn read_input(path: &Path) -> Result<String, CommandOutcome> {
    fs::read_to_string(path)
        .map_err(|e| CommandOutcome::Usage(format!("cannot read {}: {e}", path.display())))
}

fn piece_name(path: &Path, title: &str) -> String {
    if !title.is_empty() {
        title.to_string()
    } else {
        path.file_stem().map_or_else(|| "piece".into(), |s| s.to_string_lossy().into_owned())
    }
}

impl AnalysisOpts {
    fn build_config(&self) -> Result<AnalysisConfig, CommandOutcome> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = read_input(path)?;
                serde_json::from_str::<AnalysisConfig>(&text).map_err(|e| {
                    CommandOutcome::Usage(format!("bad config {}: {e}", path.display()))
                })?
            }
            None => AnalysisConfig::default(),
        };
        if let Some(s) = self.overlap_scale {
            if s == 0 {
                return Err(CommandOutcome::Usage("--s must be at least 1".into()));
            }
            cfg.overlap_scale = s;
        }
        if let Some(metric) = &self.metric {
            cfg.metric_mode = match metric.as_str() {
                "min-hop" => MetricMode::MinHop,
                "min-cost" => MetricMode::MinCost,
                other => {
                    return Err(CommandOutcome::Usage(format!(
                        "unknown metric '{other}' (min-hop|min-cost)"
                    )))
                }
            };
        }
        if let Some(d) = self.max_dim {
            cfg.max_dim = d;
        }
        if let Some(f) = self.max_filtration {
            cfg.max_filtration = f;
        }
        if let Some(q) = self.ingeojil_short {
            cfg.ingeojil_short = q;
        }
        if let Some(mode) = &self.ns_mode {
            cfg.ns_mode = match mode.as_str() {
                "run-pairs" => NsMode::RunPairs,
                "column-intervals" => NsMode::ColumnIntervals,
                other => {
                    return Err(CommandOutcome::Usage(format!(
                        "unknown ns-mode '{other}' (run-pairs|column-intervals)"
                    )))
                }
            };
        }
        if self.loose {
            cfg.loose_matching = true;
        }
        if !self.formats.is_empty() {
            cfg.formats = self.formats.iter().copied().collect();
        }
        Ok(cfg)
    }

    fn analyze(&self, input: &Path) -> Result<Analysis, CommandOutcome> {
        let cfg = self.build_config()?;
        let text = read_input(input)?;
        if self.matrix {
            let rows = parse_matrix_csv(&text)
                .map_err(|e| CommandOutcome::Usage(format!("{}: {e}", input.display())))?;
            let name = piece_name(input, "");
            Ok(analyze_matrix(&name, &rows, &cfg)?)
        } else {
            let parse_opts = ParseOptions { ingeojil_short: cfg.ingeojil_short };
            let score = parse_score_with(&text, &parse_opts)?;
            let name = piece_name(input, &score.title);
            Ok(analyze_score(&name, &score, &cfg)?)
        }
    }
}

/// CSV matrix reader. A non-numeric first line is treated as a header row
/// (and the first column of each following row as labels).
fn parse_matrix_csv(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.is_empty() {
        return Err("empty matrix".into());
    }
    let first_cells: Vec<&str> = lines[0].split(',').map(str::trim).collect();
    let has_header = first_cells.iter().any(|c| c.parse::<f64>().is_err());
    let data_lines = if has_header { &lines[1..] } else { &lines[..] };
    let mut rows = Vec::new();
    for (i, line) in data_lines.iter().enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let cells = if has_header { &cells[1..] } else { &cells[..] };
        let mut row = Vec::with_capacity(cells.len());
        for c in cells {
            row.push(
                c.parse::<f64>()
                    .map_err(|_| format!("row {}: '{c}' is not a number", i + 1))?,
            );
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn run(cli: Cli) -> Result<(), CommandOutcome> {
    match cli.command {
        Command::Parse { input, ingeojil_short } => cmd_parse(&input, ingeojil_short),
        Command::Analyze { input, opts, out } => cmd_analyze(&input, &opts, &out),
        Command::Compare { inputs, opts, out } => cmd_compare(&inputs, &opts, out.as_deref()),
        Command::Barcode { input, opts } => cmd_barcode(&input, &opts),
    }
}

fn cmd_parse(input: &Path, ingeojil_short: Option<Duration>) -> Result<(), CommandOutcome> {
    let text = read_input(input)?;
    let opts = ParseOptions {
        ingeojil_short: ingeojil_short
            .unwrap_or_else(|| ParseOptions::default().ingeojil_short),
    };
    let score = parse_score_with(&text, &opts)?;
    println!("title: {}", if score.title.is_empty() { "(untitled)" } else { &score.title });
    println!("jeonggan per column: {}", score.jeonggan_per_column);
    println!("jeonggans: {}", score.jeonggan_count);
    println!("events: {}", score.events.len());
    println!();
    println!("{:<6} {:<7} {:<6} {:<8} {}", "name", "pitch", "length", "onset", "");
    for e in &score.events {
        let onset = if *e.start.denom() == 1 {
            e.start.numer().to_string()
        } else {
            format!("{}/{}", e.start.numer(), e.start.denom())
        };
        println!(
            "{:<6} {:<7} {:<6} {:<8}",
            e.pitch.name(),
            e.pitch.scientific(),
            e.duration.to_string(),
            onset
        );
    }
    let graph = dodeuri_core::network::build_network(&score).map_err(AnalysisError::from)?;
    println!();
    println!("node catalog ({} nodes):", graph.node_count());
    println!("{:<6} {:<6} {:<7} {}", "node", "name", "pitch", "length (Jeonggan)");
    for (i, (p, d)) in graph.nodes().iter().enumerate() {
        println!("{:<6} {:<6} {:<7} {}", format!("n{i}"), p.name(), p.scientific(), d);
    }
    Ok(())
}

fn cmd_analyze(input: &Path, opts: &AnalysisOpts, out: &Path) -> Result<(), CommandOutcome> {
    let analysis = opts.analyze(input)?;
    let written = export::write_analysis(&analysis, out)
        .map_err(|e| CommandOutcome::Analysis(format!("writing outputs: {e}")))?;
    println!("{}: {} cycle(s), {} barcode interval(s)", analysis.piece, analysis.cycles.len(), {
        analysis.report().barcode.len()
    });
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_compare(
    inputs: &[PathBuf],
    opts: &AnalysisOpts,
    out: Option<&Path>,
) -> Result<(), CommandOutcome> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for input in inputs {
        match opts.analyze(input) {
            Ok(analysis) => rows.push(analysis.comparison_row()),
            Err(e) => {
                let msg = match &e {
                    CommandOutcome::Usage(m)
                    | CommandOutcome::Parse(m)
                    | CommandOutcome::Analysis(m) => m.clone(),
                };
                eprintln!("{}: {msg}", input.display());
                failures.push(input.clone());
            }
        }
    }
    if !rows.is_empty() {
        print!("{}", export::comparison_text(&rows));
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir)
            .map_err(|e| CommandOutcome::Analysis(format!("creating {}: {e}", dir.display())))?;
        fs::write(dir.join("comparison.csv"), export::comparison_csv(&rows))
            .map_err(|e| CommandOutcome::Analysis(e.to_string()))?;
        fs::write(dir.join("comparison.txt"), export::comparison_text(&rows))
            .map_err(|e| CommandOutcome::Analysis(e.to_string()))?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CommandOutcome::Analysis(format!(
            "{} of {} input(s) failed",
            failures.len(),
            inputs.len()
        )))
    }
}

fn cmd_barcode(input: &Path, opts: &AnalysisOpts) -> Result<(), CommandOutcome> {
    let analysis = opts.analyze(input)?;
    print!("{}", export::barcode_text(&analysis.report()));
    Ok(())
}
