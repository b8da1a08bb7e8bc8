use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use stickersim::classical::{
    classical_packet_count, completion_counts, expected_cards_to_target, expected_duplicates_in_display,
    fifimatic_packet_count, log10_prob_zero_duplicates, log10_prob_zero_duplicates_unpacketed, std_cards_to_target,
};
use stickersim::io::{ingest_displays, read_packets, write_displays, write_packets};
use stickersim::machine::{pack_displays, produce};
use stickersim::rng::map_replicates;
use stickersim::sampling::two_display_duplicates;
use stickersim::stats::{
    duplicate_count_in, longest_consecutive_run, monte_carlo_interval, pairwise_duplicate_matrix, sample_skewness,
    significance_count, summarize, Boundary, MonteCarloInterval, RunDirection,
};
use stickersim::{AlbumConfig, MixingVariant, Orientation, PackingPolicy};

mod experiment;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(PathBuf, String),
    Expectation(String),
}

impl CliError {
    pub fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io(path.to_owned(), e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Expectation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(..) => 3,
        }
    }
}

impl From<stickersim::Error> for CliError {
    fn from(e: stickersim::Error) -> Self {
        match e {
            stickersim::Error::Io { path, source } => CliError::Io(path, source.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Expectation(m) => f.write_str(m),
            CliError::Io(path, m) if path.as_os_str().is_empty() => write!(f, "I/O error: {m}"),
            CliError::Io(path, m) => write!(f, "{}: {m}", path.display()),
        }
    }
}

/// Sticker album collection and machine packing experiments.
#[derive(Parser)]
#[command(name = "stickersim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct AlbumArgs {
    /// Album preset: wm2014, bundesliga2014 or amici.
    #[arg(long, default_value = "wm2014", conflicts_with = "config")]
    preset: String,
    /// TOML album config instead of a preset.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl AlbumArgs {
    fn resolve(&self) -> Result<AlbumConfig, CliError> {
        Ok(match &self.config {
            Some(path) => AlbumConfig::from_toml_file(path)?,
            None => AlbumConfig::preset(&self.preset)?,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form expectations and exact packet counts for an album.
    Formulas {
        #[command(flatten)]
        album: AlbumArgs,
        /// Distinct stickers to collect; defaults to album size minus buy-back.
        #[arg(long)]
        target: Option<u32>,
    },
    /// Monte Carlo collections under independent random packets.
    SimulateClassical {
        #[command(flatten)]
        album: AlbumArgs,
        #[arg(long)]
        target: Option<u32>,
        #[arg(long, default_value_t = 100_000)]
        replicates: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// CSV with one row per replicate.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON summary; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Mixes sheets and runs the packing machine.
    Produce {
        #[command(flatten)]
        album: AlbumArgs,
        /// cyclic, iid, block, swap:COUNT:WINDOW or twosided:BLOCK.
        #[arg(long, default_value = "cyclic")]
        mix: MixingVariant,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        packets: usize,
        /// descending or ascending.
        #[arg(long, default_value = "descending")]
        orientation: Orientation,
        /// Packet CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boxes a packet CSV into displays.
    PackDisplays {
        #[command(flatten)]
        album: AlbumArgs,
        /// Packet CSV as written by `produce`.
        input: PathBuf,
        /// round-robin or single-belt.
        #[arg(long, default_value = "round-robin")]
        packing: PackingPolicy,
        /// Display CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Duplicates, runs and pairwise comparison of real displays.
    AnalyzeDisplay {
        #[command(flatten)]
        album: AlbumArgs,
        /// Display CSV with header display_serial,position,sticker_id.
        input: PathBuf,
        /// Replicates for the two-display reference interval.
        #[arg(long, default_value_t = 100_000)]
        replicates: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// closed or open.
        #[arg(long, default_value = "closed")]
        boundary: Boundary,
        /// ascending or either.
        #[arg(long, default_value = "ascending")]
        runs: RunDirection,
        /// CSV of the pairwise matrix.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Runs a bundled or JSON experiment spec.
    RunSpec {
        /// Bundled spec name or path to a JSON spec.
        #[arg(required_unless_present = "list")]
        spec: Option<String>,
        /// Lists bundled specs.
        #[arg(long)]
        list: bool,
        /// Prints the spec JSON instead of running it.
        #[arg(long)]
        show: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replicates: Option<u64>,
        /// Directory for CSV series.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn emit_json(value: &impl Serialize, path: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    Ok(BufReader::new(File::open(path).map_err(|e| CliError::io(path, e))?))
}

fn formulas(cfg: &AlbumConfig, target: Option<u32>) -> Result<(), CliError> {
    let target = target.unwrap_or(cfg.buyback_target());
    let b = cfg.total_stickers;
    let classical = classical_packet_count(b, cfg.packet_size);
    let machine = fifimatic_packet_count(b, cfg.quadrotte_rows)?;
    let as_f64 = |v: &dyn ToString| v.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let ratio = as_f64(&classical) / as_f64(&machine);
    emit_json(
        &json!({
            "album": cfg,
            "target": target,
            "expected_cards_to_target": expected_cards_to_target(b, target)?,
            "std_cards_to_target": std_cards_to_target(b, target)?,
            "display_stickers": cfg.display_stickers(),
            "expected_duplicates_in_display": expected_duplicates_in_display(b, cfg.display_stickers()),
            "log10_prob_zero_duplicates": log10_prob_zero_duplicates(b, cfg.packet_size, cfg.display_packets),
            "log10_prob_zero_duplicates_single_cards": log10_prob_zero_duplicates_unpacketed(b, cfg.display_stickers()),
            "classical_packet_count": classical.to_string(),
            "machine_packet_count": machine.to_string(),
            "packet_count_ratio": ratio,
        }),
        None,
    )
}

fn simulate_classical(
    cfg: &AlbumConfig,
    target: Option<u32>,
    replicates: u64,
    seed: u64,
    out: Option<&Path>,
    report: Option<&Path>,
) -> Result<(), CliError> {
    let target = target.unwrap_or(cfg.buyback_target());
    let runs = map_replicates(replicates, seed, |rng| completion_counts(cfg, target, rng))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = out {
        let mut w = csv::Writer::from_writer(output(Some(path))?);
        let io = |e: csv::Error| CliError::Io(path.to_owned(), e.to_string());
        w.write_record(["replicate", "cards", "packets"]).map_err(io)?;
        for (i, (cards, packets)) in runs.iter().enumerate() {
            w.write_record([i.to_string(), cards.to_string(), packets.to_string()])
                .map_err(io)?;
        }
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    let cards: Vec<f64> = runs.iter().map(|&(c, _)| f64::from(c)).collect();
    let interval = stickersim::stats::percentile_interval(cards.clone(), 0.95, "cards").ok();
    emit_json(
        &json!({
            "album": cfg,
            "target": target,
            "replicates": replicates,
            "seed": seed,
            "cards": summarize(&cards),
            "skewness": sample_skewness(&cards).ok(),
            "interval": interval,
            "expected_cards_single_draws": expected_cards_to_target(cfg.total_stickers, target)?,
        }),
        report,
    )
}

#[allow(clippy::too_many_arguments)]
fn analyze_display(
    cfg: &AlbumConfig,
    input: &Path,
    replicates: u64,
    seed: u64,
    boundary: Boundary,
    runs: RunDirection,
    out: Option<&Path>,
    report: Option<&Path>,
) -> Result<(), CliError> {
    let displays = ingest_displays(input, cfg)?;
    let per_display: Vec<_> = displays
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let stickers = d.sticker_vec();
            json!({
                "display": d.label(i),
                "stickers": stickers.len(),
                "duplicates": duplicate_count_in(&stickers, cfg.total_stickers),
                "longest_run": longest_consecutive_run(&stickers, runs),
            })
        })
        .collect();
    let mut pairwise = serde_json::Value::Null;
    if displays.len() >= 2 {
        let matrix = pairwise_duplicate_matrix(&displays)?;
        let interval: MonteCarloInterval =
            monte_carlo_interval("two_display_duplicates", replicates, 0.95, seed, |rng| {
                two_display_duplicates(cfg, rng) as f64
            })?;
        if let Some(path) = out {
            let mut w = csv::Writer::from_writer(output(Some(path))?);
            let io = |e: csv::Error| CliError::Io(path.to_owned(), e.to_string());
            let mut header = vec![String::new()];
            header.extend(matrix.labels.iter().cloned());
            w.write_record(&header).map_err(io)?;
            for (label, row) in matrix.labels.iter().zip(&matrix.cells) {
                let mut rec = vec![label.clone()];
                rec.extend(row.iter().map(u64::to_string));
                w.write_record(&rec).map_err(io)?;
            }
            w.flush().map_err(|e| CliError::io(path, e))?;
        }
        pairwise = json!({
            "interval": interval,
            "boundary": boundary,
            "significant_count": significance_count(&matrix, &interval, boundary),
            "pairs": matrix.pairs().count(),
            "min": matrix.min_pair(),
            "max": matrix.max_pair(),
            "matrix": matrix,
        });
    }
    emit_json(
        &json!({ "album": cfg, "seed": seed, "displays": per_display, "pairwise": pairwise }),
        report,
    )
}

fn run_spec(
    spec: Option<String>,
    list: bool,
    show: bool,
    seed: Option<u64>,
    replicates: Option<u64>,
    out: Option<PathBuf>,
    report: Option<&Path>,
) -> Result<(), CliError> {
    if list {
        for (name, text) in experiment::BUNDLED {
            let spec: experiment::ExperimentSpec =
                serde_json::from_str(text).map_err(|e| CliError::Usage(e.to_string()))?;
            println!("{name:16} {}", spec.note);
        }
        return Ok(());
    }
    let mut spec = experiment::load_spec(spec.as_deref().unwrap_or_default())?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    if let Some(r) = replicates {
        spec.replicates = r;
    }
    if out.is_some() {
        spec.output_dir = out;
    }
    if show {
        return emit_json(&spec, None);
    }
    let result = experiment::run(&spec)?;
    emit_json(&result, report)?;
    if result.passed {
        Ok(())
    } else {
        let failed: Vec<String> = result
            .expectations
            .iter()
            .filter(|e| !e.passed)
            .map(|e| {
                format!(
                    "{}.{} = {:?} ({})",
                    e.expectation.statistic.name(),
                    e.expectation.measure,
                    e.observed,
                    e.expectation.criterion
                )
            })
            .collect();
        Err(CliError::Expectation(format!(
            "expectation failed: {}",
            failed.join("; ")
        )))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Formulas { album, target } => formulas(&album.resolve()?, target),
        Command::SimulateClassical {
            album,
            target,
            replicates,
            seed,
            out,
            report,
        } => simulate_classical(
            &album.resolve()?,
            target,
            replicates,
            seed,
            out.as_deref(),
            report.as_deref(),
        ),
        Command::Produce {
            album,
            mix,
            seed,
            packets,
            orientation,
            out,
        } => {
            let cfg = album.resolve()?;
            let packets = produce(&cfg, mix.with_seed(seed), packets, orientation)?;
            write_packets(output(out.as_deref())?, &packets).map_err(|e| with_path(e, out.as_deref()))
        }
        Command::PackDisplays {
            album,
            input,
            packing,
            out,
        } => {
            let cfg = album.resolve()?;
            let packets = read_packets(open(&input)?, &cfg).map_err(|e| with_path(e, Some(&input)))?;
            let displays = pack_displays(packets, &cfg, packing)?;
            write_displays(output(out.as_deref())?, &displays).map_err(|e| with_path(e, out.as_deref()))
        }
        Command::AnalyzeDisplay {
            album,
            input,
            replicates,
            seed,
            boundary,
            runs,
            out,
            report,
        } => analyze_display(
            &album.resolve()?,
            &input,
            replicates,
            seed,
            boundary,
            runs,
            out.as_deref(),
            report.as_deref(),
        ),
        Command::RunSpec {
            spec,
            list,
            show,
            seed,
            replicates,
            out,
            report,
        } => run_spec(spec, list, show, seed, replicates, out, report.as_deref()),
    }
}

fn with_path(e: stickersim::Error, path: Option<&Path>) -> CliError {
    match (e, path) {
        (stickersim::Error::Io { source, .. }, Some(p)) => CliError::io(p, source),
        (e, _) => e.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stickersim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
