//! Serializable experiment specs and their reports.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use stickersim::classical::simulate_until_target;
use stickersim::io::{ingest_displays, read_displays};
use stickersim::reference::TABLE1_DISPLAYS_CSV;
use stickersim::rng::{map_replicates, replicate_rng};
use stickersim::sampling::{classical_display_duplicates, machine_display_duplicates, two_display_duplicates};
use stickersim::stats::{
    empirical_quantile, histogram, moving_average, pairwise_duplicate_matrix, percentile_interval, sample_skewness,
    significance_count, summarize, Boundary, MonteCarloInterval,
};
use stickersim::{AlbumConfig, MixingVariant, Orientation, PackingPolicy};

use crate::CliError;

/// Name of the built-in ten-display fixture usable as `displays`.
pub const BUILTIN_TABLE1: &str = "builtin:table1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlbumSource {
    Preset(String),
    Config(AlbumConfig),
}

impl AlbumSource {
    pub fn resolve(&self) -> Result<AlbumConfig, CliError> {
        let cfg = match self {
            AlbumSource::Preset(name) => AlbumConfig::preset(name)?,
            AlbumSource::Config(cfg) => *cfg,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Model {
    Classical,
    Fifimatic {
        mixing: MixingVariant,
        #[serde(default)]
        orientation: Orientation,
        #[serde(default)]
        packing: PackingPolicy,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// Distinct stickers after every packet of one collection run.
    CollectionCurve,
    /// Repeats in every packet of one collection run, with a moving average.
    DuplicatesPerPacket,
    /// Cards bought until the buy-back target, one value per replicate.
    CompletionCards,
    /// Duplicates inside one display, one value per replicate or machine display.
    DisplayDuplicates,
    /// Overlap of two random duplicate-free displays.
    TwoDisplayDuplicates,
    /// Pairwise duplicates of the `displays` input against the two-display interval.
    PairwiseMatrix,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::CollectionCurve => "collection_curve",
            Statistic::DuplicatesPerPacket => "duplicates_per_packet",
            Statistic::CompletionCards => "completion_cards",
            Statistic::DisplayDuplicates => "display_duplicates",
            Statistic::TwoDisplayDuplicates => "two_display_duplicates",
            Statistic::PairwiseMatrix => "pairwise_matrix",
        }
    }
}

/// Accepted range for one reported measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub statistic: Statistic,
    pub measure: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    /// Acceptance criterion the range comes from.
    pub criterion: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    pub album: AlbumSource,
    pub model: Model,
    pub replicates: u64,
    pub seed: u64,
    pub statistics: Vec<Statistic>,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default = "default_window")]
    pub moving_average_window: usize,
    /// CSV of displays for `pairwise_matrix`, or `builtin:table1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displays: Option<String>,
    /// Directory for CSV series; nothing is written when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub expectations: Vec<Expectation>,
}

fn default_level() -> f64 {
    0.95
}

fn default_window() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticReport {
    pub statistic: Statistic,
    pub measures: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<MonteCarloInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationResult {
    #[serde(flatten)]
    pub expectation: Expectation,
    pub observed: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub results: Vec<StatisticReport>,
    pub expectations: Vec<ExpectationResult>,
    pub passed: bool,
}

struct Context<'a> {
    spec: &'a ExperimentSpec,
    cfg: AlbumConfig,
}

impl Context<'_> {
    fn csv_path(&self, stat: Statistic) -> Option<PathBuf> {
        self.spec
            .output_dir
            .as_ref()
            .map(|dir| dir.join(format!("{}_{}.csv", self.spec.name, stat.name())))
    }
}

fn distribution_measures(values: &[f64]) -> Result<BTreeMap<String, f64>, CliError> {
    let s = summarize(values).ok_or_else(|| CliError::Usage("no samples".into()))?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut m = BTreeMap::from([
        ("count".to_owned(), s.count as f64),
        ("mean".to_owned(), s.mean),
        ("std".to_owned(), s.std),
        ("min".to_owned(), s.min),
        ("max".to_owned(), s.max),
        ("median".to_owned(), empirical_quantile(&sorted, 0.5)),
    ]);
    if values.len() >= 3 {
        if let Ok(g) = sample_skewness(values) {
            m.insert("skewness".into(), g);
        }
    }
    Ok(m)
}

fn write_csv<R: AsRef<[u8]>>(
    path: Option<&Path>,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<R>>,
) -> Result<(), CliError> {
    let Some(path) = path else { return Ok(()) };
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let io = |e: csv::Error| CliError::Io(path.to_owned(), e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn histogram_rows(values: &[f64]) -> Vec<Vec<String>> {
    histogram(values.iter().map(|&v| v as u32))
        .into_iter()
        .map(|(k, c)| vec![k.to_string(), c.to_string()])
        .collect()
}

fn require_classical(ctx: &Context, stat: Statistic) -> Result<(), CliError> {
    match ctx.spec.model {
        Model::Classical => Ok(()),
        Model::Fifimatic { .. } => Err(CliError::Usage(format!("{} needs the classical model", stat.name()))),
    }
}

fn interval_or_none(values: &[f64], level: f64, name: &str) -> Option<MonteCarloInterval> {
    percentile_interval(values.to_vec(), level, name).ok()
}

fn run_statistic(ctx: &Context, stat: Statistic) -> Result<StatisticReport, CliError> {
    let spec = ctx.spec;
    let cfg = &ctx.cfg;
    let csv = ctx.csv_path(stat);
    let mut interval = None;
    let measures = match stat {
        Statistic::CollectionCurve => {
            require_classical(ctx, stat)?;
            let run = simulate_until_target(cfg, cfg.total_stickers, &mut replicate_rng(spec.seed, 0))?;
            let target = cfg.buyback_target();
            let at_target = run
                .distinct_curve
                .iter()
                .find(|&&(_, d)| d >= target)
                .map_or(0, |&(p, _)| p);
            write_csv(
                csv.as_deref(),
                &["packets", "cards", "distinct"],
                run.distinct_curve
                    .iter()
                    .map(|&(p, d)| vec![p.to_string(), (p * cfg.packet_size).to_string(), d.to_string()]),
            )?;
            BTreeMap::from([
                ("packets_to_complete".to_owned(), f64::from(run.packets_opened())),
                ("cards_to_complete".to_owned(), f64::from(run.completion_card_count)),
                ("cards_to_target".to_owned(), f64::from(at_target * cfg.packet_size)),
            ])
        }
        Statistic::DuplicatesPerPacket => {
            require_classical(ctx, stat)?;
            let run = simulate_until_target(cfg, cfg.buyback_target(), &mut replicate_rng(spec.seed, 0))?;
            let dups: Vec<f64> = run
                .duplicates_per_packet(cfg.packet_size as usize)
                .into_iter()
                .map(f64::from)
                .collect();
            let window = spec.moving_average_window;
            let avg = moving_average(&dups, window)?;
            write_csv(
                csv.as_deref(),
                &["packet", "duplicates", "moving_average"],
                dups.iter().enumerate().map(|(i, d)| {
                    let ma = if i + 1 >= window {
                        avg[i + 1 - window].to_string()
                    } else {
                        Default::default()
                    };
                    vec![(i + 1).to_string(), d.to_string(), ma]
                }),
            )?;
            let mut m = distribution_measures(&dups)?;
            m.insert("total".into(), dups.iter().sum());
            if let Some(&last) = avg.last() {
                m.insert("final_moving_average".into(), last);
            }
            m
        }
        Statistic::CompletionCards => {
            require_classical(ctx, stat)?;
            let target = cfg.buyback_target();
            let runs = map_replicates(spec.replicates, spec.seed, |rng| {
                stickersim::classical::completion_counts(cfg, target, rng).map(|(c, _)| f64::from(c))
            });
            let cards = runs.into_iter().collect::<Result<Vec<f64>, _>>()?;
            write_csv(csv.as_deref(), &["cards", "runs"], histogram_rows(&cards))?;
            interval = interval_or_none(&cards, spec.level, stat.name());
            distribution_measures(&cards)?
        }
        Statistic::DisplayDuplicates => {
            let values: Vec<f64> = match &spec.model {
                Model::Classical => map_replicates(spec.replicates, spec.seed, |rng| {
                    classical_display_duplicates(cfg, rng).map(|d| d as f64)
                })
                .into_iter()
                .collect::<Result<_, _>>()?,
                Model::Fifimatic {
                    mixing,
                    orientation,
                    packing,
                } => machine_display_duplicates(
                    cfg,
                    mixing.with_seed(spec.seed),
                    spec.replicates as usize,
                    *orientation,
                    *packing,
                )?
                .into_iter()
                .map(|d| d as f64)
                .collect(),
            };
            write_csv(csv.as_deref(), &["duplicates", "displays"], histogram_rows(&values))?;
            interval = interval_or_none(&values, spec.level, stat.name());
            distribution_measures(&values)?
        }
        Statistic::TwoDisplayDuplicates => {
            let iv = two_display_interval(spec, cfg)?;
            let m = BTreeMap::from([
                ("interval_lower".to_owned(), iv.lower),
                ("interval_upper".to_owned(), iv.upper),
            ]);
            interval = Some(iv);
            m
        }
        Statistic::PairwiseMatrix => {
            let source = spec
                .displays
                .as_deref()
                .ok_or_else(|| CliError::Usage("pairwise_matrix needs `displays`".into()))?;
            let displays = if source == BUILTIN_TABLE1 {
                read_displays(TABLE1_DISPLAYS_CSV.as_bytes(), cfg)?
            } else {
                ingest_displays(source, cfg)?
            };
            let matrix = pairwise_duplicate_matrix(&displays)?;
            let iv = two_display_interval(spec, cfg)?;
            let count = significance_count(&matrix, &iv, spec.boundary);
            write_csv(
                csv.as_deref(),
                &["display_a", "display_b", "duplicates", "significant"],
                matrix.pairs().map(|(a, b, v)| {
                    vec![
                        matrix.labels[a].clone(),
                        matrix.labels[b].clone(),
                        v.to_string(),
                        u8::from(iv.is_significant(v as f64, spec.boundary)).to_string(),
                    ]
                }),
            )?;
            let m = BTreeMap::from([
                ("displays".to_owned(), displays.len() as f64),
                ("pairs".to_owned(), matrix.pairs().count() as f64),
                ("min".to_owned(), matrix.min_pair().unwrap_or(0) as f64),
                ("max".to_owned(), matrix.max_pair().unwrap_or(0) as f64),
                ("interval_lower".to_owned(), iv.lower),
                ("interval_upper".to_owned(), iv.upper),
                ("significant_count".to_owned(), count as f64),
            ]);
            interval = Some(iv);
            m
        }
    };
    Ok(StatisticReport {
        statistic: stat,
        measures,
        interval,
        csv,
    })
}

fn two_display_interval(spec: &ExperimentSpec, cfg: &AlbumConfig) -> Result<MonteCarloInterval, CliError> {
    let values = map_replicates(spec.replicates, spec.seed, |rng| {
        two_display_duplicates(cfg, rng) as f64
    });
    Ok(percentile_interval(values, spec.level, "two_display_duplicates")?)
}

fn check(expectation: &Expectation, results: &[StatisticReport]) -> ExpectationResult {
    let observed = results
        .iter()
        .find(|r| r.statistic == expectation.statistic)
        .and_then(|r| r.measures.get(&expectation.measure).copied());
    let passed = observed
        .is_some_and(|v| expectation.lower.is_none_or(|lo| v >= lo) && expectation.upper.is_none_or(|hi| v <= hi));
    ExpectationResult {
        expectation: expectation.clone(),
        observed,
        passed,
    }
}

pub fn run(spec: &ExperimentSpec) -> Result<ExperimentReport, CliError> {
    if spec.replicates == 0 {
        return Err(CliError::Usage("replicates must be at least 1".into()));
    }
    let cfg = spec.album.resolve()?;
    if let Some(dir) = &spec.output_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let ctx = Context { spec, cfg };
    let results = spec
        .statistics
        .iter()
        .map(|&s| run_statistic(&ctx, s))
        .collect::<Result<Vec<_>, _>>()?;
    let expectations: Vec<ExpectationResult> = spec.expectations.iter().map(|e| check(e, &results)).collect();
    Ok(ExperimentReport {
        spec: spec.clone(),
        passed: expectations.iter().all(|e| e.passed),
        results,
        expectations,
    })
}

pub const BUNDLED: [(&str, &str); 8] = [
    ("fig1", include_str!("../specs/fig1.json")),
    ("fig2", include_str!("../specs/fig2.json")),
    ("fig3", include_str!("../specs/fig3.json")),
    ("wm-display", include_str!("../specs/wm-display.json")),
    ("amici-display", include_str!("../specs/amici-display.json")),
    ("machine-cyclic", include_str!("../specs/machine-cyclic.json")),
    ("machine-mixed", include_str!("../specs/machine-mixed.json")),
    ("table1-analysis", include_str!("../specs/table1-analysis.json")),
];

/// A bundled spec by name, or a JSON spec file.
pub fn load_spec(name_or_path: &str) -> Result<ExperimentSpec, CliError> {
    let text = match BUNDLED.iter().find(|(n, _)| *n == name_or_path) {
        Some((_, text)) => text.to_string(),
        None => {
            let path = Path::new(name_or_path);
            if !path.exists() {
                let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
                return Err(CliError::Usage(format!(
                    "{name_or_path:?} is neither a bundled spec ({}) nor a file",
                    names.join(", ")
                )));
            }
            fs::read_to_string(path).map_err(|e| CliError::io(path, e))?
        }
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad spec {name_or_path}: {e}")))
}
