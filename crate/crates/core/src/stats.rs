//! Duplicate counts, runs of consecutive numbers, pairwise display overlap,
//! percentile intervals and the small descriptive statistics around them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::album::{Display, StickerId};
use crate::error::{Error, Result};
use crate::rng::{map_replicates, SimRng};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateSummary {
    pub total: u64,
    pub distinct: u64,
    /// Excess copies: `total - distinct`.
    pub duplicates: u64,
    /// Multiplicity -> number of stickers seen exactly that often.
    pub per_multiplicity: BTreeMap<u32, u64>,
}

pub fn count_duplicates(stickers: impl IntoIterator<Item = StickerId>) -> DuplicateSummary {
    let mut counts: HashMap<StickerId, u32> = HashMap::new();
    let mut total = 0u64;
    for s in stickers {
        *counts.entry(s).or_default() += 1;
        total += 1;
    }
    let mut per_multiplicity = BTreeMap::new();
    for &m in counts.values() {
        *per_multiplicity.entry(m).or_default() += 1;
    }
    let distinct = counts.len() as u64;
    DuplicateSummary {
        total,
        distinct,
        duplicates: total - distinct,
        per_multiplicity,
    }
}

/// Duplicate count only, for hot loops over ids in `1..=album_size`.
pub fn duplicate_count_in(stickers: &[StickerId], album_size: u32) -> u64 {
    let mut seen = vec![false; album_size as usize];
    stickers
        .iter()
        .filter(|s| std::mem::replace(&mut seen[s.index()], true))
        .count() as u64
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunDirection {
    /// Each step goes up by exactly one: `5, 6, 7`.
    #[default]
    Ascending,
    /// Steps all `+1` or all `-1`: `5, 6, 7` or `7, 6, 5`.
    Either,
}

impl FromStr for RunDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascending" | "asc" => Ok(RunDirection::Ascending),
            "either" | "both" => Ok(RunDirection::Either),
            _ => Err(Error::invalid(format!(
                "unknown run direction {s:?} (expected ascending or either)"
            ))),
        }
    }
}

/// Length of the longest stretch of adjacent positions whose album numbers
/// step by one. Zero for an empty stream, one when no step qualifies.
pub fn longest_consecutive_run(stream: &[StickerId], direction: RunDirection) -> usize {
    if stream.is_empty() {
        return 0;
    }
    let (mut best, mut up, mut down) = (1, 1, 1);
    for w in stream.windows(2) {
        let (a, b) = (i64::from(w[0].0), i64::from(w[1].0));
        up = if b - a == 1 { up + 1 } else { 1 };
        down = if a - b == 1 { down + 1 } else { 1 };
        best = best.max(up);
        if direction == RunDirection::Either {
            best = best.max(down);
        }
    }
    best
}

/// Duplicates in the union of every pair of displays. Symmetric; the
/// diagonal holds a display combined with itself and is never used for
/// significance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<u64>>,
}

impl DuplicateMatrix {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.cells[a][b]
    }

    /// `(a, b, value)` for every `a < b`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let n = self.size();
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b, self.cells[a][b])))
    }

    pub fn min_pair(&self) -> Option<u64> {
        self.pairs().map(|(_, _, v)| v).min()
    }

    pub fn max_pair(&self) -> Option<u64> {
        self.pairs().map(|(_, _, v)| v).max()
    }

    /// Builds a matrix from upper-triangle values given row by row.
    pub fn from_upper(labels: Vec<String>, upper: &[Vec<u64>]) -> Result<Self> {
        let n = labels.len();
        if upper.len() + 1 != n {
            return Err(Error::invalid(format!(
                "{} labels need {} upper-triangle rows, got {}",
                n,
                n.saturating_sub(1),
                upper.len()
            )));
        }
        let mut cells = vec![vec![0; n]; n];
        for (a, row) in upper.iter().enumerate() {
            if row.len() != n - a - 1 {
                return Err(Error::invalid(format!(
                    "upper-triangle row {a} has {} cells",
                    row.len()
                )));
            }
            for (off, &v) in row.iter().enumerate() {
                let b = a + 1 + off;
                cells[a][b] = v;
                cells[b][a] = v;
            }
        }
        Ok(Self { labels, cells })
    }
}

pub fn pairwise_duplicate_matrix(displays: &[Display]) -> Result<DuplicateMatrix> {
    if displays.len() < 2 {
        return Err(Error::invalid("pairwise comparison needs at least two displays"));
    }
    let streams: Vec<Vec<StickerId>> = displays.iter().map(Display::sticker_vec).collect();
    let n = displays.len();
    let mut cells = vec![vec![0; n]; n];
    for a in 0..n {
        for b in a..n {
            let dups = count_duplicates(streams[a].iter().chain(&streams[b]).copied()).duplicates;
            cells[a][b] = dups;
            cells[b][a] = dups;
        }
    }
    Ok(DuplicateMatrix {
        labels: displays.iter().enumerate().map(|(i, d)| d.label(i)).collect(),
        cells,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Endpoints belong to the interval; only values strictly outside count.
    #[default]
    Closed,
    /// Values on an endpoint count as significant too.
    Open,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Boundary::Closed),
            "open" => Ok(Boundary::Open),
            _ => Err(Error::invalid(format!(
                "unknown boundary {s:?} (expected closed or open)"
            ))),
        }
    }
}

/// Percentile interval of a statistic under a random model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub replicates: u64,
    pub statistic_name: String,
}

impl MonteCarloInterval {
    pub fn fixed(lower: f64, upper: f64, statistic_name: impl Into<String>) -> Self {
        Self {
            lower,
            upper,
            level: 0.95,
            replicates: 0,
            statistic_name: statistic_name.into(),
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        (self.lower..=self.upper).contains(&value)
    }

    pub fn is_significant(&self, value: f64, boundary: Boundary) -> bool {
        match boundary {
            Boundary::Closed => value < self.lower || value > self.upper,
            Boundary::Open => value <= self.lower || value >= self.upper,
        }
    }
}

impl fmt::Display for MonteCarloInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: [{}, {}] at {:.0}% ({} replicates)",
            self.statistic_name,
            self.lower,
            self.upper,
            self.level * 100.0,
            self.replicates
        )
    }
}

/// Off-diagonal pairs of `matrix` falling outside `interval`.
pub fn significance_count(matrix: &DuplicateMatrix, interval: &MonteCarloInterval, boundary: Boundary) -> usize {
    matrix
        .pairs()
        .filter(|&(_, _, v)| interval.is_significant(v as f64, boundary))
        .count()
}

/// Adjusted Fisher-Pearson skewness `G1 = sqrt(n(n-1)) / (n-2) * m3 / m2^1.5`.
pub fn sample_skewness(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 3 {
        return Err(Error::invalid(format!("skewness needs at least 3 values, got {n}")));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let (mut m2, mut m3) = (0.0, 0.0);
    for &v in values {
        let d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= nf;
    m3 /= nf;
    if m2 <= 0.0 || !m2.is_finite() {
        return Err(Error::invalid("skewness of a constant sample is undefined"));
    }
    let g1 = m3 / m2.powf(1.5);
    Ok((nf * (nf - 1.0)).sqrt() / (nf - 2.0) * g1)
}

/// Trailing mean over `window` values, one output per position once the
/// window is full.
pub fn moving_average(values: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::invalid("moving-average window must be at least 1"));
    }
    if values.len() < window {
        return Ok(Vec::new());
    }
    let mut sum: f64 = values[..window].iter().sum();
    let mut out = Vec::with_capacity(values.len() - window + 1);
    out.push(sum / window as f64);
    for i in window..values.len() {
        sum += values[i] - values[i - window];
        out.push(sum / window as f64);
    }
    Ok(out)
}

/// Inverse empirical CDF: the smallest sample value `x` with
/// `#{v <= x} >= ceil(p * n)`. `sorted` must be ascending.
pub fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let n = sorted.len();
    // tolerance keeps 0.025 * 1000 at rank 25 despite rounding
    let rank = ((p * n as f64 - 1e-9).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// Equal-tailed percentile interval of `samples` at `level`.
pub fn percentile_interval(mut samples: Vec<f64>, level: f64, statistic_name: &str) -> Result<MonteCarloInterval> {
    check_level(level, samples.len() as u64)?;
    samples.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Ok(MonteCarloInterval {
        lower: empirical_quantile(&samples, tail),
        upper: empirical_quantile(&samples, 1.0 - tail),
        level,
        replicates: samples.len() as u64,
        statistic_name: statistic_name.to_owned(),
    })
}

/// At least 25 expected samples in each tail: 1000 replicates at 95%.
fn check_level(level: f64, replicates: u64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("interval level {level} outside (0, 1)")));
    }
    let needed = (50.0 / (1.0 - level)).round() as u64;
    if replicates < needed {
        return Err(Error::invalid(format!(
            "a {:.1}% interval needs at least {needed} replicates, got {replicates}",
            level * 100.0
        )));
    }
    Ok(())
}

/// Samples `statistic` once per replicate (replicate `r` on stream `r` of
/// `seed`) and returns the equal-tailed percentile interval.
pub fn monte_carlo_interval<F>(
    statistic_name: &str,
    replicates: u64,
    level: f64,
    seed: u64,
    statistic: F,
) -> Result<MonteCarloInterval>
where
    F: Fn(&mut SimRng) -> f64 + Sync + Send,
{
    check_level(level, replicates)?;
    percentile_interval(map_replicates(replicates, seed, statistic), level, statistic_name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: u64,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Mean, sample standard deviation and range. `None` for an empty slice.
pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Some(Summary {
        count: values.len() as u64,
        mean,
        std: var.sqrt(),
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

pub fn histogram(values: impl IntoIterator<Item = u32>) -> BTreeMap<u32, u64> {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v).or_default() += 1;
    }
    h
}
