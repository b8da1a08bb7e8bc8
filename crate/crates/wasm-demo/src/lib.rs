//! Browser bindings. Every export takes plain values and returns a JSON
//! string; the `*_json` functions hold the logic and run natively too.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use stickersim::classical::{completion_counts, expected_duplicates_in_display, simulate_until_target};
use stickersim::rng::{map_replicates, seeded};
use stickersim::sampling::machine_display_duplicates;
use stickersim::stats::{histogram, sample_skewness, summarize};
use stickersim::{AlbumConfig, MixingVariant, Orientation, PackingPolicy};

const MAX_DISPLAYS: u32 = 20_000;
const MAX_RUNS: u32 = 200_000;

#[derive(Serialize)]
struct DisplayDuplicates {
    mix: String,
    duplicates: Vec<u64>,
    mean: f64,
    max: u64,
    classical_expectation: f64,
}

#[derive(Serialize)]
struct CollectionCurve {
    album_size: u32,
    target: u32,
    /// `[packets opened, distinct stickers]`
    points: Vec<(u32, u32)>,
    cards_to_target: u32,
}

#[derive(Serialize)]
struct CompletionHistogram {
    target: u32,
    runs: u32,
    /// `[cards, runs]`
    bins: Vec<(u32, u64)>,
    mean: f64,
    std: f64,
    skewness: Option<f64>,
    min: f64,
    max: f64,
}

fn album(preset: &str) -> Result<AlbumConfig, String> {
    AlbumConfig::preset(preset).map_err(|e| e.to_string())
}

fn to_json(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Duplicates in each of `displays` machine displays packed from sheets
/// mixed as `mix` (`cyclic`, `iid`, `block`, `swap:COUNT:WINDOW`, `twosided:B`).
pub fn display_duplicates_json(preset: &str, mix: &str, displays: u32, seed: u64) -> Result<String, String> {
    let cfg = album(preset)?;
    let variant: MixingVariant = mix.parse().map_err(|e: stickersim::Error| e.to_string())?;
    if displays == 0 || displays > MAX_DISPLAYS {
        return Err(format!("displays must be in 1..={MAX_DISPLAYS}"));
    }
    let duplicates = machine_display_duplicates(
        &cfg,
        variant.with_seed(seed),
        displays as usize,
        Orientation::default(),
        PackingPolicy::RoundRobin,
    )
    .map_err(|e| e.to_string())?;
    let values: Vec<f64> = duplicates.iter().map(|&d| d as f64).collect();
    to_json(&DisplayDuplicates {
        mix: variant.to_string(),
        mean: summarize(&values).map_or(0.0, |s| s.mean),
        max: duplicates.iter().copied().max().unwrap_or(0),
        duplicates,
        classical_expectation: expected_duplicates_in_display(cfg.total_stickers, cfg.display_stickers()),
    })
}

/// Distinct stickers after every packet of one collection until the album is full.
pub fn collection_curve_json(preset: &str, seed: u64) -> Result<String, String> {
    let cfg = album(preset)?;
    let run = simulate_until_target(&cfg, cfg.total_stickers, &mut seeded(seed)).map_err(|e| e.to_string())?;
    let target = cfg.buyback_target();
    let cards_to_target = run
        .distinct_curve
        .iter()
        .find(|&&(_, d)| d >= target)
        .map_or(0, |&(p, _)| p * cfg.packet_size);
    to_json(&CollectionCurve {
        album_size: cfg.total_stickers,
        target,
        points: run.distinct_curve,
        cards_to_target,
    })
}

/// Histogram of cards bought to reach the buy-back target over `runs` collections.
pub fn completion_histogram_json(preset: &str, runs: u32, seed: u64) -> Result<String, String> {
    let cfg = album(preset)?;
    if !(3..=MAX_RUNS).contains(&runs) {
        return Err(format!("runs must be in 3..={MAX_RUNS}"));
    }
    let target = cfg.buyback_target();
    let cards: Vec<u32> = map_replicates(u64::from(runs), seed, |rng| {
        completion_counts(&cfg, target, rng).map(|(c, _)| c)
    })
    .into_iter()
    .collect::<Result<_, _>>()
    .map_err(|e| e.to_string())?;
    let values: Vec<f64> = cards.iter().map(|&c| f64::from(c)).collect();
    let s = summarize(&values).ok_or("no runs")?;
    to_json(&CompletionHistogram {
        target,
        runs,
        bins: histogram(cards).into_iter().collect(),
        mean: s.mean,
        std: s.std,
        skewness: sample_skewness(&values).ok(),
        min: s.min,
        max: s.max,
    })
}

#[wasm_bindgen]
pub fn display_duplicates(preset: &str, mix: &str, displays: u32, seed: u32) -> Result<String, JsError> {
    display_duplicates_json(preset, mix, displays, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn collection_curve(preset: &str, seed: u32) -> Result<String, JsError> {
    collection_curve_json(preset, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn completion_histogram(preset: &str, runs: u32, seed: u32) -> Result<String, JsError> {
    completion_histogram_json(preset, runs, u64::from(seed)).map_err(|e| JsError::new(&e))
}
