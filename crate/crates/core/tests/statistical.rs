//! Simulation checked against independent oracles: exact occupancy and
//! hypergeometric laws, brute-force permutation distributions, and
//! exhaustive enumeration of the toy machine.

use std::collections::{BTreeSet, HashMap};

use rand_distr::{Distribution, Exp, StandardNormal};
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Hypergeometric};

use stickersim::classical::{
    completion_counts, draw_packet_classical, expected_cards_to_target, expected_duplicates_in_display,
    std_cards_to_target,
};
use stickersim::machine::{packet_mate_candidates, produce, Orientation};
use stickersim::mixer::{generate_sequence, MixingVariant};
use stickersim::rng::{map_replicates, seeded};
use stickersim::sampling::{classical_display_duplicates, random_display_longest_run, two_display_duplicates};
use stickersim::stats::{empirical_quantile, monte_carlo_interval, sample_skewness, summarize, RunDirection};
use stickersim::{AlbumConfig, StickerId};

/// Exact law of duplicates among `draws` independent uniform cards from `album`.
fn occupancy_duplicates_pmf(album: u32, draws: u32) -> Vec<f64> {
    let b = f64::from(album);
    let mut distinct = vec![0.0; album as usize + 1];
    distinct[0] = 1.0;
    for _ in 0..draws {
        let mut next = vec![0.0; album as usize + 1];
        for (k, &p) in distinct.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let kf = k as f64;
            next[k] += p * kf / b;
            if k < album as usize {
                next[k + 1] += p * (b - kf) / b;
            }
        }
        distinct = next;
    }
    let mut dups = vec![0.0; draws as usize + 1];
    for (k, &p) in distinct.iter().enumerate() {
        if k <= draws as usize {
            dups[draws as usize - k] += p;
        }
    }
    dups
}

/// Smallest value whose CDF reaches `p`.
fn pmf_quantile(pmf: &[f64], p: f64) -> f64 {
    let mut acc = 0.0;
    for (x, &m) in pmf.iter().enumerate() {
        acc += m;
        if acc >= p - 1e-12 {
            return x as f64;
        }
    }
    (pmf.len() - 1) as f64
}

fn single_card(total: u32, display: u32) -> AlbumConfig {
    AlbumConfig::new(total, 1, 1, 0, display).unwrap()
}

#[test]
fn classical_packets_are_uniform_per_sticker() {
    let cfg = AlbumConfig::wm2014();
    let mut rng = seeded(101);
    let mut freq = vec![0u64; 641];
    let packets = 100_000;
    for i in 0..packets {
        for s in draw_packet_classical(&cfg, i, &mut rng).unwrap().stickers {
            freq[s.get() as usize] += 1;
        }
    }
    let expected = (packets * 5) as f64 / 640.0;
    let chi2: f64 = freq[1..]
        .iter()
        .map(|&f| (f as f64 - expected).powi(2) / expected)
        .sum();
    let critical = ChiSquared::new(639.0).unwrap().inverse_cdf(0.999);
    assert!(chi2 < critical, "chi2 {chi2} >= {critical}");
}

#[test]
fn single_card_collection_matches_geometric_formulas() {
    let cfg = AlbumConfig::new(300, 1, 1, 50, 250).unwrap();
    let cards: Vec<f64> = map_replicates(100_000, 102, |rng| completion_counts(&cfg, 250, rng).unwrap().0 as f64);
    let s = summarize(&cards).unwrap();
    let mean = expected_cards_to_target(300, 250).unwrap();
    let sd = std_cards_to_target(300, 250).unwrap();
    let se = s.std / (s.count as f64).sqrt();
    assert!((s.mean - mean).abs() < 3.0 * se, "mean {} vs {mean} (se {se})", s.mean);
    assert!((s.std / sd - 1.0).abs() < 0.05, "std {} vs {sd}", s.std);
}

#[test]
fn bundesliga_packets_need_about_535_cards() {
    let cfg = AlbumConfig::bundesliga2014();
    let cards: Vec<f64> = map_replicates(100_000, 103, |rng| completion_counts(&cfg, 250, rng).unwrap().0 as f64);
    let s = summarize(&cards).unwrap();
    assert!((s.mean - 535.0).abs() <= 2.0, "{}", s.mean);
    let sd = std_cards_to_target(300, 250).unwrap();
    assert!((s.std / sd - 1.0).abs() < 0.05, "std {} vs {sd}", s.std);
}

#[test]
fn display_duplicate_formula_matches_single_card_simulation() {
    for (total, display) in [(640, 500), (576, 300)] {
        let cfg = single_card(total, display);
        let dups: Vec<f64> = map_replicates(100_000, 104, |rng| {
            classical_display_duplicates(&cfg, rng).unwrap() as f64
        });
        let mean = summarize(&dups).unwrap().mean;
        let want = expected_duplicates_in_display(total, display);
        assert!((mean - want).abs() < 0.5, "{total}/{display}: {mean} vs {want}");
    }
}

#[test]
fn packet_displays_match_exact_packet_expectation() {
    // a sticker misses one packet with probability 1 - P/B, independently per packet
    for cfg in [AlbumConfig::wm2014(), AlbumConfig::amici()] {
        let (b, p, m) = (
            f64::from(cfg.total_stickers),
            f64::from(cfg.packet_size),
            f64::from(cfg.display_packets),
        );
        let want = p * m - b * (1.0 - (1.0 - p / b).powf(m));
        let dups: Vec<f64> = map_replicates(100_000, 105, |rng| {
            classical_display_duplicates(&cfg, rng).unwrap() as f64
        });
        let s = summarize(&dups).unwrap();
        let se = s.std / (s.count as f64).sqrt();
        assert!((s.mean - want).abs() < 3.0 * se, "{} vs {want}", s.mean);
    }
}

#[test]
fn single_card_interval_matches_occupancy_law() {
    for (total, display) in [(640, 500), (576, 300)] {
        let pmf = occupancy_duplicates_pmf(total, display);
        let (lo, hi) = (pmf_quantile(&pmf, 0.025), pmf_quantile(&pmf, 0.975));
        let cfg = single_card(total, display);
        let iv = monte_carlo_interval("dups", 100_000, 0.95, 106, |rng| {
            classical_display_duplicates(&cfg, rng).unwrap() as f64
        })
        .unwrap();
        assert!((iv.lower - lo).abs() <= 1.0, "{iv} vs [{lo}, {hi}]");
        assert!((iv.upper - hi).abs() <= 1.0, "{iv} vs [{lo}, {hi}]");
    }
}

#[test]
fn two_display_overlap_is_hypergeometric() {
    let law = Hypergeometric::new(576, 300, 300).unwrap();
    let pmf: Vec<f64> = (0..=300).map(|k| law.pmf(k)).collect();
    let (lo, hi) = (pmf_quantile(&pmf, 0.025), pmf_quantile(&pmf, 0.975));
    assert_eq!((lo, hi), (145.0, 168.0));
    let cfg = AlbumConfig::amici();
    let iv = monte_carlo_interval("pair", 100_000, 0.95, 107, |rng| {
        two_display_duplicates(&cfg, rng) as f64
    })
    .unwrap();
    assert!((iv.lower - lo).abs() <= 1.0 && (iv.upper - hi).abs() <= 1.0, "{iv}");
}

#[test]
fn interval_coverage_is_nominal() {
    let normal = |rng: &mut stickersim::SimRng| -> f64 { StandardNormal.sample(rng) };
    let iv = monte_carlo_interval("z", 100_000, 0.95, 108, normal).unwrap();
    let mut rng = seeded(109);
    let trials = 10_000;
    let inside = (0..trials).filter(|_| iv.contains(normal(&mut rng))).count();
    let coverage = inside as f64 / trials as f64;
    assert!((coverage - 0.95).abs() <= 0.02, "{coverage}");
}

#[test]
fn skewness_of_exponential_is_two() {
    let mut rng = seeded(110);
    let exp = Exp::new(1.0).unwrap();
    let v: Vec<f64> = (0..1_000_000).map(|_| exp.sample(&mut rng)).collect();
    let g = sample_skewness(&v).unwrap();
    assert!((g - 2.0).abs() < 0.1, "{g}");
}

#[test]
fn runs_in_random_permutations_stay_short() {
    // random order of 1..=300: the 95th percentile of the longest ascending run
    let cfg = AlbumConfig::new(300, 1, 1, 0, 300).unwrap();
    let mut runs: Vec<f64> = map_replicates(100_000, 111, |rng| {
        random_display_longest_run(&cfg, RunDirection::Ascending, rng) as f64
    });
    runs.sort_by(f64::total_cmp);
    let p95 = empirical_quantile(&runs, 0.95);
    assert!(p95 <= 12.0, "{p95}");
    assert!(p95 >= 2.0, "{p95}");
    println!("95th percentile of longest ascending run, shuffled 1..=300: {p95}");
}

/// Exact distribution of the LocalSwap sequence on q = 6, length 6, window 5
/// by enumerating every (distance, left position) choice of each swap.
fn exact_swap_law(swaps: usize) -> HashMap<Vec<u32>, f64> {
    let len = 6usize;
    let window = 5usize;
    let mut moves = Vec::new();
    for d in 1..=window {
        for a in 0..len - d {
            moves.push((a, a + d, 1.0 / window as f64 / (len - d) as f64));
        }
    }
    let mut law = HashMap::from([((1..=6).collect::<Vec<u32>>(), 1.0)]);
    for _ in 0..swaps {
        let mut next: HashMap<Vec<u32>, f64> = HashMap::new();
        for (perm, p) in &law {
            for &(a, b, w) in &moves {
                let mut q = perm.clone();
                q.swap(a, b);
                *next.entry(q).or_default() += p * w;
            }
        }
        law = next;
    }
    law
}

fn tv_to_uniform(law: &HashMap<Vec<u32>, f64>) -> f64 {
    let u = 1.0 / 720.0;
    let listed: f64 = law.values().map(|p| (p - u).abs()).sum();
    let missing = (720 - law.len()) as f64 * u;
    (listed + missing) / 2.0
}

#[test]
fn local_swaps_approach_a_uniform_permutation() {
    let cfg = AlbumConfig::new(24, 1, 1, 0, 1).unwrap();
    let mut last_tv = f64::INFINITY;
    for swaps in 0..=2u64 {
        let exact = exact_swap_law(swaps as usize);
        let tv = tv_to_uniform(&exact);
        assert!(tv < last_tv, "tv {tv} at {swaps} swaps");
        last_tv = tv;

        let samples = 200_000u64;
        let mut seen: HashMap<Vec<u32>, f64> = HashMap::new();
        for seed in 0..samples {
            let seq = generate_sequence(
                &cfg,
                MixingVariant::LocalSwap {
                    swap_count: swaps,
                    window: 5,
                }
                .with_seed(seed),
                6,
            )
            .unwrap();
            *seen.entry(seq.into_vec()).or_default() += 1.0 / samples as f64;
        }
        let keys: BTreeSet<&Vec<u32>> = seen.keys().chain(exact.keys()).collect();
        let gap: f64 = keys
            .iter()
            .map(|k| (seen.get(*k).unwrap_or(&0.0) - exact.get(*k).unwrap_or(&0.0)).abs())
            .sum::<f64>()
            / 2.0;
        assert!(gap < 0.02, "empirical vs exact TV {gap} at {swaps} swaps");
    }
}

#[test]
fn toy_machine_emits_exactly_the_predicted_packets() {
    let toy = AlbumConfig::new(16, 2, 2, 0, 2).unwrap();
    // brute force: one sticker per row, any sheet, one shared column
    let mut predicted: BTreeSet<Vec<u32>> = BTreeSet::new();
    for column in 0..4 {
        for s0 in 1..=2 {
            for s1 in 1..=2 {
                let a = (s0 - 1) * 8 + column + 1;
                let b = (s1 - 1) * 8 + 4 + column + 1;
                predicted.insert(vec![a.min(b), a.max(b)]);
            }
        }
    }
    assert_eq!(predicted.len(), 16);
    let mut emitted: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut mates: HashMap<u32, BTreeSet<u32>> = HashMap::new();
    for o in Orientation::BOTH {
        for p in produce(&toy, MixingVariant::BlockShuffle.with_seed(112), 4000, o).unwrap() {
            let mut ids: Vec<u32> = p.stickers.iter().map(|s| s.get()).collect();
            ids.sort_unstable();
            for &x in &ids {
                mates.entry(x).or_default().extend(ids.iter().filter(|&&y| y != x));
            }
            emitted.insert(ids);
        }
    }
    assert_eq!(emitted, predicted);
    for x in 1..=16u32 {
        let want: BTreeSet<u32> = packet_mate_candidates(&toy, StickerId(x))
            .unwrap()
            .into_iter()
            .map(|s| s.get())
            .collect();
        assert_eq!(mates[&x], want, "sticker {x}");
    }
}

#[test]
fn iid_sheets_spread_over_all_sheets() {
    let cfg = AlbumConfig::wm2014();
    let seq = generate_sequence(&cfg, MixingVariant::UniformIid.with_seed(113), 320_000).unwrap();
    let mut freq = vec![0f64; 33];
    for s in &seq {
        freq[s as usize] += 1.0;
    }
    let expected = 10_000.0;
    let chi2: f64 = freq[1..].iter().map(|f| (f - expected).powi(2) / expected).sum();
    assert!(chi2 < ChiSquared::new(31.0).unwrap().inverse_cdf(0.999), "{chi2}");
}
