//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.
//!
//! `cargo test -p stickersim --test acceptance`

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use stickersim::classical::{
    classical_packet_count, completion_counts, expected_cards_to_target, expected_duplicates_in_display,
    fifimatic_packet_count, log10_prob_zero_duplicates, std_cards_to_target,
};
use stickersim::io::read_displays;
use stickersim::machine::{
    next_card_candidates, pack_displays, packet_mate_candidates, produce, produce_from_sequence, Orientation,
    PackingPolicy,
};
use stickersim::mixer::{generate_sequence, MixingVariant, QuadrotteSequence};
use stickersim::reference::{table1_matrix, TABLE1_DISPLAYS_CSV};
use stickersim::rng::{map_replicates, replicate_rng};
use stickersim::sampling::{classical_display_duplicates, machine_display_duplicates, two_display_duplicates};
use stickersim::stats::{
    monte_carlo_interval, pairwise_duplicate_matrix, sample_skewness, significance_count, summarize, Boundary,
};
use stickersim::{AlbumConfig, StickerId};

const SEED: u64 = 1;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn analytic_formulas() -> Outcome {
    let mean = expected_cards_to_target(300, 250).map_err(|e| e.to_string())?;
    let sd = std_cards_to_target(300, 250).map_err(|e| e.to_string())?;
    check(
        within(mean, 535.0, 1.0) && within(sd, 31.0, 1.0),
        format!("expected cards {mean:.2}, std {sd:.2}"),
    )
}

fn display_expectations() -> Outcome {
    let wm = expected_duplicates_in_display(640, 500);
    let amici = expected_duplicates_in_display(576, 300);
    check(
        within(wm, 153.0, 1.0) && within(amici, 66.0, 1.0),
        format!("WM {wm:.2}, Amici {amici:.2}"),
    )
}

fn monte_carlo_intervals() -> Outcome {
    let wm = AlbumConfig::wm2014();
    let amici = AlbumConfig::amici();
    let run = |name: &str, f: &(dyn Fn(&mut stickersim::SimRng) -> f64 + Sync)| {
        monte_carlo_interval(name, 100_000, 0.95, SEED, f).map_err(|e| e.to_string())
    };
    let a = run("WM display", &|rng| {
        classical_display_duplicates(&wm, rng).unwrap() as f64
    })?;
    let b = run("Amici display", &|rng| {
        classical_display_duplicates(&amici, rng).unwrap() as f64
    })?;
    let c = run("two Amici displays", &|rng| two_display_duplicates(&amici, rng) as f64)?;
    let ok = [(&a, 138.0, 168.0), (&b, 54.0, 78.0), (&c, 144.0, 168.0)]
        .iter()
        .all(|(iv, lo, hi)| within(iv.lower, *lo, 2.0) && within(iv.upper, *hi, 2.0));
    check(
        ok,
        format!(
            "[{}, {}] / [{}, {}] / [{}, {}]",
            a.lower, a.upper, b.lower, b.upper, c.lower, c.upper
        ),
    )
}

fn zero_duplicate_probability() -> Outcome {
    let amici = log10_prob_zero_duplicates(576, 6, 50);
    let small = log10_prob_zero_duplicates(4, 2, 2);
    // brute force: all ordered pairs of 2-subsets of 4 stickers
    let subsets: Vec<[u32; 2]> = (0..4).flat_map(|a| (a + 1..4).map(move |b| [a, b])).collect();
    let disjoint = subsets
        .iter()
        .flat_map(|x| subsets.iter().map(move |y| (x, y)))
        .filter(|(x, y)| x.iter().all(|s| !y.contains(s)))
        .count();
    let brute = (disjoint as f64 / (subsets.len() * subsets.len()) as f64).log10();
    check(
        (-43.5..=-40.5).contains(&amici)
            && (small - brute).abs() < 1e-12
            && (brute - (1.0f64 / 6.0).log10()).abs() < 1e-12,
        format!("log10 P(Amici) {amici:.3}, toy {small:.15} vs {brute:.15}"),
    )
}

fn completion_skewness() -> Outcome {
    let cfg = AlbumConfig::bundesliga2014();
    let cards: Vec<f64> = map_replicates(1_000_000, SEED, |rng| {
        completion_counts(&cfg, 250, rng).unwrap().0 as f64
    });
    let g = sample_skewness(&cards).map_err(|e| e.to_string())?;
    let s = summarize(&cards).ok_or("no runs")?;
    check(
        within(g, 0.21, 0.05) && s.min >= 400.0,
        format!("skewness {g:.4}, mean {:.2}, min {}, max {}", s.mean, s.min, s.max),
    )
}

/// Sheet sequences meant to stress the stacking: uniform, constant, and
/// patterns that repeat sheets at the stack depth or alternate two sheets.
fn fuzzed_sequence(cfg: &AlbumConfig, kind: usize, rng: &mut stickersim::SimRng) -> Vec<u32> {
    let q = cfg.sheet_count();
    let n = cfg.quadrotte_rows as usize;
    let len = rng.random_range(n..=8 * n + 40);
    let a = rng.random_range(1..=q);
    let b = rng.random_range(1..=q);
    match kind % 5 {
        0 => (0..len).map(|_| rng.random_range(1..=q)).collect(),
        1 => vec![a; len],
        2 => (0..len).map(|i| if i % 2 == 0 { a } else { b }).collect(),
        3 => {
            let period = rng.random_range(1..=n + 1);
            let motif: Vec<u32> = (0..period).map(|_| rng.random_range(1..=q)).collect();
            (0..len).map(|i| motif[i % period]).collect()
        }
        _ => {
            let run = rng.random_range(1..=2 * n);
            (0..len).map(|i| if (i / run) % 2 == 0 { a } else { b }).collect()
        }
    }
}

fn duplicate_free_packets() -> Outcome {
    let presets = [
        AlbumConfig::wm2014(),
        AlbumConfig::bundesliga2014(),
        AlbumConfig::amici(),
    ];
    let mut packets = 0usize;
    let mut bad = 0usize;
    for (p, cfg) in presets.iter().enumerate() {
        for i in 0..10_000u64 {
            let mut rng = replicate_rng(SEED + p as u64, i);
            let sheets = fuzzed_sequence(cfg, i as usize, &mut rng);
            let seq = QuadrotteSequence::from_sheets(cfg, sheets).map_err(|e| e.to_string())?;
            for o in Orientation::BOTH {
                for pk in produce_from_sequence(cfg, &seq, o).map_err(|e| e.to_string())? {
                    packets += 1;
                    bad += usize::from(!pk.is_duplicate_free());
                }
            }
        }
    }
    check(bad == 0, format!("{bad} of {packets} packets hold a duplicate"))
}

fn packet_counts() -> Outcome {
    let toy = AlbumConfig::new(16, 2, 2, 0, 2).map_err(|e| e.to_string())?;
    let mut distinct: BTreeSet<Vec<u32>> = BTreeSet::new();
    for o in Orientation::BOTH {
        for p in produce(&toy, MixingVariant::BlockShuffle.with_seed(SEED), 10_000, o).map_err(|e| e.to_string())? {
            let mut ids: Vec<u32> = p.stickers.iter().map(|s| s.get()).collect();
            ids.sort_unstable();
            distinct.insert(ids);
        }
    }
    let toy_count = fifimatic_packet_count(16, 2).map_err(|e| e.to_string())?;
    let toy_all = classical_packet_count(16, 2);
    let wm_machine = fifimatic_packet_count(640, 5).map_err(|e| e.to_string())?;
    let wm_all = classical_packet_count(640, 5);
    let ok = toy_count == 16u32.into()
        && distinct.len() == 16
        && toy_all == 120u32.into()
        && wm_machine == 134_217_728u64.into()
        && wm_all == 880_880_128_128u64.into();
    check(
        ok,
        format!(
            "toy {} distinct of {toy_count} predicted, {toy_all} possible; WM {wm_machine} vs {wm_all}",
            distinct.len()
        ),
    )
}

fn cyclic_zero_duplicates() -> Outcome {
    let mut worst = Vec::new();
    for cfg in [AlbumConfig::amici(), AlbumConfig::wm2014()] {
        let dups = machine_display_duplicates(
            &cfg,
            MixingVariant::Cyclic.with_seed(SEED),
            1_000,
            Orientation::default(),
            PackingPolicy::RoundRobin,
        )
        .map_err(|e| e.to_string())?;
        if dups.len() != 1_000 {
            return Err(format!("only {} displays", dups.len()));
        }
        worst.push(dups.into_iter().max().unwrap_or(0));
    }
    check(
        worst.iter().all(|&w| w == 0),
        format!("max duplicates Amici {}, WM {}", worst[0], worst[1]),
    )
}

fn mixing_sweep() -> Outcome {
    let cfg = AlbumConfig::amici();
    let displays = 10_000usize;
    let packets = displays * cfg.display_packets as usize;
    let ticks = (packets / 4 + cfg.quadrotte_rows as usize - 1) as u64;
    let window = 4 * u64::from(cfg.sheet_count());
    let mut means = Vec::new();
    for swaps in [0, ticks / 8, ticks / 2, 2 * ticks, 32 * ticks] {
        let strategy = MixingVariant::LocalSwap {
            swap_count: swaps,
            window,
        }
        .with_seed(SEED);
        let seq = generate_sequence(&cfg, strategy, ticks as usize).map_err(|e| e.to_string())?;
        let out = produce_from_sequence(&cfg, &seq, Orientation::default()).map_err(|e| e.to_string())?;
        let boxes = pack_displays(out, &cfg, PackingPolicy::RoundRobin).map_err(|e| e.to_string())?;
        let dups: Vec<f64> = boxes
            .iter()
            .take(displays)
            .map(|d| stickersim::stats::duplicate_count_in(&d.sticker_vec(), cfg.total_stickers) as f64)
            .collect();
        means.push(summarize(&dups).ok_or("no displays")?.mean);
    }
    let monotone = means.windows(2).all(|w| w[1] >= w[0]);
    let last = *means.last().unwrap();
    check(
        monotone && means[0] == 0.0 && within(last, 66.0, 3.0),
        format!(
            "means {}",
            means.iter().map(|m| format!("{m:.2}")).collect::<Vec<_>>().join(" -> ")
        ),
    )
}

fn table1_pipeline() -> Outcome {
    let cfg = AlbumConfig::amici();
    let displays = read_displays(TABLE1_DISPLAYS_CSV.as_bytes(), &cfg).map_err(|e| e.to_string())?;
    let ingested = pairwise_duplicate_matrix(&displays).map_err(|e| e.to_string())?;
    let published = table1_matrix().map_err(|e| e.to_string())?;
    let mismatched: Vec<String> = published
        .pairs()
        .filter(|&(a, b, v)| ingested.get(a, b) != v)
        .map(|(a, b, v)| {
            format!(
                "{}/{}: {} vs {v}",
                published.labels[a],
                published.labels[b],
                ingested.get(a, b)
            )
        })
        .collect();
    let interval = monte_carlo_interval("two Amici displays", 100_000, 0.95, SEED, |rng| {
        two_display_duplicates(&cfg, rng) as f64
    })
    .map_err(|e| e.to_string())?;
    let count = significance_count(&ingested, &interval, Boundary::Closed);
    let min = ingested.min_pair().unwrap_or(0);
    let max = ingested.max_pair().unwrap_or(0);
    let ok = displays.len() == 10
        && ingested.pairs().count() == 45
        && mismatched.is_empty()
        && min == 24
        && max == 229
        && (interval.lower, interval.upper) == (144.0, 168.0)
        && count == 26;
    check(
        ok,
        format!(
            "{} displays, min {min}, max {max}, interval [{}, {}], {count} significant; {} cells differ{}",
            displays.len(),
            interval.lower,
            interval.upper,
            mismatched.len(),
            if mismatched.is_empty() {
                String::new()
            } else {
                format!(" ({})", mismatched.join(", "))
            }
        ),
    )
}

fn candidate_counts() -> Outcome {
    let wm = AlbumConfig::wm2014();
    let amici = AlbumConfig::amici();
    let toy = AlbumConfig::new(16, 2, 2, 0, 2).map_err(|e| e.to_string())?;
    let mut details = Vec::new();
    let mut ok = true;
    for cfg in [&wm, &amici, &toy] {
        let q = cfg.sheet_count() as usize;
        let n = cfg.quadrotte_rows as usize;
        for x in 1..=cfg.total_stickers {
            for o in Orientation::BOTH {
                ok &= next_card_candidates(cfg, StickerId(x), o)
                    .map_err(|e| e.to_string())?
                    .len()
                    == q;
            }
            ok &= packet_mate_candidates(cfg, StickerId(x))
                .map_err(|e| e.to_string())?
                .len()
                == q * (n - 1);
        }
        details.push(format!("B={}: next {q}, mates {}", cfg.total_stickers, q * (n - 1)));
    }
    // every packet the toy machine can emit, over all sheet pairs and both orientations
    let mut mates: Vec<BTreeSet<StickerId>> = vec![BTreeSet::new(); 17];
    for o in Orientation::BOTH {
        for sheets in [[1, 1], [1, 2], [2, 1], [2, 2]] {
            let seq = QuadrotteSequence::from_sheets(&toy, sheets.to_vec()).map_err(|e| e.to_string())?;
            for p in produce_from_sequence(&toy, &seq, o).map_err(|e| e.to_string())? {
                for &x in &p.stickers {
                    mates[x.get() as usize].extend(p.stickers.iter().filter(|&&y| y != x));
                }
            }
        }
    }
    for x in 1..=16u32 {
        ok &= mates[x as usize] == packet_mate_candidates(&toy, StickerId(x)).map_err(|e| e.to_string())?;
    }
    details.push("toy co-occurrence matches".into());
    check(ok, details.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("analytic collection formulas", analytic_formulas),
        ("display duplicate expectations", display_expectations),
        ("Monte Carlo 95% intervals", monte_carlo_intervals),
        ("zero-duplicate probability", zero_duplicate_probability),
        ("completion-count skewness", completion_skewness),
        ("machine packets never repeat a sticker", duplicate_free_packets),
        ("packet-count oracle", packet_counts),
        ("cyclic mixing gives duplicate-free displays", cyclic_zero_duplicates),
        ("local-swap mixing sweep", mixing_sweep),
        ("pairwise display matrix pipeline", table1_pipeline),
        ("conditional candidate counts", candidate_counts),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(d) => println!("PASS {:>2} {name}: {d} ({secs:.1}s)", i + 1),
            Err(d) => {
                println!("FAIL {:>2} {name}: {d} ({secs:.1}s)", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
