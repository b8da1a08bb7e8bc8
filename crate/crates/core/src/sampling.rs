//! Per-display statistics under the random models, ready to hand to
//! [`monte_carlo_interval`](crate::stats::monte_carlo_interval).

use rand::seq::index;
use rand::seq::SliceRandom;

use crate::album::{AlbumConfig, StickerId};
use crate::classical::draw_display_classical;
use crate::error::Result;
use crate::machine::{pack_displays, produce, Orientation, PackingPolicy};
use crate::mixer::MixingStrategy;
use crate::rng::SimRng;
use crate::stats::{duplicate_count_in, longest_consecutive_run, RunDirection};

/// Duplicates in one display of independent classical packets.
pub fn classical_display_duplicates(cfg: &AlbumConfig, rng: &mut SimRng) -> Result<u64> {
    let stickers = draw_display_classical(cfg, rng)?;
    Ok(duplicate_count_in(&stickers, cfg.total_stickers))
}

/// `size` distinct stickers, uniformly among all such sets, in random order.
pub fn duplicate_free_display(total: u32, size: u32, rng: &mut SimRng) -> Vec<StickerId> {
    let size = size.min(total) as usize;
    let mut out: Vec<StickerId> = index::sample(rng, total as usize, size)
        .into_iter()
        .map(|i| StickerId(i as u32 + 1))
        .collect();
    out.shuffle(rng);
    out
}

/// Duplicates across two displays that are each duplicate-free but
/// otherwise random, i.e. the size of their overlap.
pub fn two_display_duplicates(cfg: &AlbumConfig, rng: &mut SimRng) -> u64 {
    let size = cfg.display_stickers();
    let mut both = duplicate_free_display(cfg.total_stickers, size, rng);
    both.extend(duplicate_free_display(cfg.total_stickers, size, rng));
    duplicate_count_in(&both, cfg.total_stickers)
}

/// Longest ascending (or either-direction) run in a random duplicate-free display.
pub fn random_display_longest_run(cfg: &AlbumConfig, direction: RunDirection, rng: &mut SimRng) -> usize {
    let display = duplicate_free_display(cfg.total_stickers, cfg.display_stickers(), rng);
    longest_consecutive_run(&display, direction)
}

/// Duplicates in each of `displays` consecutive machine-packed displays.
pub fn machine_display_duplicates(
    cfg: &AlbumConfig,
    strategy: MixingStrategy,
    displays: usize,
    orientation: Orientation,
    policy: PackingPolicy,
) -> Result<Vec<u64>> {
    let per_display = cfg.display_packets as usize;
    // single-belt packing fills a display from one belt only
    let packets_needed = match policy {
        PackingPolicy::RoundRobin => displays * per_display,
        PackingPolicy::SingleBelt => displays.div_ceil(4) * per_display * 4,
    };
    let packets = produce(cfg, strategy, packets_needed, orientation)?;
    let boxes = pack_displays(packets, cfg, policy)?;
    Ok(boxes
        .iter()
        .take(displays)
        .map(|d| duplicate_count_in(&d.sticker_vec(), cfg.total_stickers))
        .collect())
}
