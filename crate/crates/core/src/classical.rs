//! The classical collector model: packets of distinct stickers drawn
//! independently and uniformly, and the closed-form quantities it predicts.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::album::{AlbumConfig, Packet, Provenance, StickerId};
use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Draws `size` distinct stickers out of `1..=total`, each subset equally
/// likely, in random order.
pub fn draw_packet(total: u32, size: u32, rng: &mut SimRng) -> Result<Vec<StickerId>> {
    let mut out = Vec::with_capacity(size as usize);
    fill_packet(total, size, rng, &mut out)?;
    Ok(out)
}

/// Sequential draws without replacement: small packets by rejection,
/// large ones by a partial shuffle. Either way every ordered tuple of
/// distinct stickers is equally likely.
fn fill_packet(total: u32, size: u32, rng: &mut SimRng, out: &mut Vec<StickerId>) -> Result<()> {
    if size > total {
        return Err(Error::invalid(format!(
            "packet of {size} cannot be drawn from {total} distinct stickers"
        )));
    }
    out.clear();
    if u64::from(size) * 2 <= u64::from(total) {
        while out.len() < size as usize {
            let s = StickerId(rng.random_range(1..=total));
            if !out.contains(&s) {
                out.push(s);
            }
        }
    } else {
        let mut all: Vec<StickerId> = (1..=total).map(StickerId).collect();
        let (picked, _) = all.partial_shuffle(rng, size as usize);
        out.extend_from_slice(picked);
    }
    Ok(())
}

pub fn draw_packet_classical(cfg: &AlbumConfig, index: u64, rng: &mut SimRng) -> Result<Packet> {
    Ok(Packet {
        stickers: draw_packet(cfg.total_stickers, cfg.packet_size, rng)?,
        provenance: Provenance::Classical { index },
    })
}

/// A display of independently drawn classical packets.
pub fn draw_display_classical(cfg: &AlbumConfig, rng: &mut SimRng) -> Result<Vec<StickerId>> {
    let mut out = Vec::with_capacity(cfg.display_stickers() as usize);
    for _ in 0..cfg.display_packets {
        out.extend(draw_packet(cfg.total_stickers, cfg.packet_size, rng)?);
    }
    Ok(out)
}

/// One simulated collection, packet by packet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionRun {
    pub cards_bought: Vec<StickerId>,
    /// `(packets opened, distinct stickers so far)` after every packet.
    pub distinct_curve: Vec<(u32, u32)>,
    /// Cards bought when the target was reached. Packets are bought whole,
    /// so this is always a multiple of the packet size.
    pub completion_card_count: u32,
}

impl CollectionRun {
    pub fn packets_opened(&self) -> u32 {
        self.distinct_curve.last().map_or(0, |&(p, _)| p)
    }

    /// For every packet, how many of its cards were already in the album.
    pub fn duplicates_per_packet(&self, packet_size: usize) -> Vec<u32> {
        let mut seen = std::collections::HashSet::new();
        self.cards_bought
            .chunks(packet_size)
            .map(|p| p.iter().filter(|s| !seen.insert(**s)).count() as u32)
            .collect()
    }
}

/// Opens classical packets until `target` distinct stickers are collected.
pub fn simulate_until_target(cfg: &AlbumConfig, target: u32, rng: &mut SimRng) -> Result<CollectionRun> {
    check_target(cfg, target)?;
    let mut have = vec![false; cfg.total_stickers as usize];
    let mut distinct = 0u32;
    let mut cards_bought = Vec::new();
    let mut distinct_curve = Vec::new();
    let mut packet = Vec::with_capacity(cfg.packet_size as usize);
    let mut packets = 0u32;
    while distinct < target {
        fill_packet(cfg.total_stickers, cfg.packet_size, rng, &mut packet)?;
        for &s in &packet {
            cards_bought.push(s);
            if !std::mem::replace(&mut have[s.index()], true) {
                distinct += 1;
            }
        }
        packets += 1;
        distinct_curve.push((packets, distinct));
    }
    Ok(CollectionRun {
        completion_card_count: cards_bought.len() as u32,
        cards_bought,
        distinct_curve,
    })
}

/// Allocation-light version of [`simulate_until_target`] returning only
/// `(cards, packets)` at completion; consumes the generator identically.
pub fn completion_counts(cfg: &AlbumConfig, target: u32, rng: &mut SimRng) -> Result<(u32, u32)> {
    check_target(cfg, target)?;
    let mut have = vec![false; cfg.total_stickers as usize];
    let mut packet = Vec::with_capacity(cfg.packet_size as usize);
    let (mut distinct, mut packets) = (0u32, 0u32);
    while distinct < target {
        fill_packet(cfg.total_stickers, cfg.packet_size, rng, &mut packet)?;
        for s in &packet {
            if !std::mem::replace(&mut have[s.index()], true) {
                distinct += 1;
            }
        }
        packets += 1;
    }
    Ok((packets * cfg.packet_size, packets))
}

fn check_target(cfg: &AlbumConfig, target: u32) -> Result<()> {
    if target > cfg.total_stickers {
        Err(Error::invalid(format!(
            "target {target} exceeds the album size {}",
            cfg.total_stickers
        )))
    } else {
        Ok(())
    }
}

/// Expected single cards needed to see `target` distinct stickers out of
/// `total`: a sum of geometric waiting times, `sum_{k<target} B / (B - k)`.
pub fn expected_cards_to_target(total: u32, target: u32) -> Result<f64> {
    geometric_terms(total, target).map(|ps| ps.map(|p| 1.0 / p).sum())
}

/// Standard deviation of the same waiting time, `sqrt(sum (1 - p) / p^2)`.
pub fn std_cards_to_target(total: u32, target: u32) -> Result<f64> {
    geometric_terms(total, target).map(|ps| ps.map(|p| (1.0 - p) / (p * p)).sum::<f64>().sqrt())
}

fn geometric_terms(total: u32, target: u32) -> Result<impl Iterator<Item = f64>> {
    if target > total {
        return Err(Error::invalid(format!("target {target} exceeds {total} stickers")));
    }
    let b = f64::from(total);
    Ok((0..target).map(move |k| (b - f64::from(k)) / b))
}

/// Expected excess copies among `display_stickers` independent uniform
/// draws: `D - B (1 - (1 - 1/B)^D)`.
pub fn expected_duplicates_in_display(total: u32, display_stickers: u32) -> f64 {
    let b = f64::from(total);
    let d = f64::from(display_stickers);
    let distinct = b * -(d * (-1.0 / b).ln_1p()).exp_m1();
    d - distinct
}

/// `log10` of the chance that `packets` independent classical packets of
/// `packet_size` hold no sticker twice. `-inf` when they cannot fit.
pub fn log10_prob_zero_duplicates(total: u32, packet_size: u32, packets: u32) -> f64 {
    if u64::from(packet_size) * u64::from(packets) > u64::from(total) {
        return f64::NEG_INFINITY;
    }
    let all = ln_binomial(total, packet_size);
    let ln: f64 = (0..packets)
        .map(|j| ln_binomial(total - j * packet_size, packet_size) - all)
        .sum();
    ln / std::f64::consts::LN_10
}

/// `log10` of the chance that `draws` independent single cards are all
/// different (the birthday bound, ignoring packets).
pub fn log10_prob_zero_duplicates_unpacketed(total: u32, draws: u32) -> f64 {
    if draws > total {
        return f64::NEG_INFINITY;
    }
    let b = f64::from(total);
    (0..draws).map(|i| (1.0 - f64::from(i) / b).log10()).sum()
}

pub(crate) fn ln_binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (1..=k).map(|i| (f64::from(n - k + i) / f64::from(i)).ln()).sum()
}

/// Exact `C(total, size)`: the number of different packets when stickers
/// are mixed freely.
pub fn classical_packet_count(total: u32, size: u32) -> BigUint {
    if size > total {
        return BigUint::ZERO;
    }
    let size = size.min(total - size);
    let mut acc = BigUint::from(1u32);
    for i in 0..size {
        // exact at every step: acc = C(total - size + i + 1, i + 1)
        acc *= total - size + i + 1;
        acc /= i + 1;
    }
    acc
}

/// Exact `4 q^n`: the number of different packets the machine can emit.
pub fn fifimatic_packet_count(total: u32, rows: u32) -> Result<BigUint> {
    if rows == 0 || !total.is_multiple_of(4 * rows) {
        return Err(Error::invalid(format!(
            "{total} stickers do not fill whole 4 x {rows} sheets"
        )));
    }
    let q = BigUint::from(total / (4 * rows));
    Ok(q.pow(rows) * 4u32)
}
