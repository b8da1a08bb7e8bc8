//! The 4 x n magazine / belt packing machine.
//!
//! Every tick the machine drops one whole sheet: magazine `(row, column)`
//! releases its card onto the stack currently underneath it on belt
//! `column`, then the belts advance one position. A stack therefore passes
//! under all `n` magazines of its column, collecting one card from each row,
//! and leaves the machine as a sealed packet. Since a stack never meets the
//! same row twice it can never hold the same sticker twice, whatever the
//! sheet order.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::album::{AlbumConfig, Display, Packet, Provenance, StickerId, QUADROTTE_COLUMNS};
use crate::error::{Error, Result};
use crate::mixer::{generate_sequence, MixingStrategy, QuadrotteSequence};

/// Order in which a stack meets the magazine rows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// A stack born at tick `t` collects rows `n-1, n-2, ..., 0` at ticks `t..t+n`.
    #[default]
    RowDescending,
    /// A stack born at tick `t` collects rows `0, 1, ..., n-1`.
    RowAscending,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::RowDescending, Orientation::RowAscending];

    /// Row a stack of the given age (ticks since birth) picks up.
    #[inline]
    fn row_at_age(self, age: u32, rows: u32) -> u32 {
        match self {
            Orientation::RowDescending => rows - 1 - age,
            Orientation::RowAscending => age,
        }
    }

    /// Row of the card stacked right after a card from `row`, wrapping at the packet end.
    fn successor_row(self, row: u32, rows: u32) -> u32 {
        match self {
            Orientation::RowDescending => (row + rows - 1) % rows,
            Orientation::RowAscending => (row + 1) % rows,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::RowDescending => "descending",
            Orientation::RowAscending => "ascending",
        })
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "descending" | "desc" => Ok(Orientation::RowDescending),
            "ascending" | "asc" => Ok(Orientation::RowAscending),
            _ => Err(Error::invalid(format!(
                "unknown orientation {s:?} (expected descending or ascending)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
struct Stack {
    born: u64,
    cards: Vec<StickerId>,
}

/// Belt contents between ticks.
#[derive(Debug, Clone)]
pub struct MachineState {
    cfg: AlbumConfig,
    orientation: Orientation,
    belts: [VecDeque<Stack>; QUADROTTE_COLUMNS as usize],
    tick: u64,
}

impl MachineState {
    pub fn new(cfg: AlbumConfig, orientation: Orientation) -> Self {
        Self {
            cfg,
            orientation,
            belts: Default::default(),
            tick: 0,
        }
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Drops `sheet` onto the belts and advances them. Returns the packets
    /// completed by this tick in belt order: none during the first `n - 1`
    /// ticks, four afterwards.
    pub fn step(&mut self, sheet: u32) -> Result<Vec<Packet>> {
        self.cfg.check_sheet(sheet)?;
        let mut done = Vec::with_capacity(QUADROTTE_COLUMNS as usize);
        self.step_into(sheet, &mut done);
        Ok(done)
    }

    fn step_into(&mut self, sheet: u32, out: &mut Vec<Packet>) {
        let rows = self.cfg.quadrotte_rows;
        let tick = self.tick;
        for (column, belt) in self.belts.iter_mut().enumerate() {
            belt.push_back(Stack {
                born: tick,
                cards: Vec::with_capacity(rows as usize),
            });
            for stack in belt.iter_mut() {
                let age = (tick - stack.born) as u32;
                let row = self.orientation.row_at_age(age, rows);
                stack.cards.push(self.cfg.sticker_at(sheet, row, column as u32));
            }
            if let Some(stack) = belt.pop_front_if(|s| s.cards.len() == rows as usize) {
                out.push(Packet {
                    stickers: stack.cards,
                    provenance: Provenance::Machine {
                        belt: column as u8,
                        tick,
                    },
                });
            }
        }
        self.tick += 1;
    }
}

/// Runs a fresh machine over `sequence`. Stacks still incomplete at the end
/// are discarded, so `len - n + 1` ticks' worth of packets come out.
pub fn produce_from_sequence(
    cfg: &AlbumConfig,
    sequence: &QuadrotteSequence,
    orientation: Orientation,
) -> Result<Vec<Packet>> {
    let mut machine = MachineState::new(*cfg, orientation);
    let full_ticks = sequence.len().saturating_sub(cfg.quadrotte_rows as usize - 1);
    let mut out = Vec::with_capacity(full_ticks * QUADROTTE_COLUMNS as usize);
    for sheet in sequence {
        cfg.check_sheet(sheet)?;
        machine.step_into(sheet, &mut out);
    }
    Ok(out)
}

/// Mixes sheets with `strategy` and runs the machine until `packet_count`
/// packets exist. Packets are in `(tick, belt)` order.
pub fn produce(
    cfg: &AlbumConfig,
    strategy: MixingStrategy,
    packet_count: usize,
    orientation: Orientation,
) -> Result<Vec<Packet>> {
    if packet_count == 0 {
        return Err(Error::invalid("packet count must be at least 1"));
    }
    let belts = QUADROTTE_COLUMNS as usize;
    let ticks = packet_count.div_ceil(belts) + cfg.quadrotte_rows as usize - 1;
    let sequence = generate_sequence(cfg, strategy, ticks)?;
    let mut packets = produce_from_sequence(cfg, &sequence, orientation)?;
    packets.truncate(packet_count);
    Ok(packets)
}

/// How belt output is boxed into displays.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingPolicy {
    /// Packets in `(tick, belt)` order, cut into consecutive displays.
    #[default]
    RoundRobin,
    /// Each belt fills its own displays from consecutive packets.
    SingleBelt,
}

impl FromStr for PackingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "round-robin" | "roundrobin" => Ok(PackingPolicy::RoundRobin),
            "single-belt" | "belt" => Ok(PackingPolicy::SingleBelt),
            _ => Err(Error::invalid(format!(
                "unknown packing policy {s:?} (expected round-robin or single-belt)"
            ))),
        }
    }
}

impl fmt::Display for PackingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PackingPolicy::RoundRobin => "round-robin",
            PackingPolicy::SingleBelt => "single-belt",
        })
    }
}

/// Boxes packets into displays of `cfg.display_packets`. Trailing packets
/// that do not fill a display are left out.
pub fn pack_displays(packets: Vec<Packet>, cfg: &AlbumConfig, policy: PackingPolicy) -> Result<Vec<Display>> {
    let per_display = cfg.display_packets as usize;
    if packets.len() < per_display {
        return Err(Error::invalid(format!(
            "{} packets cannot fill a display of {per_display}",
            packets.len()
        )));
    }
    let displays = match policy {
        PackingPolicy::RoundRobin => {
            let mut keyed: Vec<(Option<(u64, u8)>, Packet)> =
                packets.into_iter().map(|p| (machine_key(&p), p)).collect();
            // stable: non-machine packets keep their input order
            keyed.sort_by_key(|(k, _)| *k);
            chunk_displays(keyed.into_iter().map(|(_, p)| p), per_display)
        }
        PackingPolicy::SingleBelt => {
            let mut per_belt: [Vec<Packet>; QUADROTTE_COLUMNS as usize] = Default::default();
            for p in packets {
                let Provenance::Machine { belt, .. } = p.provenance else {
                    return Err(Error::invalid("single-belt packing needs machine-produced packets"));
                };
                per_belt[belt as usize].push(p);
            }
            per_belt
                .into_iter()
                .flat_map(|mut belt| {
                    belt.sort_by_key(machine_key);
                    chunk_displays(belt.into_iter(), per_display)
                })
                .collect()
        }
    };
    if displays.is_empty() {
        return Err(Error::invalid(format!(
            "no belt produced the {per_display} packets a display needs"
        )));
    }
    Ok(displays)
}

fn machine_key(p: &Packet) -> Option<(u64, u8)> {
    match p.provenance {
        Provenance::Machine { belt, tick } => Some((tick, belt)),
        _ => None,
    }
}

fn chunk_displays(packets: impl Iterator<Item = Packet>, per_display: usize) -> Vec<Display> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(per_display);
    for p in packets {
        current.push(p);
        if current.len() == per_display {
            out.push(Display::new(std::mem::replace(
                &mut current,
                Vec::with_capacity(per_display),
            )));
        }
    }
    out
}

/// Stickers that can land directly on top of `x` in a stack: the
/// successor row of `x`'s column on any sheet. `q` of them; empty for
/// single-row sheets where a packet holds one card.
pub fn next_card_candidates(cfg: &AlbumConfig, x: StickerId, orientation: Orientation) -> Result<BTreeSet<StickerId>> {
    let pos = cfg.sticker_to_position(x)?;
    let rows = cfg.quadrotte_rows;
    if rows == 1 {
        return Ok(BTreeSet::new());
    }
    let next_row = orientation.successor_row(pos.row, rows);
    Ok((1..=cfg.sheet_count())
        .map(|sheet| cfg.sticker_at(sheet, next_row, pos.column))
        .collect())
}

/// Every sticker that can share a packet with `x`: same column, other row,
/// any sheet. `q * (n - 1)` of them.
pub fn packet_mate_candidates(cfg: &AlbumConfig, x: StickerId) -> Result<BTreeSet<StickerId>> {
    let pos = cfg.sticker_to_position(x)?;
    let mut out = BTreeSet::new();
    for sheet in 1..=cfg.sheet_count() {
        for row in (0..cfg.quadrotte_rows).filter(|&r| r != pos.row) {
            out.insert(cfg.sticker_at(sheet, row, pos.column));
        }
    }
    Ok(out)
}
