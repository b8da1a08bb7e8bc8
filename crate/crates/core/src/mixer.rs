//! Sheet sequences fed to the packing machine.
//!
//! A mixing strategy turns the stack of printed quadrotte sheets into the
//! order in which the machine consumes them. The family runs from no mixing
//! at all ([`MixingVariant::Cyclic`]) to independent uniform draws
//! ([`MixingVariant::UniformIid`]).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::album::AlbumConfig;
use crate::error::{Error, Result};
use crate::rng::{seeded, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixingVariant {
    /// `1, 2, ..., q, 1, 2, ...` forever.
    Cyclic,
    /// Each sheet drawn independently and uniformly from `1..=q`.
    UniformIid,
    /// A fresh uniform permutation of `1..=q` for every aligned block of `q` outputs.
    BlockShuffle,
    /// The cyclic sequence with `swap_count` random transpositions applied,
    /// each between positions at most `window` apart.
    LocalSwap { swap_count: u64, window: u64 },
    /// Sheets `1..=q` are cut into chunks of `block` consecutive indices and
    /// every chunk is fed alternately from its front and its back
    /// (`a, b, a+1, b-1, ...`); the whole cycle then repeats.
    TwoSidedFeed { block: u32 },
}

impl MixingVariant {
    pub fn with_seed(self, seed: u64) -> MixingStrategy {
        MixingStrategy { variant: self, seed }
    }
}

impl fmt::Display for MixingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixingVariant::Cyclic => f.write_str("cyclic"),
            MixingVariant::UniformIid => f.write_str("iid"),
            MixingVariant::BlockShuffle => f.write_str("block"),
            MixingVariant::LocalSwap { swap_count, window } => {
                write!(f, "swap:{swap_count}:{window}")
            }
            MixingVariant::TwoSidedFeed { block } => write!(f, "twosided:{block}"),
        }
    }
}

impl FromStr for MixingVariant {
    type Err = Error;

    /// Parses `cyclic`, `iid`, `block`, `swap:COUNT:WINDOW` or `twosided:BLOCK`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default().to_ascii_lowercase();
        let args: Vec<&str> = parts.collect();
        let num = |text: &str| {
            text.parse::<u64>()
                .map_err(|_| Error::invalid(format!("bad number {text:?} in mixing strategy {s:?}")))
        };
        let variant = match (head.as_str(), args.as_slice()) {
            ("cyclic", []) => MixingVariant::Cyclic,
            ("iid", []) => MixingVariant::UniformIid,
            ("block", []) => MixingVariant::BlockShuffle,
            ("swap", [count, window]) => MixingVariant::LocalSwap {
                swap_count: num(count)?,
                window: num(window)?,
            },
            ("twosided", [block]) => MixingVariant::TwoSidedFeed {
                block: u32::try_from(num(block)?).map_err(|_| Error::invalid("twosided block too large"))?,
            },
            _ => {
                return Err(Error::invalid(format!(
                    "unknown mixing strategy {s:?} (expected cyclic, iid, block, swap:COUNT:WINDOW or twosided:BLOCK)"
                )))
            }
        };
        Ok(variant)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixingStrategy {
    pub variant: MixingVariant,
    pub seed: u64,
}

/// Sheet indices in `1..=q`, in feeding order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrotteSequence {
    pub strategy: MixingStrategy,
    sheets: Vec<u32>,
}

impl QuadrotteSequence {
    /// Wraps an explicit sheet list, e.g. for adversarial inputs.
    pub fn from_sheets(cfg: &AlbumConfig, sheets: Vec<u32>) -> Result<Self> {
        if sheets.is_empty() {
            return Err(Error::invalid("sheet sequence must not be empty"));
        }
        for &s in &sheets {
            cfg.check_sheet(s)?;
        }
        Ok(Self {
            strategy: MixingVariant::Cyclic.with_seed(0),
            sheets,
        })
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.sheets
    }

    pub fn len(&self) -> usize {
        self.sheets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sheets.is_empty()
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, u32>> {
        self.sheets.iter().copied()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.sheets
    }
}

impl<'a> IntoIterator for &'a QuadrotteSequence {
    type Item = u32;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, u32>>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

pub fn generate_sequence(cfg: &AlbumConfig, strategy: MixingStrategy, length: usize) -> Result<QuadrotteSequence> {
    if length == 0 {
        return Err(Error::invalid("sequence length must be at least 1"));
    }
    let q = cfg.sheet_count();
    let mut rng = seeded(strategy.seed);
    let sheets = match strategy.variant {
        MixingVariant::Cyclic => cyclic(q, length),
        MixingVariant::UniformIid => (0..length).map(|_| rng.random_range(1..=q)).collect(),
        MixingVariant::BlockShuffle => block_shuffle(q, length, &mut rng),
        MixingVariant::LocalSwap { swap_count, window } => {
            if window == 0 {
                return Err(Error::invalid("swap window must be at least 1"));
            }
            if window >= length as u64 {
                return Err(Error::invalid(format!(
                    "swap window {window} must be below the sequence length {length}"
                )));
            }
            let mut seq = cyclic(q, length);
            local_swaps(&mut seq, swap_count, window as usize, &mut rng);
            seq
        }
        MixingVariant::TwoSidedFeed { block } => {
            if block == 0 {
                return Err(Error::invalid("two-sided feed block must be at least 1"));
            }
            let cycle = two_sided_cycle(q, block);
            cycle.iter().copied().cycle().take(length).collect()
        }
    };
    Ok(QuadrotteSequence { strategy, sheets })
}

fn cyclic(q: u32, length: usize) -> Vec<u32> {
    (1..=q).cycle().take(length).collect()
}

fn block_shuffle(q: u32, length: usize, rng: &mut SimRng) -> Vec<u32> {
    let mut out = Vec::with_capacity(length);
    let mut block: Vec<u32> = (1..=q).collect();
    while out.len() < length {
        block.shuffle(rng);
        let take = (length - out.len()).min(block.len());
        out.extend_from_slice(&block[..take]);
    }
    out
}

/// Each swap draws a distance `d` uniformly from `1..=window`, then a left
/// position uniformly from `0..len-d`, and exchanges it with the one `d` later.
fn local_swaps(seq: &mut [u32], swap_count: u64, window: usize, rng: &mut SimRng) {
    let len = seq.len();
    for _ in 0..swap_count {
        let d = rng.random_range(1..=window);
        let a = rng.random_range(0..len - d);
        seq.swap(a, a + d);
    }
}

fn two_sided_cycle(q: u32, block: u32) -> Vec<u32> {
    let all: Vec<u32> = (1..=q).collect();
    let mut out = Vec::with_capacity(q as usize);
    for chunk in all.chunks(block as usize) {
        let (mut front, mut back) = (0usize, chunk.len());
        let mut from_front = true;
        while front < back {
            if from_front {
                out.push(chunk[front]);
                front += 1;
            } else {
                back -= 1;
                out.push(chunk[back]);
            }
            from_front = !from_front;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(q: u32) -> AlbumConfig {
        // q sheets of 4x1 stickers
        AlbumConfig::new(4 * q, 1, 1, 0, 1).unwrap()
    }

    #[test]
    fn cyclic_amici() {
        let cfg = AlbumConfig::amici();
        let seq = generate_sequence(&cfg, MixingVariant::Cyclic.with_seed(0), 48).unwrap();
        let expected: Vec<u32> = (1..=24).chain(1..=24).collect();
        assert_eq!(seq.as_slice(), expected.as_slice());
    }

    #[test]
    fn zero_swaps_is_cyclic() {
        let cfg = AlbumConfig::wm2014();
        for len in [2, 31, 100] {
            let a = generate_sequence(
                &cfg,
                MixingVariant::LocalSwap {
                    swap_count: 0,
                    window: 1,
                }
                .with_seed(9),
                len,
            )
            .unwrap();
            let b = generate_sequence(&cfg, MixingVariant::Cyclic.with_seed(1), len).unwrap();
            assert_eq!(a.as_slice(), b.as_slice());
        }
    }

    #[test]
    fn two_sided_hand_unrolled() {
        // front=1, back=4, front=2, back=3
        let seq = generate_sequence(&toy(4), MixingVariant::TwoSidedFeed { block: 4 }.with_seed(0), 4).unwrap();
        assert_eq!(seq.as_slice(), &[1, 4, 2, 3]);
        let seq = generate_sequence(&toy(5), MixingVariant::TwoSidedFeed { block: 5 }.with_seed(0), 7).unwrap();
        assert_eq!(seq.as_slice(), &[1, 5, 2, 4, 3, 1, 5]);
        let seq = generate_sequence(&toy(6), MixingVariant::TwoSidedFeed { block: 4 }.with_seed(0), 6).unwrap();
        assert_eq!(seq.as_slice(), &[1, 4, 2, 3, 5, 6]);
    }

    #[test]
    fn errors() {
        let cfg = AlbumConfig::wm2014();
        assert!(generate_sequence(&cfg, MixingVariant::Cyclic.with_seed(0), 0).is_err());
        let swap = |w| MixingVariant::LocalSwap {
            swap_count: 3,
            window: w,
        };
        assert!(generate_sequence(&cfg, swap(10).with_seed(0), 10).is_err());
        assert!(generate_sequence(&cfg, swap(0).with_seed(0), 10).is_err());
        assert!(generate_sequence(&cfg, swap(9).with_seed(0), 10).is_ok());
        assert!(generate_sequence(&cfg, MixingVariant::TwoSidedFeed { block: 0 }.with_seed(0), 10).is_err());
    }

    #[test]
    fn determinism_and_range() {
        let cfg = AlbumConfig::wm2014();
        for variant in [
            MixingVariant::UniformIid,
            MixingVariant::BlockShuffle,
            MixingVariant::LocalSwap {
                swap_count: 500,
                window: 40,
            },
        ] {
            let a = generate_sequence(&cfg, variant.with_seed(42), 1000).unwrap();
            let b = generate_sequence(&cfg, variant.with_seed(42), 1000).unwrap();
            let c = generate_sequence(&cfg, variant.with_seed(43), 1000).unwrap();
            assert_eq!(a, b);
            assert_ne!(a.as_slice(), c.as_slice());
            assert!(a.iter().all(|s| (1..=32).contains(&s)));
        }
    }

    #[test]
    fn block_shuffle_is_a_permutation_per_block() {
        let cfg = AlbumConfig::amici();
        let seq = generate_sequence(&cfg, MixingVariant::BlockShuffle.with_seed(5), 24 * 10).unwrap();
        for block in seq.as_slice().chunks(24) {
            let mut b = block.to_vec();
            b.sort_unstable();
            assert_eq!(b, (1..=24).collect::<Vec<_>>());
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in ["cyclic", "iid", "block", "swap:10:3", "twosided:8"] {
            let v: MixingVariant = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("swap:1".parse::<MixingVariant>().is_err());
        assert!("swap:x:1".parse::<MixingVariant>().is_err());
        assert!("shuffle".parse::<MixingVariant>().is_err());
    }
}
