//! Album vocabulary: series parameters, sticker ids, quadrotte coordinates,
//! packets and displays.
//!
//! Stickers are laid out row-major on their sheet:
//! `id - 1 = (sheet - 1) * 4n + row * 4 + column`, so consecutive album
//! numbers share a sheet and a row.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of columns on a quadrotte sheet, one per conveyor belt.
pub const QUADROTTE_COLUMNS: u32 = 4;

/// Parameters of a sticker series and its retail display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlbumConfig {
    /// Number of distinct stickers in the album (B).
    pub total_stickers: u32,
    /// Stickers per packet (P).
    pub packet_size: u32,
    /// Rows per quadrotte sheet (n); the machine stacks one card per row.
    pub quadrotte_rows: u32,
    /// Stickers that can be ordered directly from the publisher (K).
    #[serde(default)]
    pub buyback_limit: u32,
    /// Packets per display box.
    pub display_packets: u32,
}

impl AlbumConfig {
    pub fn new(
        total_stickers: u32,
        packet_size: u32,
        quadrotte_rows: u32,
        buyback_limit: u32,
        display_packets: u32,
    ) -> Result<Self> {
        let cfg = Self {
            total_stickers,
            packet_size,
            quadrotte_rows,
            buyback_limit,
            display_packets,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Panini FIFA World Cup 2014: 640 stickers, 5 per packet, 100-packet displays.
    pub const fn wm2014() -> Self {
        Self {
            total_stickers: 640,
            packet_size: 5,
            quadrotte_rows: 5,
            buyback_limit: 0,
            display_packets: 100,
        }
    }

    /// Topps Bundesliga 2014/15: 300 stickers, 50 purchasable directly.
    pub const fn bundesliga2014() -> Self {
        Self {
            total_stickers: 300,
            packet_size: 5,
            quadrotte_rows: 5,
            buyback_limit: 50,
            display_packets: 50,
        }
    }

    /// Panini Amici Cucciolotti animal album: 576 stickers, 6 per packet.
    pub const fn amici() -> Self {
        Self {
            total_stickers: 576,
            packet_size: 6,
            quadrotte_rows: 6,
            buyback_limit: 0,
            display_packets: 50,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "wm2014" => Ok(Self::wm2014()),
            "bundesliga2014" => Ok(Self::bundesliga2014()),
            "amici" => Ok(Self::amici()),
            other => Err(Error::Config(format!(
                "unknown preset {other:?} (expected one of: {})",
                PRESET_NAMES.join(", ")
            ))),
        }
    }

    /// Reads a TOML file with the same keys as the struct fields.
    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        text.parse()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.total_stickers == 0 {
            return bad("total_stickers must be positive".into());
        }
        if self.quadrotte_rows == 0 {
            return bad("quadrotte_rows must be positive".into());
        }
        if self.packet_size == 0 {
            return bad("packet_size must be positive".into());
        }
        if self.display_packets == 0 {
            return bad("display_packets must be positive".into());
        }
        let per_sheet = self.stickers_per_sheet();
        if !self.total_stickers.is_multiple_of(per_sheet) {
            return bad(format!(
                "total_stickers {} is not divisible by 4 * quadrotte_rows = {per_sheet}",
                self.total_stickers
            ));
        }
        if self.packet_size != self.quadrotte_rows {
            return bad(format!(
                "packet_size {} must equal quadrotte_rows {} (one card per magazine row)",
                self.packet_size, self.quadrotte_rows
            ));
        }
        if self.buyback_limit >= self.total_stickers {
            return bad(format!(
                "buyback_limit {} must be below total_stickers {}",
                self.buyback_limit, self.total_stickers
            ));
        }
        Ok(())
    }

    pub fn stickers_per_sheet(&self) -> u32 {
        QUADROTTE_COLUMNS * self.quadrotte_rows
    }

    /// Number of distinct quadrotte sheets (q = B / 4n).
    pub fn sheet_count(&self) -> u32 {
        self.total_stickers / self.stickers_per_sheet()
    }

    /// Stickers per display box.
    pub fn display_stickers(&self) -> u32 {
        self.display_packets * self.packet_size
    }

    /// Distinct stickers a collector must find in packets before buying the rest.
    pub fn buyback_target(&self) -> u32 {
        self.total_stickers - self.buyback_limit
    }

    pub fn contains(&self, id: StickerId) -> bool {
        (1..=self.total_stickers).contains(&id.0)
    }

    pub fn check_sticker(&self, id: StickerId) -> Result<()> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(Error::StickerOutOfRange {
                id: id.0,
                max: self.total_stickers,
            })
        }
    }

    pub fn check_sheet(&self, sheet: u32) -> Result<()> {
        if (1..=self.sheet_count()).contains(&sheet) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "sheet index {sheet} outside 1..={}",
                self.sheet_count()
            )))
        }
    }

    pub fn sticker_to_position(&self, id: StickerId) -> Result<QuadrottePosition> {
        self.check_sticker(id)?;
        let offset = id.0 - 1;
        let per_sheet = self.stickers_per_sheet();
        let within = offset % per_sheet;
        Ok(QuadrottePosition {
            sheet: offset / per_sheet + 1,
            row: within / QUADROTTE_COLUMNS,
            column: within % QUADROTTE_COLUMNS,
        })
    }

    pub fn position_to_sticker(&self, pos: QuadrottePosition) -> Result<StickerId> {
        let sheets = self.sheet_count();
        if pos.sheet == 0 || pos.sheet > sheets || pos.row >= self.quadrotte_rows || pos.column >= QUADROTTE_COLUMNS {
            return Err(Error::InvalidPosition {
                sheet: pos.sheet,
                row: pos.row,
                column: pos.column,
                sheets,
                rows: self.quadrotte_rows,
            });
        }
        Ok(self.sticker_at(pos.sheet, pos.row, pos.column))
    }

    /// Unchecked variant of [`position_to_sticker`](Self::position_to_sticker) for hot loops.
    #[inline]
    pub(crate) fn sticker_at(&self, sheet: u32, row: u32, column: u32) -> StickerId {
        StickerId((sheet - 1) * self.stickers_per_sheet() + row * QUADROTTE_COLUMNS + column + 1)
    }
}

impl FromStr for AlbumConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cfg: AlbumConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

pub const PRESET_NAMES: [&str; 3] = ["wm2014", "bundesliga2014", "amici"];

/// Album number of a sticker, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StickerId(pub u32);

impl StickerId {
    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based index, handy for bitsets.
    pub(crate) fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for StickerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Place of a sticker on its printing sheet: sheet `1..=q`, row `0..n`, column `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadrottePosition {
    pub sheet: u32,
    pub row: u32,
    pub column: u32,
}

impl QuadrottePosition {
    pub const fn new(sheet: u32, row: u32, column: u32) -> Self {
        Self { sheet, row, column }
    }
}

/// Where a packet came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Drawn independently under the classical model; `index` counts packets.
    Classical { index: u64 },
    /// Emitted by the packing machine on `belt` at (zero-based) `tick`.
    Machine { belt: u8, tick: u64 },
    /// Read from a file of real displays.
    Ingested,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packet {
    pub stickers: Vec<StickerId>,
    pub provenance: Provenance,
}

impl Packet {
    pub fn len(&self) -> usize {
        self.stickers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stickers.is_empty()
    }

    /// True when no sticker occurs twice in the packet.
    pub fn is_duplicate_free(&self) -> bool {
        let mut seen: Vec<u32> = self.stickers.iter().map(|s| s.0).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Display {
    pub packets: Vec<Packet>,
    pub serial_tag: Option<String>,
}

impl Display {
    pub fn new(packets: Vec<Packet>) -> Self {
        Self {
            packets,
            serial_tag: None,
        }
    }

    /// Sticker stream in packing order.
    pub fn stickers(&self) -> impl Iterator<Item = StickerId> + '_ {
        self.packets.iter().flat_map(|p| p.stickers.iter().copied())
    }

    pub fn sticker_vec(&self) -> Vec<StickerId> {
        self.stickers().collect()
    }

    pub fn sticker_count(&self) -> usize {
        self.packets.iter().map(Packet::len).sum()
    }

    pub fn label(&self, index: usize) -> String {
        self.serial_tag.clone().unwrap_or_else(|| (index + 1).to_string())
    }
}
