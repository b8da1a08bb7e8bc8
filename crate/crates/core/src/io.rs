//! CSV formats.
//!
//! Displays: one row per sticker, header `display_serial,position,sticker_id`.
//! Rows of one display need not be contiguous; stickers are ordered by
//! `position` and displays by first appearance.
//!
//! Packets: one row per packet, header `tick,belt,s1,...,sP`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::album::{AlbumConfig, Display, Packet, Provenance, StickerId};
use crate::error::{Error, Result};

pub const DISPLAY_HEADER: [&str; 3] = ["display_serial", "position", "sticker_id"];

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: Default::default(),
            source,
        },
        other => Error::Parse {
            line,
            message: format!("{other:?}"),
        },
    }
}

/// Reads real-world displays and checks every id against the album.
pub fn ingest_displays(path: impl AsRef<Path>, cfg: &AlbumConfig) -> Result<Vec<Display>> {
    let path = path.as_ref();
    read_displays(open(path)?, cfg).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io {
            path: path.to_owned(),
            source,
        },
        other => other,
    })
}

pub fn read_displays(reader: impl Read, cfg: &AlbumConfig) -> Result<Vec<Display>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.is_empty() {
        return Ok(Vec::new());
    }
    if header.iter().collect::<Vec<_>>() != DISPLAY_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {}", DISPLAY_HEADER.join(",")),
        });
    }
    let mut order: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<(u64, StickerId, u64)>> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let field = |i: usize, name: &str| -> Result<u64> {
            record[i].parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("{name} {:?} is not a non-negative integer", &record[i]),
            })
        };
        let serial = record[0].to_owned();
        if serial.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty display_serial".into(),
            });
        }
        let position = field(1, "position")?;
        let id = field(2, "sticker_id")?;
        if id == 0 || id > u64::from(cfg.total_stickers) {
            return Err(Error::Validation {
                line,
                message: format!("sticker_id {id} outside 1..={}", cfg.total_stickers),
            });
        }
        let slot = match order.iter().position(|s| *s == serial) {
            Some(i) => i,
            None => {
                order.push(serial);
                rows.push(Vec::new());
                order.len() - 1
            }
        };
        rows[slot].push((position, StickerId(id as u32), line));
    }
    order
        .into_iter()
        .zip(rows)
        .map(|(serial, mut stickers)| {
            stickers.sort_by_key(|&(pos, _, _)| pos);
            if let Some(w) = stickers.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::Validation {
                    line: w[1].2,
                    message: format!("display {serial} repeats position {}", w[1].0),
                });
            }
            let packets = stickers
                .chunks(cfg.packet_size as usize)
                .map(|chunk| Packet {
                    stickers: chunk.iter().map(|&(_, s, _)| s).collect(),
                    provenance: Provenance::Ingested,
                })
                .collect();
            Ok(Display {
                packets,
                serial_tag: Some(serial),
            })
        })
        .collect()
}

pub fn write_displays(writer: impl Write, displays: &[Display]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(DISPLAY_HEADER).map_err(csv_error)?;
    for (i, d) in displays.iter().enumerate() {
        let serial = d.label(i);
        for (pos, s) in d.stickers().enumerate() {
            w.write_record([serial.as_str(), &(pos + 1).to_string(), &s.to_string()])
                .map_err(csv_error)?;
        }
    }
    w.flush().map_err(|source| Error::Io {
        path: Default::default(),
        source,
    })
}

pub fn write_packets(writer: impl Write, packets: &[Packet]) -> Result<()> {
    let width = packets.iter().map(Packet::len).max().unwrap_or(0);
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(writer);
    let mut header = vec!["tick".to_owned(), "belt".to_owned()];
    header.extend((1..=width).map(|i| format!("s{i}")));
    w.write_record(&header).map_err(csv_error)?;
    for p in packets {
        let (tick, belt) = match p.provenance {
            Provenance::Machine { belt, tick } => (tick.to_string(), belt.to_string()),
            Provenance::Classical { index } => (index.to_string(), String::new()),
            Provenance::Ingested => (String::new(), String::new()),
        };
        let mut row = vec![tick, belt];
        row.extend(p.stickers.iter().map(StickerId::to_string));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: Default::default(),
        source,
    })
}

/// Reads machine packets written by [`write_packets`].
pub fn read_packets(reader: impl Read, cfg: &AlbumConfig) -> Result<Vec<Packet>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let num = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line,
                message: format!("{s:?} is not a non-negative integer"),
            })
        };
        if record.len() < 3 {
            return Err(Error::Parse {
                line,
                message: "expected tick, belt and at least one sticker".into(),
            });
        }
        let tick = num(&record[0])?;
        let belt = num(&record[1])?;
        if belt > 3 {
            return Err(Error::Validation {
                line,
                message: format!("belt {belt} outside 0..=3"),
            });
        }
        let mut stickers = Vec::with_capacity(record.len() - 2);
        for f in record.iter().skip(2) {
            let id = num(f)?;
            if id == 0 || id > u64::from(cfg.total_stickers) {
                return Err(Error::Validation {
                    line,
                    message: format!("sticker_id {id} outside 1..={}", cfg.total_stickers),
                });
            }
            stickers.push(StickerId(id as u32));
        }
        out.push(Packet {
            stickers,
            provenance: Provenance::Machine { belt: belt as u8, tick },
        });
    }
    Ok(out)
}
