//! Sticker-album production models.
//!
//! Two ways of filling packets are modelled side by side: the classical
//! collector model, where every packet is an independent uniform draw of
//! distinct stickers, and the packing machine, which cuts printed sheets
//! into 4 x n magazines and stacks one card per row onto four belts. The
//! statistics in [`stats`] compare the two on duplicates, runs and display
//! overlap.

pub mod album;
pub mod classical;
pub mod error;
pub mod io;
pub mod machine;
pub mod mixer;
pub mod reference;
pub mod rng;
pub mod sampling;
pub mod stats;

pub use album::{AlbumConfig, Display, Packet, Provenance, QuadrottePosition, StickerId};
pub use error::{Error, Result};
pub use machine::{MachineState, Orientation, PackingPolicy};
pub use mixer::{generate_sequence, MixingStrategy, MixingVariant, QuadrotteSequence};
pub use rng::SimRng;
