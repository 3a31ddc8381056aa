//! Transfer factors for elliptic regular elements of classical p-adic groups.

pub mod arith;
pub mod cli;
pub mod error;
pub mod etale;
pub mod forms;
pub mod factor;
pub mod localfield;
pub mod params;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
