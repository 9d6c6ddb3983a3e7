//! File formats, experiment harnesses and the command-line front end for
//! `isoforge-core`.

pub mod cli;
mod error;
pub mod format;
mod fsutil;
pub mod parallel;
pub mod report;

pub use error::{Error, Result};
pub use fsutil::{write_all_atomic, write_atomic};
