//! Command-line front end for `dfakit`: channel files, reports, random
//! ensembles, Kraus reduction and the property-check suite.

pub mod check;
pub mod cli;
pub mod commands;
pub mod format;

pub use cli::{run, Cli};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    /// A property or validation check failed, or the channel was refused.
    pub const FAILURE: u8 = 1;
    /// I/O or parse error.
    pub const IO: u8 = 2;
}
