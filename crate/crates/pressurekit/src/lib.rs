//! File formats, experiment runner and verification suites for
//! [`pressurekit_core`].
//!
//! The binary `pressurekit` wraps [`run::run`] and [`verify::verify`]; the
//! acceptance criteria in [`acceptance`] are shared by `pressurekit verify`
//! and the `acceptance` test target.
#![warn(missing_debug_implementations, rust_2018_idioms)]

pub mod acceptance;
pub mod check;
pub mod config;
mod error;
pub mod formats;
pub mod run;
pub mod verify;

pub use check::Check;
pub use config::Config;
pub use error::{Error, Result};
pub use run::{run, Command, Outcome};
