//! Library side of the solver CLI: argument parsing and file emission,
//! shared between the binary and its tests.

pub mod args;
pub mod output;

pub use args::{Cli, Request};
