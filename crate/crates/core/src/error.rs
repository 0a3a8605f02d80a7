//! Error types for configuration validation and simulation runs.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parameter `{name}` must be {constraint}, got {value}")]
    InvalidParam {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error(
        "CFL violation: Courant number gamma*dt/dx = {courant} exceeds 1 \
         (gamma = {gamma}, dt = {dt}, dx = {dx})"
    )]
    CflViolation {
        courant: f64,
        gamma: f64,
        dt: f64,
        dx: f64,
    },

    #[error(
        "{kernel} kernel: 2*s/dx = {raw} rounds to {n} quadrature intervals; \
         need a positive even count (decrease dx or increase the range)"
    )]
    KernelSampling {
        kernel: &'static str,
        raw: f64,
        n: usize,
    },

    #[error(
        "grid of {nx} cells is too small for the {kernel} kernel, \
         which spans {span} cells (need at least twice that)"
    )]
    DomainTooSmall {
        kernel: &'static str,
        nx: usize,
        span: usize,
    },

    #[error("custom initial profile has {got} cells, grid expects {want}")]
    ProfileLength { got: usize, want: usize },

    #[error("grid resolves no cells or no steps (dx = {dx}, dt = {dt}, T = {t_final})")]
    EmptyGrid { dx: f64, dt: f64, t_final: f64 },
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("non-finite value at step {step}, cell {cell}")]
    NonFinite { step: u64, cell: usize },

    #[error("checkpoint {path}: {source}")]
    Checkpoint {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("checkpoint {path}: {reason}")]
    CheckpointFormat { path: String, reason: String },

    #[error(transparent)]
    Config(#[from] ConfigError),
}
