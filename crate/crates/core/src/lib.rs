//! Finite-volume solver and diagnostics for a 1D nonlocal hyperbolic
//! aggregation model.
//!
//! Two populations — right-movers u⁺ and left-movers u⁻ — are transported at
//! constant speed on a periodic domain and exchange members through turning
//! rates driven by nonlocal repulsion/attraction/alignment signals. The
//! crate provides:
//!
//! - the model core: parameters, grid, kernel quadrature, signals, turning
//!   rates and source terms ([`params`], [`grid`], [`kernel`], [`signal`]);
//! - ten interchangeable time-stepping schemes ([`scheme`]);
//! - the diagnostic pipeline: step error E(t), stop criteria,
//!   transient/steady/non-convergence classification and symmetry analysis
//!   of the final profiles ([`diagnostics`]);
//! - a runner for full simulations, amplitude and step sweeps, and
//!   checkpoint/resume ([`runner`]).
//!
//! Results are bit-reproducible for a fixed configuration and seed,
//! regardless of thread count: every per-cell quadrature accumulates in a
//! fixed serial order and parallelism only ever distributes whole cells or
//! whole runs.

pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod params;
pub mod runner;
pub mod scheme;
pub mod signal;
pub mod state;

pub use diagnostics::{
    check_stop, classify_minima, classify_series, classify_symmetry, detect_nonconvergence,
    l1_norm, step_error, DiagnosticThresholds, ErrorSeries, MinimumKind, MinimumVerdict,
    NonConvergence, RunVerdict, SolutionKind, StopDecision, StopReason, Symmetry, SymmetryOptions,
    SymmetryReport, STEADY_THRESHOLD, TRANSIENT_THRESHOLD,
};
pub use error::{ConfigError, RunError};
pub use grid::GridSpec;
pub use kernel::{build_kernel_table, KernelTable, KernelWeights};
pub use params::{InteractionKind, ModelParams};
pub use runner::{
    config_hash, load_checkpoint, make_initial_state, resume_simulation, resume_with_observer,
    run_simulation, run_with_checkpoints, run_with_observer, save_checkpoint, sweep, Checkpoint,
    HealthFlags, IcKind, InitialConditionSpec, ProfileSnapshot, RunConfig, RunRecord, SweepAxis,
    SweepRow,
};
pub use scheme::{compute_slopes, maxmod, mc_limit, minmod, step, QsaSplit, SchemeId, SlopeField};
pub use signal::{
    compute_signals, evaluate_sources, homogeneous_steady_state_residual, source_terms,
    turning_rates, SignalField, SourceField, TurningRates,
};
pub use state::PopulationState;
