//! The ten time-stepping schemes, as interchangeable single-step operators.
//!
//! All of them advance the same two-speed balance law
//! ∂t u± ± γ ∂x u± = s± and share the nonlocal source pipeline of
//! [`crate::signal`]. `step` is a pure function: it never mutates its input
//! and is deterministic regardless of how many threads evaluate the signal
//! quadrature.

mod limiter;
mod slope;

pub use limiter::{maxmod, mc_limit, minmod};
pub use slope::{compute_slopes, QsaSplit, SlopeField};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::grid::GridSpec;
use crate::kernel::KernelTable;
use crate::params::ModelParams;
use crate::signal::{evaluate_sources, SourceField};
use crate::state::PopulationState;

/// The ten schemes. String forms (for the CLI and serialized records) are
/// lowercase: `upwind`, `maccormack`, `fsm`, `qsa`, `qsa_center`, `qsa_bw`,
/// `qsa_lw`, `qsa_minmod`, `qsa_superbee`, `qsa_mc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeId {
    Upwind,
    MacCormack,
    Fsm,
    Qsa,
    QsaCenter,
    QsaBw,
    QsaLw,
    QsaMinmod,
    QsaSuperbee,
    QsaMc,
}

impl SchemeId {
    pub const ALL: [SchemeId; 10] = [
        SchemeId::Upwind,
        SchemeId::MacCormack,
        SchemeId::Fsm,
        SchemeId::Qsa,
        SchemeId::QsaCenter,
        SchemeId::QsaBw,
        SchemeId::QsaLw,
        SchemeId::QsaMinmod,
        SchemeId::QsaSuperbee,
        SchemeId::QsaMc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Upwind => "upwind",
            SchemeId::MacCormack => "maccormack",
            SchemeId::Fsm => "fsm",
            SchemeId::Qsa => "qsa",
            SchemeId::QsaCenter => "qsa_center",
            SchemeId::QsaBw => "qsa_bw",
            SchemeId::QsaLw => "qsa_lw",
            SchemeId::QsaMinmod => "qsa_minmod",
            SchemeId::QsaSuperbee => "qsa_superbee",
            SchemeId::QsaMc => "qsa_mc",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct UnknownScheme(pub String);

impl fmt::Display for UnknownScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = SchemeId::ALL.iter().map(|s| s.name()).collect();
        write!(
            f,
            "unknown scheme `{}`; valid names: {}",
            self.0,
            names.join(", ")
        )
    }
}

impl std::error::Error for UnknownScheme {}

impl FromStr for SchemeId {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == s.to_ascii_lowercase())
            .ok_or_else(|| UnknownScheme(s.to_string()))
    }
}

/// Advances `state` by one time step with the selected scheme.
pub fn step(
    scheme: SchemeId,
    state: &PopulationState,
    params: &ModelParams,
    grid: &GridSpec,
    kernels: &KernelTable,
) -> PopulationState {
    let mut next = match scheme {
        SchemeId::Upwind => upwind_step(state, params, grid, kernels),
        SchemeId::MacCormack => maccormack_step(state, params, grid, kernels),
        SchemeId::Fsm => fractional_step(state, params, grid, kernels),
        SchemeId::Qsa => qsa_step(state, params, grid, kernels),
        _ => qsa_slope_step(scheme, state, params, grid, kernels),
    };
    next.time_index = state.time_index + 1;
    next
}

fn upwind_step(
    state: &PopulationState,
    params: &ModelParams,
    grid: &GridSpec,
    kernels: &KernelTable,
) -> PopulationState {
    let sources = evaluate_sources(state, kernels, params);
    upwind_update(state, &sources, grid.courant(params.gamma), grid.dt)
}

/// Shared first-order transport-plus-source update. With `dt = 0` the source
/// drops out and this is the pure upwind transport used by the FSM A-step.
fn upwind_update(
    state: &PopulationState,
    sources: &SourceField,
    c: f64,
    dt: f64,
) -> PopulationState {
    let nx = state.len();
    let up = &state.u_plus;
    let um = &state.u_minus;
    let mut u_plus = vec![0.0; nx];
    let mut u_minus = vec![0.0; nx];
    for i in 0..nx {
        let im1 = (i + nx - 1) % nx;
        let ip1 = (i + 1) % nx;
        u_plus[i] = up[i] - c * (up[i] - up[im1]) + dt * sources.s_plus[i];
        u_minus[i] = um[i] + c * (um[ip1] - um[i]) + dt * sources.s_minus[i];
    }
    PopulationState::new(u_plus, u_minus)
}

/// Two-stage predictor-corrector: upwind differences in the first stage,
/// downwind differences in the second (applied to the predicted values, with
/// sources re-evaluated there), then the average of old and corrected
/// states. The stage ordering is fixed; it is not alternated between steps.
fn maccormack_step(
    state: &PopulationState,
    params: &ModelParams,
    grid: &GridSpec,
    kernels: &KernelTable,
) -> PopulationState {
    let nx = state.len();
    let c = grid.courant(params.gamma);
    let dt = grid.dt;

    let sources = evaluate_sources(state, kernels, params);
    let starred = upwind_update(state, &sources, c, dt);

    let starred_sources = evaluate_sources(&starred, kernels, params);
    let sp = &starred.u_plus;
    let sm = &starred.u_minus;
    let mut u_plus = vec![0.0; nx];
    let mut u_minus = vec![0.0; nx];
    for i in 0..nx {
        let im1 = (i + nx - 1) % nx;
        let ip1 = (i + 1) % nx;
        let double_plus = sp[i] - c * (sp[ip1] - sp[i]) + dt * starred_sources.s_plus[i];
        let double_minus = sm[i] + c * (sm[i] - sm[im1]) + dt * starred_sources.s_minus[i];
        u_plus[i] = 0.5 * (state.u_plus[i] + double_plus);
        u_minus[i] = 0.5 * (state.u_minus[i] + double_minus);
    }
    PopulationState::new(u_plus, u_minus)
}

/// Operator splitting: an upwind transport step (no sources), then the
/// turning ODE advanced with the explicit midpoint rule (half-step source
/// evaluation, then a full step from the transported state).
fn fractional_step(
    state: &PopulationState,
    params: &ModelParams,
    grid: &GridSpec,
    kernels: &KernelTable,
) -> PopulationState {
    let nx = state.len();
    let c = grid.courant(params.gamma);
    let dt = grid.dt;
    let half_dt = 0.5 * dt;

    let zero = SourceField {
        s_plus: vec![0.0; nx],
        s_minus: vec![0.0; nx],
    };
    let transported = upwind_update(state, &zero, c, 0.0);

    let mid_sources = evaluate_sources(&transported, kernels, params);
    let mut mid = PopulationState::new(
        (0..nx)
            .map(|i| transported.u_plus[i] + half_dt * mid_sources.s_plus[i])
            .collect(),
        (0..nx)
            .map(|i| transported.u_minus[i] + half_dt * mid_sources.s_minus[i])
            .collect(),
    );
    mid.time_index = state.time_index;

    let end_sources = evaluate_sources(&mid, kernels, params);
    PopulationState::new(
        (0..nx)
            .map(|i| transported.u_plus[i] + dt * end_sources.s_plus[i])
            .collect(),
        (0..nx)
            .map(|i| transported.u_minus[i] + dt * end_sources.s_minus[i])
            .collect(),
    )
}

/// Plain quasi-steady scheme (no reconstruction slopes). For constant speed
/// the half-cell splitting collapses to the upwind method with the source
/// averaged over the two cells feeding each interface; this closed form is
/// what gets evaluated.
fn qsa_step(
    state: &PopulationState,
    params: &ModelParams,
    grid: &GridSpec,
    kernels: &KernelTable,
) -> PopulationState {
    let nx = state.len();
    let c = grid.courant(params.gamma);
    let half_dt = 0.5 * grid.dt;
    let sources = evaluate_sources(state, kernels, params);
    let up = &state.u_plus;
    let um = &state.u_minus;
    let sp = &sources.s_plus;
    let sm = &sources.s_minus;
    let mut u_plus = vec![0.0; nx];
    let mut u_minus = vec![0.0; nx];
    for i in 0..nx {
        let im1 = (i + nx - 1) % nx;
        let ip1 = (i + 1) % nx;
        u_plus[i] = up[i] - c * (up[i] - up[im1]) + half_dt * (sp[i] + sp[im1]);
        u_minus[i] = um[i] + c * (um[ip1] - um[i]) + half_dt * (sm[ip1] + sm[i]);
    }
    PopulationState::new(u_plus, u_minus)
}

/// Quasi-steady wave propagation with a second-order correction: each cell
/// is split into (u − δ, u + δ) halves, Godunov fluxes act on the modified
/// interface values, and the selected reconstruction slope adds the
/// high-resolution term ½·(γΔt/Δx)·(Δx − γΔt)·Δσ.
fn qsa_slope_step(
    scheme: SchemeId,
    state: &PopulationState,
    params: &ModelParams,
    grid: &GridSpec,
    kernels: &KernelTable,
) -> PopulationState {
    let nx = state.len();
    let c = grid.courant(params.gamma);
    let correction = 0.5 * c * (grid.dx - params.gamma * grid.dt);

    let sources = evaluate_sources(state, kernels, params);
    let split = QsaSplit::new(&sources, grid, params.gamma);
    let slopes = compute_slopes(scheme, state, &split, grid);

    let up = &state.u_plus;
    let um = &state.u_minus;
    let dp = &split.delta_plus;
    let dm = &split.delta_minus;
    let sp = &slopes.sigma_plus;
    let sm = &slopes.sigma_minus;

    let mut u_plus = vec![0.0; nx];
    let mut u_minus = vec![0.0; nx];
    for i in 0..nx {
        let im1 = (i + nx - 1) % nx;
        let ip1 = (i + 1) % nx;
        // Interface values: left half of this cell against the right half of
        // the upwind neighbor.
        let plus_left = up[i] - dp[i];
        let plus_right_im1 = up[im1] + dp[im1];
        let minus_left_ip1 = um[ip1] - dm[ip1];
        let minus_right = um[i] + dm[i];
        u_plus[i] =
            up[i] - c * (plus_left - plus_right_im1) - correction * (sp[i] - sp[im1]);
        u_minus[i] =
            um[i] + c * (minus_left_ip1 - minus_right) - correction * (sm[ip1] - sm[i]);
    }
    PopulationState::new(u_plus, u_minus)
}
