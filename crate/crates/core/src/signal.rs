//! Nonlocal communication signals, turning rates and source terms.
//!
//! The signal perceived by right-movers at cell i is
//!
//! y⁺[i] = q_r·Q_r[i] − q_a·Q_a[i] + q_al·Q_al[i]
//!
//! where Q_r and Q_a integrate K_j(s)·(u(x+s) − u(x−s)) over the kernel
//! window, Q_al integrates K_al(s)·(u⁻(x+s) − u⁺(x−s)), and the integrals
//! are the Simpson-weighted sums of [`crate::kernel`] on periodically
//! wrapped cells. The left-mover signal y⁻ swaps every (x+s, x−s) pair, so
//! each of its accumulations is the term-by-term negation of the y⁺ one and
//! the whole signal satisfies y⁻[i] = −y⁺[i] bit-exactly; it is computed
//! that way.
//!
//! Every per-cell accumulation runs k = 0..N_j in ascending order, serially,
//! so results are identical regardless of how cells are distributed across
//! threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernel::KernelTable;
use crate::params::ModelParams;
use crate::state::PopulationState;

/// Communication signals per cell for right-movers (`y_plus`) and
/// left-movers (`y_minus`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalField {
    pub y_plus: Vec<f64>,
    pub y_minus: Vec<f64>,
}

/// Turning rates λ± per cell; every entry lies in [λ₁, λ₁ + λ₂].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurningRates {
    pub lambda_plus: Vec<f64>,
    pub lambda_minus: Vec<f64>,
}

/// Turning source terms per cell; `s_minus[i] == -s_plus[i]` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceField {
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
}

/// Copy of `src` padded with `pad` wrapped cells on both sides, so that
/// neighbor lookups need no modulo in the hot loop.
fn extend_periodic(src: &[f64], pad: usize) -> Vec<f64> {
    let nx = src.len();
    (0..nx + 2 * pad)
        .map(|j| src[(j + nx * (pad / nx + 1) - pad) % nx])
        .collect()
}

/// Σ_k w[k]·(fwd[c+k] − bwd[c−k]), k ascending, serial.
fn weighted_difference_sum(w: &[f64], fwd: &[f64], bwd: &[f64], c: usize) -> f64 {
    let n = w.len() - 1;
    let f = &fwd[c..=c + n];
    let b = &bwd[c - n..=c];
    let mut acc = 0.0;
    for ((wk, xf), xb) in w.iter().zip(f).zip(b.iter().rev()) {
        acc += wk * (xf - xb);
    }
    acc
}

/// Evaluates the nonlocal signals y± for every cell of `state`.
pub fn compute_signals(
    state: &PopulationState,
    kernels: &KernelTable,
    params: &ModelParams,
) -> SignalField {
    let nx = state.len();
    assert!(nx > 0, "empty state");
    let pad = kernels.max_intervals();

    let total = state.total_density();
    let u_ext = extend_periodic(&total, pad);
    let up_ext = extend_periodic(&state.u_plus, pad);
    let um_ext = extend_periodic(&state.u_minus, pad);

    let w_r = &kernels.repulsion.weights;
    let w_a = &kernels.attraction.weights;
    let w_al = &kernels.alignment.weights;

    let y_plus: Vec<f64> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let c = pad + i;
            let q_r = weighted_difference_sum(w_r, &u_ext, &u_ext, c);
            let q_a = weighted_difference_sum(w_a, &u_ext, &u_ext, c);
            let q_al = weighted_difference_sum(w_al, &um_ext, &up_ext, c);
            params.q_r * q_r - params.q_a * q_a + params.q_al * q_al
        })
        .collect();
    let y_minus = y_plus.iter().map(|v| -v).collect();
    SignalField { y_plus, y_minus }
}

/// Turning function h(y) = 0.5 + 0.5·tanh(y − y₀) applied to both signals:
/// λ± = λ₁ + λ₂·h(y±).
pub fn turning_rates(signals: &SignalField, params: &ModelParams) -> TurningRates {
    let rate = |y: f64| params.lambda1 + params.lambda2 * (0.5 + 0.5 * (y - params.y0).tanh());
    TurningRates {
        lambda_plus: signals.y_plus.iter().map(|&y| rate(y)).collect(),
        lambda_minus: signals.y_minus.iter().map(|&y| rate(y)).collect(),
    }
}

/// Turning exchange between the two populations:
/// s⁺ = −λ⁺u⁺ + λ⁻u⁻ and s⁻ = −s⁺ (computed as the exact negation, so the
/// exchange conserves mass to the last bit).
pub fn source_terms(state: &PopulationState, rates: &TurningRates) -> SourceField {
    let s_plus: Vec<f64> = (0..state.len())
        .map(|i| {
            rates.lambda_minus[i] * state.u_minus[i] - rates.lambda_plus[i] * state.u_plus[i]
        })
        .collect();
    let s_minus = s_plus.iter().map(|s| -s).collect();
    SourceField { s_plus, s_minus }
}

/// Signals → rates → sources in one call.
pub fn evaluate_sources(
    state: &PopulationState,
    kernels: &KernelTable,
    params: &ModelParams,
) -> SourceField {
    let signals = compute_signals(state, kernels, params);
    let rates = turning_rates(&signals, params);
    source_terms(state, &rates)
}

/// Right-hand side of the spatially homogeneous steady-state equation at
/// (u*, A − u*). Zero iff that pair is a homogeneous steady state; for
/// q_al = 0 the unique root is u* = A/2.
pub fn homogeneous_steady_state_residual(u_star: f64, params: &ModelParams) -> f64 {
    let a = params.total_density;
    let base = params.lambda1 + 0.5 * params.lambda2;
    let arg_plus = a * params.q_al - 2.0 * params.q_al * u_star - params.y0;
    let arg_minus = -a * params.q_al + 2.0 * params.q_al * u_star - params.y0;
    -u_star * (base + 0.5 * params.lambda2 * arg_plus.tanh())
        + (a - u_star) * (base + 0.5 * params.lambda2 * arg_minus.tanh())
}
