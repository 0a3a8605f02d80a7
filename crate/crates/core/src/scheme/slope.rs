//! Half-cell source splitting and slope reconstruction for the
//! quasi-steady wave-propagation schemes.

use serde::{Deserialize, Serialize};

use super::limiter::{maxmod, mc_limit, minmod};
use super::SchemeId;
use crate::grid::GridSpec;
use crate::signal::SourceField;
use crate::state::PopulationState;

/// Half-cell jumps δ± that split each cell value into left/right halves
/// (u ∓ δ, u ± δ) so that the flux jump across the cell center cancels the
/// source term: δ⁺ = dx·s⁺/(2γ) and δ⁻ = −dx·s⁻/(2γ). Because the source
/// components are exact negations of each other, `delta_plus[i] ==
/// delta_minus[i]` to the bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QsaSplit {
    pub delta_plus: Vec<f64>,
    pub delta_minus: Vec<f64>,
}

impl QsaSplit {
    pub fn new(sources: &SourceField, grid: &GridSpec, gamma: f64) -> Self {
        let two_gamma = 2.0 * gamma;
        let delta_plus: Vec<f64> = sources
            .s_plus
            .iter()
            .map(|s| grid.dx * s / two_gamma)
            .collect();
        let delta_minus: Vec<f64> = sources
            .s_minus
            .iter()
            .map(|s| -(grid.dx * s / two_gamma))
            .collect();
        Self {
            delta_plus,
            delta_minus,
        }
    }
}

/// Reconstruction slopes σ± per cell; identically zero for the plain QSA
/// scheme (and for the slope-free schemes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeField {
    pub sigma_plus: Vec<f64>,
    pub sigma_minus: Vec<f64>,
}

// The three slope stencils. The δ contributions are grouped into one sum so
// that the (σ⁺ formula, σ⁻ formula) pairs mirror each other bit-exactly
// under grid reflection.

fn upwind_slope(u: &[f64], d: &[f64], i: usize, nx: usize, dx: f64) -> f64 {
    let im1 = (i + nx - 1) % nx;
    ((u[i] - u[im1]) - (d[i] + d[im1])) / dx
}

fn downwind_slope(u: &[f64], d: &[f64], i: usize, nx: usize, dx: f64) -> f64 {
    let ip1 = (i + 1) % nx;
    ((u[ip1] - u[i]) - (d[ip1] + d[i])) / dx
}

fn centered_slope(u: &[f64], d: &[f64], i: usize, nx: usize, dx: f64) -> f64 {
    let im1 = (i + nx - 1) % nx;
    let ip1 = (i + 1) % nx;
    ((u[ip1] - u[im1]) - ((d[ip1] + d[im1]) + 2.0 * d[i])) / (2.0 * dx)
}

/// Reconstruction slopes for one scheme. `Upwind`, `MacCormack`, `Fsm` and
/// plain `Qsa` use no reconstruction and get zero slopes.
pub fn compute_slopes(
    scheme: SchemeId,
    state: &PopulationState,
    split: &QsaSplit,
    grid: &GridSpec,
) -> SlopeField {
    let nx = state.len();
    let dx = grid.dx;
    let up = &state.u_plus;
    let um = &state.u_minus;
    let dp = &split.delta_plus;
    let dm = &split.delta_minus;

    let build = |f_plus: &dyn Fn(usize) -> f64, f_minus: &dyn Fn(usize) -> f64| SlopeField {
        sigma_plus: (0..nx).map(f_plus).collect(),
        sigma_minus: (0..nx).map(f_minus).collect(),
    };

    match scheme {
        SchemeId::Upwind | SchemeId::MacCormack | SchemeId::Fsm | SchemeId::Qsa => SlopeField {
            sigma_plus: vec![0.0; nx],
            sigma_minus: vec![0.0; nx],
        },
        SchemeId::QsaCenter => build(
            &|i| centered_slope(up, dp, i, nx, dx),
            &|i| centered_slope(um, dm, i, nx, dx),
        ),
        // Beam-Warming: fully upwind for each family (right-movers look
        // left, left-movers look right).
        SchemeId::QsaBw => build(
            &|i| upwind_slope(up, dp, i, nx, dx),
            &|i| downwind_slope(um, dm, i, nx, dx),
        ),
        // Lax-Wendroff: centered 3-point method.
        SchemeId::QsaLw => build(
            &|i| downwind_slope(up, dp, i, nx, dx),
            &|i| upwind_slope(um, dm, i, nx, dx),
        ),
        SchemeId::QsaMinmod => build(
            &|i| {
                minmod(
                    upwind_slope(up, dp, i, nx, dx),
                    downwind_slope(up, dp, i, nx, dx),
                )
            },
            &|i| {
                minmod(
                    upwind_slope(um, dm, i, nx, dx),
                    downwind_slope(um, dm, i, nx, dx),
                )
            },
        ),
        SchemeId::QsaSuperbee => {
            let superbee = |u: &[f64], d: &[f64], i: usize| {
                let up_s = upwind_slope(u, d, i, nx, dx);
                let down_s = downwind_slope(u, d, i, nx, dx);
                maxmod(minmod(up_s, 2.0 * down_s), minmod(2.0 * up_s, down_s))
            };
            build(&|i| superbee(up, dp, i), &|i| superbee(um, dm, i))
        }
        SchemeId::QsaMc => {
            let mc = |u: &[f64], d: &[f64], i: usize| {
                mc_limit(
                    centered_slope(u, d, i, nx, dx),
                    2.0 * upwind_slope(u, d, i, nx, dx),
                    2.0 * downwind_slope(u, d, i, nx, dx),
                )
            };
            build(&|i| mc(up, dp, i), &|i| mc(um, dm, i))
        }
    }
}
