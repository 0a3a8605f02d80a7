//! Precomputed quadrature weights for the nonlocal interaction integrals.
//!
//! Each kernel integral ∫₀^∞ K_j(s) f(s) ds is truncated to [0, 2s_j]
//! (the Gaussians carry well over 98% of their mass there) and evaluated
//! with the composite Simpson 1/3 rule on the grid offsets s = k·dx,
//! k = 0..N_j. The weights stored here fold the Simpson coefficient, the
//! kernel sample and the dx/3 scaling into one factor per offset, so a
//! signal evaluation is a plain weighted sum over neighbor differences.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::grid::GridSpec;
use crate::params::{InteractionKind, ModelParams};

/// Simpson-weighted samples of one kernel: `weights[k]` multiplies the
/// integrand at offset k·dx, k = 0..=intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelWeights {
    pub weights: Vec<f64>,
    /// 1 − Σ weights: the kernel mass the truncated quadrature misses.
    pub mass_defect: f64,
}

impl KernelWeights {
    /// Number of Simpson intervals N_j (always even and positive).
    pub fn intervals(&self) -> usize {
        self.weights.len() - 1
    }
}

/// Quadrature weights for all three interaction kernels on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    pub repulsion: KernelWeights,
    pub attraction: KernelWeights,
    pub alignment: KernelWeights,
}

impl KernelTable {
    pub fn get(&self, kind: InteractionKind) -> &KernelWeights {
        match kind {
            InteractionKind::Repulsion => &self.repulsion,
            InteractionKind::Attraction => &self.attraction,
            InteractionKind::Alignment => &self.alignment,
        }
    }

    /// Largest interval count over the three kernels (the widest stencil a
    /// signal evaluation reaches).
    pub fn max_intervals(&self) -> usize {
        self.repulsion
            .intervals()
            .max(self.attraction.intervals())
            .max(self.alignment.intervals())
    }

    /// Worst kernel-mass defect over the three kernels.
    pub fn worst_mass_defect(&self) -> f64 {
        self.repulsion
            .mass_defect
            .abs()
            .max(self.attraction.mass_defect.abs())
            .max(self.alignment.mass_defect.abs())
    }
}

/// Number of Simpson intervals for a kernel of range `s_j`: 2·s_j/dx rounded
/// to the nearest even integer. Rounding keeps Simpson's rule valid for
/// space steps that do not divide the range exactly; the induced mass defect
/// is recorded in the table.
pub fn sample_count(kind: InteractionKind, range: f64, dx: f64) -> Result<usize, ConfigError> {
    let raw = 2.0 * range / dx;
    let n = 2.0 * (range / dx).round();
    if n < 2.0 {
        return Err(ConfigError::KernelSampling {
            kernel: kind.label(),
            raw,
            n: n as usize,
        });
    }
    Ok(n as usize)
}

/// Composite Simpson 1/3 coefficient for node `k` of `n` intervals
/// (1, 4, 2, 4, ..., 2, 4, 1), without the h/3 factor.
pub fn simpson_coefficient(k: usize, n: usize) -> f64 {
    if k == 0 || k == n {
        1.0
    } else if k % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Builds the Simpson-weighted kernel samples for the three interaction
/// kernels. Fails if any kernel resolves to zero intervals on this grid.
pub fn build_kernel_table(params: &ModelParams, grid: &GridSpec) -> Result<KernelTable, ConfigError> {
    let build = |kind: InteractionKind| -> Result<KernelWeights, ConfigError> {
        let n = sample_count(kind, params.range(kind), grid.dx)?;
        let scale = grid.dx / 3.0;
        let weights: Vec<f64> = (0..=n)
            .map(|k| {
                simpson_coefficient(k, n) * params.kernel_value(kind, k as f64 * grid.dx) * scale
            })
            .collect();
        let mass: f64 = weights.iter().sum();
        Ok(KernelWeights {
            weights,
            mass_defect: 1.0 - mass,
        })
    };
    Ok(KernelTable {
        repulsion: build(InteractionKind::Repulsion)?,
        attraction: build(InteractionKind::Attraction)?,
        alignment: build(InteractionKind::Alignment)?,
    })
}
