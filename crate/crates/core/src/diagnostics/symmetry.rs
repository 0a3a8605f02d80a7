//! Reflection-symmetry classification of final density profiles.
//!
//! A profile on the periodic grid is reflection-symmetric when some axis c
//! maps it onto itself: u(x) = u(2c − x). Axes that map cell centers to
//! cell centers sit at half-cell positions c = m·dx/2, so the search space
//! is finite. The classifier scans all of them, scores each by the relative
//! L¹ residual R(c) = ‖u − u∘reflect_c‖₁ / ‖u − ū‖₁, and declares the
//! profile symmetric when the best residual is small. Whether a symmetric
//! profile counts as odd or even follows from its peak count — the
//! convention behind the usual labels for these localized patterns.

use serde::{Deserialize, Serialize};

use super::DiagnosticThresholds;
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Odd,
    Even,
    NonSymmetric,
}

/// Knobs of the symmetry classifier, extracted from the full threshold set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryOptions {
    /// Relative residual below which a profile is symmetric.
    pub tol: f64,
    /// Peak margin as a fraction of the profile's range above its baseline.
    pub peak_margin_rel: f64,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        let t = DiagnosticThresholds::default();
        Self {
            tol: t.symmetry_tol,
            peak_margin_rel: t.peak_margin_rel,
        }
    }
}

impl From<&DiagnosticThresholds> for SymmetryOptions {
    fn from(t: &DiagnosticThresholds) -> Self {
        Self {
            tol: t.symmetry_tol,
            peak_margin_rel: t.peak_margin_rel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub symmetry: Symmetry,
    /// Strict local maxima above the baseline-plus-margin level.
    pub peak_count: usize,
    /// Connected above-margin regions separated by near-baseline gaps.
    pub aggregation_count: usize,
    /// Best relative reflection residual found (0 for a flat profile).
    pub residual: f64,
    /// Axis position of the best reflection, in domain coordinates.
    pub axis: Option<f64>,
}

/// Classifies the reflection symmetry of the total-density profile `u` and
/// counts its peaks and aggregations.
///
/// A profile whose deviation from its mean is below 10⁻¹²·‖u‖₁ is reported
/// as homogeneous: Even with zero peaks. The verdict is invariant under
/// periodic rotation, under reflection, and under affine rescaling
/// u → αu + β with α > 0 (the residual is relative and the peak level is
/// referenced to the profile's own range).
pub fn classify_symmetry(u: &[f64], grid: &GridSpec, opts: &SymmetryOptions) -> SymmetryReport {
    let nx = u.len();
    assert!(nx >= 8, "profile too short to classify");
    assert_eq!(nx, grid.nx, "profile length does not match the grid");

    let mean = u.iter().sum::<f64>() / nx as f64;
    let deviation: f64 = u.iter().map(|v| (v - mean).abs()).sum();
    let norm: f64 = u.iter().map(|v| v.abs()).sum();
    if deviation <= 1e-12 * norm {
        return SymmetryReport {
            symmetry: Symmetry::Even,
            peak_count: 0,
            aggregation_count: 0,
            residual: 0.0,
            axis: None,
        };
    }

    // Scan every half-cell axis; keep the lowest-index minimizer.
    let mut best_m = 0usize;
    let mut best_num = f64::INFINITY;
    for m in 0..2 * nx {
        let mut num = 0.0;
        for i in 0..nx {
            let j = (m + 2 * nx - i) % nx;
            num += (u[i] - u[j]).abs();
        }
        if num < best_num {
            best_num = num;
            best_m = m;
        }
    }
    let residual = best_num / deviation;

    // Localized patterns park most of their mass in a few pulses, so the
    // outermost (smallest) peaks of a converged profile can sit below the
    // domain mean. Peaks and aggregation gaps are therefore referenced to
    // the background level — the profile minimum — not to the mean.
    let max = u.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let min = u.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let level = min + opts.peak_margin_rel * (max - min);
    let active: Vec<bool> = u.iter().map(|&v| v > level).collect();

    let mut peak_count = 0;
    for i in 0..nx {
        let prev = u[(i + nx - 1) % nx];
        let next = u[(i + 1) % nx];
        if active[i] && u[i] > prev && u[i] > next {
            peak_count += 1;
        }
    }

    // Circular run count: one aggregation per inactive→active transition.
    let mut aggregation_count = 0;
    for i in 0..nx {
        if active[i] && !active[(i + nx - 1) % nx] {
            aggregation_count += 1;
        }
    }
    if aggregation_count == 0 && active.iter().all(|&a| a) {
        aggregation_count = 1;
    }

    let symmetry = if residual <= opts.tol {
        if peak_count % 2 == 1 {
            Symmetry::Odd
        } else {
            Symmetry::Even
        }
    } else {
        Symmetry::NonSymmetric
    };

    SymmetryReport {
        symmetry,
        peak_count,
        aggregation_count,
        residual,
        axis: Some(best_m as f64 * grid.dx / 2.0),
    }
}
