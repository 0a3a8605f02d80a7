//! Cell-averaged solution state.

use serde::{Deserialize, Serialize};

/// Cell averages of the right-moving (`u_plus`) and left-moving (`u_minus`)
/// densities at one time level. Cells wrap periodically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationState {
    pub u_plus: Vec<f64>,
    pub u_minus: Vec<f64>,
    /// Time step index n (time = n·dt).
    pub time_index: u64,
}

impl PopulationState {
    pub fn new(u_plus: Vec<f64>, u_minus: Vec<f64>) -> Self {
        assert_eq!(u_plus.len(), u_minus.len(), "component lengths differ");
        Self {
            u_plus,
            u_minus,
            time_index: 0,
        }
    }

    /// Uniform state (value, value) on `nx` cells.
    pub fn uniform(value: f64, nx: usize) -> Self {
        Self::new(vec![value; nx], vec![value; nx])
    }

    pub fn len(&self) -> usize {
        self.u_plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u_plus.is_empty()
    }

    /// Total density u = u⁺ + u⁻ per cell.
    pub fn total_density(&self) -> Vec<f64> {
        self.u_plus
            .iter()
            .zip(&self.u_minus)
            .map(|(p, m)| p + m)
            .collect()
    }

    /// Total mass Σ(u⁺ + u⁻)·dx; conserved by every scheme up to round-off.
    pub fn mass(&self, dx: f64) -> f64 {
        let mut sum = 0.0;
        for (p, m) in self.u_plus.iter().zip(&self.u_minus) {
            sum += p + m;
        }
        sum * dx
    }

    /// Index of the first non-finite entry in either component.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.u_plus
            .iter()
            .zip(&self.u_minus)
            .position(|(p, m)| !p.is_finite() || !m.is_finite())
    }

    /// True if any cell of either component lies below `-threshold`.
    /// Densities are reported, never clamped: silently zeroing them would
    /// break mass conservation.
    pub fn has_negative(&self, threshold: f64) -> bool {
        self.u_plus
            .iter()
            .chain(&self.u_minus)
            .any(|&v| v < -threshold)
    }
}
