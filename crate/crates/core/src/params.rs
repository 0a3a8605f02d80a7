//! Physical model parameters.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Constants of the two-speed aggregation model: transport speed, turning
/// rates, the three social-interaction kernels (repulsion, attraction,
/// alignment), total population density and domain length.
///
/// `Default` yields the reference parameter set used throughout the
/// simulations (speed 0.1, baseline/bias turning rates 0.2/0.9, attraction
/// 1.1 at range 1, repulsion 2.2 at range 0.25, alignment off, total density
/// 2 on a domain of length 10). Kernel widths follow `m_j = s_j / 8`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    /// Transport speed of both populations.
    pub gamma: f64,
    /// Baseline turning rate.
    pub lambda1: f64,
    /// Bias turning rate (scales the signal-dependent part).
    pub lambda2: f64,
    /// Shift of the turning function: h(y) = 0.5 + 0.5 tanh(y - y0).
    pub y0: f64,
    /// Magnitude of attraction.
    pub q_a: f64,
    /// Magnitude of repulsion.
    pub q_r: f64,
    /// Magnitude of alignment.
    pub q_al: f64,
    /// Attraction range (center of the attraction kernel).
    pub s_a: f64,
    /// Repulsion range.
    pub s_r: f64,
    /// Alignment range.
    pub s_al: f64,
    /// Width of the attraction kernel.
    pub m_a: f64,
    /// Width of the repulsion kernel.
    pub m_r: f64,
    /// Width of the alignment kernel.
    pub m_al: f64,
    /// Total population density (domain average of u⁺ + u⁻).
    pub total_density: f64,
    /// Length of the periodic domain [0, L].
    pub domain_length: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            gamma: 0.1,
            lambda1: 0.2,
            lambda2: 0.9,
            y0: 2.0,
            q_a: 1.1,
            q_r: 2.2,
            q_al: 0.0,
            s_a: 1.0,
            s_r: 0.25,
            s_al: 0.5,
            m_a: 1.0 / 8.0,
            m_r: 0.25 / 8.0,
            m_al: 0.5 / 8.0,
            total_density: 2.0,
            domain_length: 10.0,
        }
    }
}

/// One interaction kernel, identified by what it models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InteractionKind {
    Repulsion,
    Attraction,
    Alignment,
}

impl InteractionKind {
    pub const ALL: [InteractionKind; 3] = [
        InteractionKind::Repulsion,
        InteractionKind::Attraction,
        InteractionKind::Alignment,
    ];

    pub fn label(self) -> &'static str {
        match self {
            InteractionKind::Repulsion => "repulsion",
            InteractionKind::Attraction => "attraction",
            InteractionKind::Alignment => "alignment",
        }
    }
}

impl ModelParams {
    /// Interaction range `s_j` of the given kernel.
    pub fn range(&self, kind: InteractionKind) -> f64 {
        match kind {
            InteractionKind::Repulsion => self.s_r,
            InteractionKind::Attraction => self.s_a,
            InteractionKind::Alignment => self.s_al,
        }
    }

    /// Kernel width `m_j` of the given kernel.
    pub fn width(&self, kind: InteractionKind) -> f64 {
        match kind {
            InteractionKind::Repulsion => self.m_r,
            InteractionKind::Attraction => self.m_a,
            InteractionKind::Alignment => self.m_al,
        }
    }

    /// Interaction magnitude `q_j` of the given kernel.
    pub fn magnitude(&self, kind: InteractionKind) -> f64 {
        match kind {
            InteractionKind::Repulsion => self.q_r,
            InteractionKind::Attraction => self.q_a,
            InteractionKind::Alignment => self.q_al,
        }
    }

    /// Gaussian kernel K_j(s) = exp(-(s - s_j)² / (2 m_j²)) / sqrt(2π m_j²).
    pub fn kernel_value(&self, kind: InteractionKind, s: f64) -> f64 {
        let sj = self.range(kind);
        let mj = self.width(kind);
        let norm = (2.0 * std::f64::consts::PI * mj * mj).sqrt();
        (-(s - sj) * (s - sj) / (2.0 * mj * mj)).exp() / norm
    }

    /// Largest interaction range over the three kernels.
    pub fn max_range(&self) -> f64 {
        self.s_r.max(self.s_a).max(self.s_al)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("gamma", self.gamma),
            ("s_a", self.s_a),
            ("s_r", self.s_r),
            ("s_al", self.s_al),
            ("m_a", self.m_a),
            ("m_r", self.m_r),
            ("m_al", self.m_al),
            ("total_density", self.total_density),
            ("domain_length", self.domain_length),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ConfigError::InvalidParam {
                    name,
                    constraint: "> 0",
                    value,
                });
            }
        }
        let non_negative = [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("q_a", self.q_a),
            ("q_r", self.q_r),
            ("q_al", self.q_al),
        ];
        for (name, value) in non_negative {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(ConfigError::InvalidParam {
                    name,
                    constraint: ">= 0",
                    value,
                });
            }
        }
        if !self.y0.is_finite() {
            return Err(ConfigError::InvalidParam {
                name: "y0",
                constraint: "finite",
                value: self.y0,
            });
        }
        Ok(())
    }
}
