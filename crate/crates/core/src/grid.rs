//! Space/time discretization of the computation domain [0, T] × [0, L].

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::params::ModelParams;

/// Uniform grid: constant space step `dx` on a periodic domain of length `L`
/// (`nx = floor(L/dx)` cells) and constant time step `dt` up to the final
/// time `T` (`nt = floor(T/dt)` steps).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dx: f64,
    pub dt: f64,
    pub nx: usize,
    pub nt: u64,
    pub t_final: f64,
    pub domain_length: f64,
}

/// floor(a/b) nudged so that quotients within one part in 10⁹ of an integer
/// land on it (10/0.01 must give 1000 cells, not 999).
pub(crate) fn floor_ratio(a: f64, b: f64) -> f64 {
    let q = a / b;
    let r = q.round();
    if (q - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        q.floor()
    }
}

impl GridSpec {
    pub fn new(dx: f64, dt: f64, t_final: f64, domain_length: f64) -> Result<Self, ConfigError> {
        if !(dx > 0.0) || !(dt > 0.0) || !(t_final > 0.0) || !(domain_length > 0.0) {
            return Err(ConfigError::EmptyGrid { dx, dt, t_final });
        }
        let nx = floor_ratio(domain_length, dx);
        let nt = floor_ratio(t_final, dt);
        if nx < 2.0 || nt < 1.0 {
            return Err(ConfigError::EmptyGrid { dx, dt, t_final });
        }
        Ok(Self {
            dx,
            dt,
            nx: nx as usize,
            nt: nt as u64,
            t_final,
            domain_length,
        })
    }

    /// Courant number gamma·dt/dx.
    pub fn courant(&self, gamma: f64) -> f64 {
        gamma * self.dt / self.dx
    }

    /// Coordinate of cell `i` (0-based, cells wrap periodically).
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    /// Weight of one cell in the discrete L¹ norm, L/nx.
    pub fn cell_weight(&self) -> f64 {
        self.domain_length / self.nx as f64
    }

    /// Checks the CFL bound and that the domain holds every kernel window
    /// with room to spare.
    pub fn validate(&self, params: &ModelParams) -> Result<(), ConfigError> {
        let courant = self.courant(params.gamma);
        if courant > 1.0 {
            return Err(ConfigError::CflViolation {
                courant,
                gamma: params.gamma,
                dt: self.dt,
                dx: self.dx,
            });
        }
        for kind in crate::params::InteractionKind::ALL {
            let span = crate::kernel::sample_count(kind, params.range(kind), self.dx)?;
            if self.nx < 2 * span {
                return Err(ConfigError::DomainTooSmall {
                    kernel: kind.label(),
                    nx: self.nx,
                    span,
                });
            }
        }
        Ok(())
    }
}
