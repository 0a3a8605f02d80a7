//! Batch sweeps over initial amplitudes or space/time steps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{config_hash, run_simulation, RunConfig};
use crate::diagnostics::RunVerdict;
use crate::grid::GridSpec;

/// What the sweep varies. Every other field comes from the template config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SweepAxis {
    /// One run per initial amplitude Â.
    Amplitudes(Vec<f64>),
    /// One run per (dx, dt) pair.
    SpaceTimeSteps(Vec<(f64, f64)>),
}

impl SweepAxis {
    pub fn len(&self) -> usize {
        match self {
            SweepAxis::Amplitudes(v) => v.len(),
            SweepAxis::SpaceTimeSteps(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One row of the sweep table. Failed runs keep their row, with the error
/// text in place of a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub amplitude: f64,
    pub dx: f64,
    pub dt: f64,
    pub config_hash: String,
    pub verdict: Option<RunVerdict>,
    pub final_l1: Option<f64>,
    pub stop_time: Option<f64>,
    pub error: Option<String>,
}

fn config_for(template: &RunConfig, axis: &SweepAxis, index: usize) -> Result<RunConfig, String> {
    let mut config = template.clone();
    match axis {
        SweepAxis::Amplitudes(amps) => {
            config.ic.amplitude = amps[index];
        }
        SweepAxis::SpaceTimeSteps(steps) => {
            let (dx, dt) = steps[index];
            config.grid = GridSpec::new(
                dx,
                dt,
                template.grid.t_final,
                template.params.domain_length,
            )
            .map_err(|e| e.to_string())?;
        }
    }
    Ok(config)
}

/// Runs one simulation per axis entry, in parallel, and assembles the table
/// in axis order (one row per requested configuration, independent of
/// thread count). Individual failures do not abort the sweep.
pub fn sweep(template: &RunConfig, axis: &SweepAxis) -> Vec<SweepRow> {
    (0..axis.len())
        .into_par_iter()
        .map(|index| {
            let config = match config_for(template, axis, index) {
                Ok(c) => c,
                Err(message) => {
                    let (dx, dt) = match axis {
                        SweepAxis::SpaceTimeSteps(steps) => steps[index],
                        _ => (template.grid.dx, template.grid.dt),
                    };
                    return SweepRow {
                        index,
                        amplitude: template.ic.amplitude,
                        dx,
                        dt,
                        config_hash: String::new(),
                        verdict: None,
                        final_l1: None,
                        stop_time: None,
                        error: Some(message),
                    };
                }
            };
            let hash = config_hash(&config);
            let row_base = SweepRow {
                index,
                amplitude: config.ic.amplitude,
                dx: config.grid.dx,
                dt: config.grid.dt,
                config_hash: hash,
                verdict: None,
                final_l1: None,
                stop_time: None,
                error: None,
            };
            match run_simulation(&config) {
                Ok(record) => SweepRow {
                    verdict: Some(record.verdict),
                    final_l1: Some(record.final_l1),
                    stop_time: Some(record.stop_time),
                    ..row_base
                },
                Err(e) => SweepRow {
                    error: Some(e.to_string()),
                    ..row_base
                },
            }
        })
        .collect()
}
