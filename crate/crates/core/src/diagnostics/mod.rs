//! Convergence monitoring and solution classification.
//!
//! The quantity driving every stop/classification decision is the step
//! error E(t): the discrete L¹ distance between the total density at two
//! adjacent time steps, sampled at integer times t = 1, 2, 3, …
//!
//! A run stops either at the final time T or at 1.34·t₀, where t₀ is the
//! first integer time with E(t₀) < 10⁻¹⁴. A dip of E below 10⁻⁸ that later
//! rises again marks a transient solution (a saddle passage, not a steady
//! state); E staying below 10⁻¹⁴ for the rest of the run marks a steady
//! state; E oscillating indefinitely inside a narrow band above 10⁻⁸ marks
//! a non-convergent run.

mod symmetry;

pub use symmetry::{classify_symmetry, Symmetry, SymmetryOptions, SymmetryReport};

use serde::{Deserialize, Serialize};

use crate::grid::GridSpec;

/// E(t) below this is "steady" (the limit of what 16 significant digits can
/// resolve; t₀ of the stop rule is the first crossing).
pub const STEADY_THRESHOLD: f64 = 1e-14;

/// E(t) below this marks a candidate transient solution.
pub const TRANSIENT_THRESHOLD: f64 = 1e-8;

/// Tunable diagnostic knobs (the Def-style thresholds above are fixed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiagnosticThresholds {
    /// Relative L¹ residual below which a profile counts as symmetric.
    pub symmetry_tol: f64,
    /// Peak margin as a fraction of the profile's range above its baseline.
    pub peak_margin_rel: f64,
    /// Trailing fraction of the E(t) series examined for non-convergence.
    pub tail_fraction: f64,
    /// Largest E_max/E_min ratio still counted as a "narrow band".
    pub band_ratio: f64,
    /// A linear fit of ln E over the tail must not fall more steeply than
    /// this (per time unit) for the band to count as non-convergent.
    pub log_slope_threshold: f64,
    /// Stop-time factor: the run ends at stop_factor·t₀ when that is < T.
    pub stop_factor: f64,
    /// Centered window (in samples) used for local-minimum detection.
    pub minimum_window: usize,
}

impl Default for DiagnosticThresholds {
    fn default() -> Self {
        Self {
            symmetry_tol: 1e-3,
            peak_margin_rel: 1e-2,
            tail_fraction: 0.3,
            band_ratio: 10.0,
            log_slope_threshold: 1e-12,
            stop_factor: 1.34,
            minimum_window: 201,
        }
    }
}

/// Discrete L¹ norm: (L/Nx)·Σ|u_i|.
pub fn l1_norm(u: &[f64], grid: &GridSpec) -> f64 {
    let mut acc = 0.0;
    for v in u {
        acc += v.abs();
    }
    grid.cell_weight() * acc
}

/// Step error between two total-density profiles one time step apart:
/// (L/Nx)·Σ|u_now[i] − u_prev[i]|.
pub fn step_error(u_now: &[f64], u_prev: &[f64], grid: &GridSpec) -> f64 {
    assert_eq!(u_now.len(), u_prev.len());
    let mut acc = 0.0;
    for (a, b) in u_now.iter().zip(u_prev) {
        acc += (a - b).abs();
    }
    grid.cell_weight() * acc
}

/// The E(t) record of one run: one sample per integer time, in order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorSeries {
    samples: Vec<(u64, f64)>,
    t0: Option<u64>,
}

impl ErrorSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: u64, e: f64) {
        if let Some(&(last, _)) = self.samples.last() {
            assert!(t > last, "samples must arrive in increasing time order");
        }
        assert!(e >= 0.0, "E(t) is a norm");
        if self.t0.is_none() && e < STEADY_THRESHOLD {
            self.t0 = Some(t);
        }
        self.samples.push((t, e));
    }

    pub fn samples(&self) -> &[(u64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<(u64, f64)> {
        self.samples.last().copied()
    }

    /// First time with E below the steady threshold, if any yet.
    pub fn t0(&self) -> Option<u64> {
        self.t0
    }

    /// Indices of samples that are strictly the smallest value inside a
    /// centered window of `window` samples. Samples too close to either end
    /// to own a full window are never reported.
    pub fn local_minima(&self, window: usize) -> Vec<usize> {
        let half = window / 2;
        let n = self.samples.len();
        if n < 2 * half + 1 {
            return Vec::new();
        }
        let mut minima = Vec::new();
        for i in half..n - half {
            let (_, e) = self.samples[i];
            let mut smallest = true;
            for j in i - half..=i + half {
                if j != i && self.samples[j].1 <= e {
                    smallest = false;
                    break;
                }
            }
            if smallest {
                minima.push(i);
            }
        }
        minima
    }

    /// Start index of the terminal run of samples below the steady
    /// threshold, if it is non-empty.
    fn steady_tail_start(&self) -> Option<usize> {
        let n = self.samples.len();
        let below = self.samples.iter().rev().take_while(|(_, e)| *e < STEADY_THRESHOLD).count();
        if below == 0 {
            None
        } else {
            Some(n - below)
        }
    }

    /// Time at which the series settles below the steady threshold for good
    /// (needs at least two confirming samples).
    pub fn steady_from(&self) -> Option<u64> {
        let start = self.steady_tail_start()?;
        if self.samples.len() - start >= 2 {
            Some(self.samples[start].0)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    FinalTimeReached,
    SteadyStateStop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopDecision {
    Continue,
    Stop(StopReason),
}

/// Stop rule, evaluated after each recorded sample: stop at stop_factor·t₀
/// when that lies strictly inside the horizon, otherwise at the final time.
/// The comparison carries a one-part-in-10¹² slack so that an exactly
/// representable product like 1.34·5000 = 6700 fires at t = 6700.
pub fn check_stop(series: &ErrorSeries, t_final: f64, stop_factor: f64) -> StopDecision {
    let Some((t, _)) = series.last() else {
        return StopDecision::Continue;
    };
    let t = t as f64;
    if let Some(t0) = series.t0() {
        let t_star = stop_factor * t0 as f64;
        if t_star < t_final && t >= t_star * (1.0 - 1e-12) {
            return StopDecision::Stop(StopReason::SteadyStateStop);
        }
    }
    if t >= t_final {
        return StopDecision::Stop(StopReason::FinalTimeReached);
    }
    StopDecision::Continue
}

/// Classification of one detected E(t) minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimumKind {
    Transient,
    SteadyState,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimumVerdict {
    pub t: u64,
    pub error: f64,
    pub kind: MinimumKind,
}

/// Classifies every detected E(t) minimum, plus the start of a terminal
/// steady tail when one exists (a monotone decay below the steady threshold
/// has no centered-window minimum but is still a steady state).
///
/// A minimum below 10⁻⁸ followed by a later rise back above 10⁻⁸ is a
/// transient; a time from which every remaining sample stays below 10⁻¹⁴ is
/// a steady state; anything else is undetermined (including series too
/// short for the window).
pub fn classify_minima(series: &ErrorSeries, window: usize) -> Vec<MinimumVerdict> {
    let samples = series.samples();
    let steady_start = series.steady_tail_start().filter(|&s| samples.len() - s >= 2);
    let mut verdicts = Vec::new();
    for idx in series.local_minima(window) {
        let (t, e) = samples[idx];
        if e >= TRANSIENT_THRESHOLD {
            continue;
        }
        let kind = if steady_start.is_some_and(|s| idx >= s) {
            MinimumKind::SteadyState
        } else if samples[idx + 1..].iter().any(|(_, later)| *later > TRANSIENT_THRESHOLD) {
            MinimumKind::Transient
        } else {
            MinimumKind::Undetermined
        };
        verdicts.push(MinimumVerdict { t, error: e, kind });
    }
    if let Some(s) = steady_start {
        if !verdicts.iter().any(|v| v.kind == MinimumKind::SteadyState) {
            let (t, e) = samples[s];
            verdicts.push(MinimumVerdict {
                t,
                error: e,
                kind: MinimumKind::SteadyState,
            });
        }
    }
    verdicts.sort_by_key(|v| v.t);
    verdicts
}

/// Result of the non-convergence probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonConvergence {
    pub detected: bool,
    /// [E_min, E_max] over the examined tail (present whenever the tail was
    /// long enough to examine).
    pub band: Option<(f64, f64)>,
}

/// Flags a run whose E(t) neither decays nor settles: over the trailing
/// `tail_fraction` of samples, E stays inside a narrow band entirely above
/// the transient threshold and shows no decreasing trend.
pub fn detect_nonconvergence(
    series: &ErrorSeries,
    thresholds: &DiagnosticThresholds,
) -> NonConvergence {
    let samples = series.samples();
    let tail_len = ((samples.len() as f64) * thresholds.tail_fraction).ceil() as usize;
    if tail_len < 8 {
        return NonConvergence {
            detected: false,
            band: None,
        };
    }
    let tail = &samples[samples.len() - tail_len..];
    let mut e_min = f64::INFINITY;
    let mut e_max = 0.0f64;
    for &(_, e) in tail {
        e_min = e_min.min(e);
        e_max = e_max.max(e);
    }
    let band = Some((e_min, e_max));

    if e_min <= TRANSIENT_THRESHOLD || e_max > thresholds.band_ratio * e_min {
        return NonConvergence {
            detected: false,
            band,
        };
    }

    // Least-squares slope of ln E against t over the tail.
    let n = tail.len() as f64;
    let mut t_mean = 0.0;
    let mut y_mean = 0.0;
    for &(t, e) in tail {
        t_mean += t as f64;
        y_mean += e.ln();
    }
    t_mean /= n;
    y_mean /= n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for &(t, e) in tail {
        let dt = t as f64 - t_mean;
        cov += dt * (e.ln() - y_mean);
        var += dt * dt;
    }
    let slope = cov / var;
    NonConvergence {
        detected: slope >= -thresholds.log_slope_threshold,
        band,
    }
}

/// Run-level solution classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionKind {
    /// Dipped below the transient threshold but never settled.
    TransientOnly,
    SteadyState,
    NonConvergent,
    Undetermined,
}

/// Combines the minimum classification and the non-convergence probe into
/// one verdict. A settled tail wins; otherwise a terminal oscillation band
/// (only possible when the run exhausted its horizon) wins over an earlier
/// transient dip; otherwise a transient dip; otherwise undetermined. The
/// steady and non-convergent verdicts are mutually exclusive by
/// construction: a settled tail sits below 10⁻¹⁴ while a band must stay
/// above 10⁻⁸.
pub fn classify_series(
    series: &ErrorSeries,
    stop_reason: StopReason,
    thresholds: &DiagnosticThresholds,
) -> SolutionKind {
    let verdicts = classify_minima(series, thresholds.minimum_window);
    if verdicts.iter().any(|v| v.kind == MinimumKind::SteadyState) {
        return SolutionKind::SteadyState;
    }
    if stop_reason == StopReason::FinalTimeReached
        && detect_nonconvergence(series, thresholds).detected
    {
        return SolutionKind::NonConvergent;
    }
    if verdicts.iter().any(|v| v.kind == MinimumKind::Transient) {
        return SolutionKind::TransientOnly;
    }
    SolutionKind::Undetermined
}

/// Final verdict of a run: why it stopped, what kind of solution it reached
/// and the symmetry of the final profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunVerdict {
    pub stop_reason: StopReason,
    pub solution_kind: SolutionKind,
    pub symmetry: Symmetry,
    pub peak_count: usize,
    pub aggregation_count: usize,
    /// Relative reflection residual of the final profile.
    pub symmetry_residual: f64,
    /// First time E dropped below the steady threshold, if it did.
    pub t0: Option<u64>,
}
