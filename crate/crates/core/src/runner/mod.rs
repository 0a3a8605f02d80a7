//! Full simulations: configuration, initial conditions, the time loop with
//! E(t) sampling and stop criteria, checkpoint/resume, and batch sweeps.

mod checkpoint;
mod sweep;

pub use checkpoint::{load as load_checkpoint, save as save_checkpoint, Checkpoint};
pub use sweep::{sweep, SweepAxis, SweepRow};

use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagnostics::{
    check_stop, classify_series, classify_symmetry, l1_norm, step_error, DiagnosticThresholds,
    ErrorSeries, RunVerdict, SolutionKind, StopDecision, StopReason, Symmetry, SymmetryOptions,
    SymmetryReport,
};
use crate::error::{ConfigError, RunError};
use crate::grid::GridSpec;
use crate::kernel::build_kernel_table;
use crate::params::ModelParams;
use crate::scheme::{self, SchemeId};
use crate::state::PopulationState;

/// Density below `-NEGATIVITY_THRESHOLD` flags the run as having gone
/// negative (limiters may momentarily undershoot; only NaN aborts).
pub const NEGATIVITY_THRESHOLD: f64 = 1e-12;

/// Initial-condition families. All of them perturb the homogeneous state
/// (u⁺, u⁻) = (1, 1) and split the total density evenly: u±(x, 0) = u(x,0)/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IcKind {
    /// u(x, 0) = 2 + Â·(0.5 + 0.5·sin(0.2π·x)) — one long perturbation.
    Sin02,
    /// u(x, 0) = 2 + Â·(0.5 + 0.5·sin(0.4π·x)) — two perturbation humps.
    Sin04,
    /// u(x, 0) = 2 + Â·r_i with one uniform draw r_i ∈ [0, 1) per cell.
    UniformRandom,
    /// Explicit total-density profile, one value per cell.
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialConditionSpec {
    pub kind: IcKind,
    /// Perturbation amplitude Â.
    pub amplitude: f64,
    /// Seed of the per-cell draws for [`IcKind::UniformRandom`].
    pub seed: u64,
}

impl InitialConditionSpec {
    pub fn sin02(amplitude: f64) -> Self {
        Self {
            kind: IcKind::Sin02,
            amplitude,
            seed: 0,
        }
    }
}

/// Everything that defines one run. The configuration is stamped into every
/// output through a hash of the trajectory-determining fields (parameters,
/// grid, scheme, initial condition, thresholds, seed); thread count,
/// snapshot times and checkpoint cadence do not affect results and are not
/// hashed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub scheme: SchemeId,
    pub ic: InitialConditionSpec,
    pub thresholds: DiagnosticThresholds,
    pub seed: u64,
    /// Steps between checkpoint snapshots; 0 disables checkpointing.
    pub checkpoint_interval: u64,
    /// Worker-thread hint for the caller; results never depend on it.
    pub thread_count: usize,
    /// Times at which to capture full profiles during the run.
    pub snapshot_times: Vec<f64>,
}

impl RunConfig {
    pub fn new(
        params: ModelParams,
        grid: GridSpec,
        scheme: SchemeId,
        ic: InitialConditionSpec,
    ) -> Self {
        let seed = ic.seed;
        Self {
            params,
            grid,
            scheme,
            ic,
            thresholds: DiagnosticThresholds::default(),
            seed,
            checkpoint_interval: 0,
            thread_count: 0,
            snapshot_times: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params.validate()?;
        self.grid.validate(&self.params)?;
        if !(self.ic.amplitude >= 0.0) {
            return Err(ConfigError::InvalidParam {
                name: "amplitude",
                constraint: ">= 0",
                value: self.ic.amplitude,
            });
        }
        if let IcKind::Custom(profile) = &self.ic.kind {
            if profile.len() != self.grid.nx {
                return Err(ConfigError::ProfileLength {
                    got: profile.len(),
                    want: self.grid.nx,
                });
            }
        }
        if self.grid.nx < 8 {
            return Err(ConfigError::EmptyGrid {
                dx: self.grid.dx,
                dt: self.grid.dt,
                t_final: self.grid.t_final,
            });
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ConfigDigest<'a> {
    params: &'a ModelParams,
    grid: &'a GridSpec,
    scheme: SchemeId,
    ic: &'a InitialConditionSpec,
    thresholds: &'a DiagnosticThresholds,
    seed: u64,
}

/// 16-hex-character digest of the trajectory-determining configuration.
pub fn config_hash(config: &RunConfig) -> String {
    let digest = ConfigDigest {
        params: &config.params,
        grid: &config.grid,
        scheme: config.scheme,
        ic: &config.ic,
        thresholds: &config.thresholds,
        seed: config.seed,
    };
    let json = serde_json::to_string(&digest).expect("config serialization cannot fail");
    let hash = Sha256::digest(json.as_bytes());
    hash[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Health record of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HealthFlags {
    /// First step at which any density fell below the negativity threshold.
    pub first_negative_step: Option<u64>,
    /// Step and cell of the first NaN/Inf, if the run aborted.
    pub nan_abort: Option<(u64, usize)>,
}

/// Full profile captured mid-run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSnapshot {
    pub requested_time: f64,
    pub step: u64,
    pub time: f64,
    pub u_plus: Vec<f64>,
    pub u_minus: Vec<f64>,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub scheme: SchemeId,
    pub series: ErrorSeries,
    pub verdict: RunVerdict,
    pub final_state: PopulationState,
    pub final_l1: f64,
    pub steps_taken: u64,
    pub stop_time: f64,
    pub wall_ms: u128,
    pub health: HealthFlags,
    /// Kernel-mass defect per kernel (repulsion, attraction, alignment):
    /// what the truncated quadrature misses of the unit kernel mass.
    pub kernel_mass_defects: [f64; 3],
    pub snapshots: Vec<ProfileSnapshot>,
}

/// Builds the initial cell averages by sampling the chosen formula at the
/// cell centers (the difference to exact cell averaging is O(dx²), below
/// every threshold in play) and splitting the total density evenly between
/// the two directions.
pub fn make_initial_state(
    ic: &InitialConditionSpec,
    grid: &GridSpec,
) -> Result<PopulationState, ConfigError> {
    let nx = grid.nx;
    let total: Vec<f64> = match &ic.kind {
        IcKind::Sin02 | IcKind::Sin04 => {
            let freq = if ic.kind == IcKind::Sin02 { 0.2 } else { 0.4 };
            (0..nx)
                .map(|i| {
                    let x = grid.x(i);
                    2.0 + ic.amplitude * (0.5 + 0.5 * (freq * std::f64::consts::PI * x).sin())
                })
                .collect()
        }
        IcKind::UniformRandom => {
            let mut rng = ChaCha8Rng::seed_from_u64(ic.seed);
            (0..nx).map(|_| 2.0 + ic.amplitude * rng.gen::<f64>()).collect()
        }
        IcKind::Custom(profile) => {
            if profile.len() != nx {
                return Err(ConfigError::ProfileLength {
                    got: profile.len(),
                    want: nx,
                });
            }
            profile.clone()
        }
    };
    let u_plus: Vec<f64> = total.iter().map(|u| 0.5 * u).collect();
    let u_minus = u_plus.clone();
    Ok(PopulationState::new(u_plus, u_minus))
}

/// Runs a simulation to its stop criterion. No checkpoint files are written.
pub fn run_simulation(config: &RunConfig) -> Result<RunRecord, RunError> {
    run_with_checkpoints(config, None)
}

/// Runs a simulation, persisting a resumable snapshot into `ckpt_dir` every
/// `checkpoint_interval` steps (when both are set).
pub fn run_with_checkpoints(
    config: &RunConfig,
    ckpt_dir: Option<&Path>,
) -> Result<RunRecord, RunError> {
    run_with_observer(config, ckpt_dir, &mut |_, _| {})
}

/// Like [`run_with_checkpoints`], with a callback invoked at every recorded
/// E(t) sample (for progress logging; it cannot influence results).
pub fn run_with_observer(
    config: &RunConfig,
    ckpt_dir: Option<&Path>,
    observer: &mut dyn FnMut(u64, f64),
) -> Result<RunRecord, RunError> {
    config.validate()?;
    let state = make_initial_state(&config.ic, &config.grid)?;
    run_loop(
        config,
        state,
        ErrorSeries::new(),
        HealthFlags::default(),
        ckpt_dir,
        observer,
    )
}

/// Continues a run from a checkpoint file. The checkpoint must carry the
/// same configuration hash; the resumed run reproduces the uninterrupted
/// trajectory bit for bit.
pub fn resume_simulation(config: &RunConfig, snapshot: &Path) -> Result<RunRecord, RunError> {
    resume_with_observer(config, snapshot, &mut |_, _| {})
}

/// Like [`resume_simulation`], with a per-sample callback.
pub fn resume_with_observer(
    config: &RunConfig,
    snapshot: &Path,
    observer: &mut dyn FnMut(u64, f64),
) -> Result<RunRecord, RunError> {
    config.validate()?;
    let ckpt = checkpoint::load(snapshot)?;
    let hash = config_hash(config);
    if ckpt.config_hash != hash {
        return Err(RunError::CheckpointFormat {
            path: snapshot.display().to_string(),
            reason: format!(
                "checkpoint belongs to configuration {}, this run is {}",
                ckpt.config_hash, hash
            ),
        });
    }
    let mut series = ErrorSeries::new();
    for (t, e) in &ckpt.samples {
        series.push(*t, *e);
    }
    let mut state = PopulationState::new(ckpt.u_plus, ckpt.u_minus);
    state.time_index = ckpt.step;
    let health = HealthFlags {
        first_negative_step: ckpt.first_negative_step,
        nan_abort: None,
    };
    run_loop(config, state, series, health, snapshot.parent(), observer)
}

/// Step index owning the E sample at integer time `t`: the step k with
/// t^k ≤ t < t^k + dt. For the power-of-two steps used throughout, integer
/// times land exactly on steps.
fn sample_step(t: u64, dt: f64) -> u64 {
    crate::grid::floor_ratio(t as f64, dt) as u64
}

/// First step whose time is at or past `t` (profile snapshots).
fn snapshot_step(t: f64, dt: f64) -> u64 {
    let q = t / dt;
    let r = q.round();
    let idx = if (q - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        q.ceil()
    };
    idx.max(0.0) as u64
}

fn run_loop(
    config: &RunConfig,
    mut state: PopulationState,
    mut series: ErrorSeries,
    mut health: HealthFlags,
    ckpt_dir: Option<&Path>,
    observer: &mut dyn FnMut(u64, f64),
) -> Result<RunRecord, RunError> {
    let wall_start = Instant::now();
    let grid = &config.grid;
    let kernels = build_kernel_table(&config.params, grid)?;
    let hash = config_hash(config);

    // Snapshot schedule, earliest first.
    let mut snap_queue: Vec<(u64, f64)> = config
        .snapshot_times
        .iter()
        .map(|&t| (snapshot_step(t, grid.dt).min(grid.nt), t))
        .collect();
    snap_queue.sort_by(|a, b| a.0.cmp(&b.0));
    let mut snapshots = Vec::new();
    let mut capture_due = |state: &PopulationState, queue: &mut Vec<(u64, f64)>| {
        while let Some(&(step, requested)) = queue.first() {
            if step > state.time_index {
                break;
            }
            snapshots.push(ProfileSnapshot {
                requested_time: requested,
                step: state.time_index,
                time: state.time_index as f64 * grid.dt,
                u_plus: state.u_plus.clone(),
                u_minus: state.u_minus.clone(),
            });
            queue.remove(0);
        }
    };
    capture_due(&state, &mut snap_queue);

    let mut t_target = series.last().map_or(1, |(t, _)| t + 1);
    let mut target_step = sample_step(t_target, grid.dt);
    let mut stop_reason = None;

    while state.time_index < grid.nt {
        let prev = state;
        state = scheme::step(config.scheme, &prev, &config.params, grid, &kernels);
        let n = state.time_index;

        if let Some(cell) = state.first_non_finite() {
            health.nan_abort = Some((n, cell));
            break;
        }
        if health.first_negative_step.is_none() && state.has_negative(NEGATIVITY_THRESHOLD) {
            health.first_negative_step = Some(n);
        }

        while target_step == n {
            let e = step_error(&state.total_density(), &prev.total_density(), grid);
            series.push(t_target, e);
            observer(t_target, e);
            if let StopDecision::Stop(reason) =
                check_stop(&series, grid.t_final, config.thresholds.stop_factor)
            {
                stop_reason = Some(reason);
                break;
            }
            t_target += 1;
            target_step = sample_step(t_target, grid.dt);
        }

        capture_due(&state, &mut snap_queue);

        if config.checkpoint_interval > 0 && n % config.checkpoint_interval == 0 {
            if let Some(dir) = ckpt_dir {
                let ckpt = Checkpoint {
                    config_hash: hash.clone(),
                    step: n,
                    seed: config.ic.seed,
                    first_negative_step: health.first_negative_step,
                    u_plus: state.u_plus.clone(),
                    u_minus: state.u_minus.clone(),
                    samples: series.samples().to_vec(),
                };
                checkpoint::save(&dir.join(format!("ckpt-{n}")), &ckpt)?;
            }
        }

        if stop_reason.is_some() {
            break;
        }
    }
    let stop_reason = stop_reason.unwrap_or(StopReason::FinalTimeReached);

    let total = state.total_density();
    let (solution_kind, symmetry_report) = if health.nan_abort.is_some() {
        (
            SolutionKind::Undetermined,
            SymmetryReport {
                symmetry: Symmetry::NonSymmetric,
                peak_count: 0,
                aggregation_count: 0,
                residual: f64::NAN,
                axis: None,
            },
        )
    } else {
        (
            classify_series(&series, stop_reason, &config.thresholds),
            classify_symmetry(&total, grid, &SymmetryOptions::from(&config.thresholds)),
        )
    };
    let verdict = RunVerdict {
        stop_reason,
        solution_kind,
        symmetry: symmetry_report.symmetry,
        peak_count: symmetry_report.peak_count,
        aggregation_count: symmetry_report.aggregation_count,
        symmetry_residual: symmetry_report.residual,
        t0: series.t0(),
    };

    Ok(RunRecord {
        config_hash: hash,
        scheme: config.scheme,
        verdict,
        final_l1: l1_norm(&total, grid),
        steps_taken: state.time_index,
        stop_time: state.time_index as f64 * grid.dt,
        wall_ms: wall_start.elapsed().as_millis(),
        health,
        kernel_mass_defects: [
            kernels.repulsion.mass_defect,
            kernels.attraction.mass_defect,
            kernels.alignment.mass_defect,
        ],
        snapshots,
        series,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(scheme: SchemeId, amplitude: f64, t_final: f64) -> RunConfig {
        let params = ModelParams::default();
        // Coarse but kernel-resolving grid for fast tests.
        let dx = 10.0 / 128.0;
        let grid = GridSpec::new(dx, 2.0 * dx, t_final, params.domain_length).unwrap();
        RunConfig::new(params, grid, scheme, InitialConditionSpec::sin02(amplitude))
    }

    #[test]
    fn sin_ic_with_zero_amplitude_is_homogeneous() {
        let config = small_config(SchemeId::Upwind, 0.0, 10.0);
        let state = make_initial_state(&config.ic, &config.grid).unwrap();
        assert!(state.u_plus.iter().all(|&v| v == 1.0));
        assert!(state.u_minus.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn sin_ic_mass_follows_amplitude() {
        // ‖u(·,0)‖₁ = 20 + 5Â for the long-wave perturbation.
        let config = small_config(SchemeId::Upwind, 2.0, 10.0);
        let state = make_initial_state(&config.ic, &config.grid).unwrap();
        let l1 = l1_norm(&state.total_density(), &config.grid);
        assert!((l1 - 30.0).abs() < 1e-9, "l1 = {l1}");
    }

    #[test]
    fn random_ic_is_seed_deterministic() {
        let mut config = small_config(SchemeId::Upwind, 1.5, 10.0);
        config.ic.kind = IcKind::UniformRandom;
        config.ic.seed = 99;
        let a = make_initial_state(&config.ic, &config.grid).unwrap();
        let b = make_initial_state(&config.ic, &config.grid).unwrap();
        assert_eq!(a, b);
        // Values stay inside [2, 2 + Â)/2 per component.
        assert!(a.u_plus.iter().all(|&v| (1.0..1.75).contains(&v)));

        config.ic.seed = 100;
        let c = make_initial_state(&config.ic, &config.grid).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn custom_profile_length_is_checked() {
        let config = small_config(SchemeId::Upwind, 1.0, 10.0);
        let ic = InitialConditionSpec {
            kind: IcKind::Custom(vec![2.0; 17]),
            amplitude: 0.0,
            seed: 0,
        };
        assert!(matches!(
            make_initial_state(&ic, &config.grid),
            Err(ConfigError::ProfileLength { got: 17, .. })
        ));
    }

    #[test]
    fn zero_amplitude_run_is_immediately_steady() {
        let config = small_config(SchemeId::Qsa, 0.0, 100.0);
        let record = run_simulation(&config).unwrap();
        assert_eq!(record.verdict.stop_reason, StopReason::SteadyStateStop);
        assert_eq!(record.verdict.solution_kind, SolutionKind::SteadyState);
        assert_eq!(record.verdict.symmetry, Symmetry::Even);
        assert_eq!(record.verdict.peak_count, 0);
        assert!(record.series.samples().iter().all(|&(_, e)| e == 0.0));
        assert_eq!(record.verdict.t0, Some(1));
        // Stop at the first integer time past 1.34·t₀ = 1.34.
        assert_eq!(record.series.last().unwrap().0, 2);
    }

    #[test]
    fn identical_configs_reproduce_bitwise() {
        let config = small_config(SchemeId::QsaSuperbee, 2.5, 8.0);
        let a = run_simulation(&config).unwrap();
        let b = run_simulation(&config).unwrap();
        assert_eq!(a.final_state, b.final_state);
        assert_eq!(a.series, b.series);
        assert_eq!(a.config_hash, b.config_hash);
    }

    #[test]
    fn hash_ignores_io_knobs_but_not_physics() {
        let base = small_config(SchemeId::Upwind, 2.5, 8.0);
        let mut io_tweaked = base.clone();
        io_tweaked.thread_count = 7;
        io_tweaked.checkpoint_interval = 123;
        io_tweaked.snapshot_times = vec![1.0, 2.0];
        assert_eq!(config_hash(&base), config_hash(&io_tweaked));

        let mut other_seed = base.clone();
        other_seed.seed = 1;
        assert_ne!(config_hash(&base), config_hash(&other_seed));

        let mut other_scheme = base.clone();
        other_scheme.scheme = SchemeId::Fsm;
        assert_ne!(config_hash(&base), config_hash(&other_scheme));
    }

    #[test]
    fn mass_is_conserved_over_a_short_run() {
        let config = small_config(SchemeId::MacCormack, 2.5, 20.0);
        let initial = make_initial_state(&config.ic, &config.grid).unwrap();
        let before = initial.mass(config.grid.dx);
        let record = run_simulation(&config).unwrap();
        let after = record.final_state.mass(config.grid.dx);
        assert!(((after - before) / before).abs() < 1e-12);
    }

    #[test]
    fn snapshots_capture_requested_times() {
        let mut config = small_config(SchemeId::Upwind, 2.5, 5.0);
        config.snapshot_times = vec![0.0, 2.5, 4.0];
        let record = run_simulation(&config).unwrap();
        assert_eq!(record.snapshots.len(), 3);
        assert_eq!(record.snapshots[0].step, 0);
        for snap in &record.snapshots {
            assert!(snap.time >= snap.requested_time - 1e-9);
            assert!(snap.time - snap.requested_time < config.grid.dt);
        }
    }

    #[test]
    fn checkpoint_resume_reproduces_uninterrupted_run() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = small_config(SchemeId::QsaMc, 2.5, 6.0);
        config.checkpoint_interval = 20;

        let full = run_with_checkpoints(&config, Some(dir.path())).unwrap();
        let ckpt_path = dir.path().join("ckpt-20");
        assert!(ckpt_path.exists());

        let resumed = resume_simulation(&config, &ckpt_path).unwrap();
        assert_eq!(resumed.final_state, full.final_state);
        assert_eq!(resumed.series, full.series);
        assert_eq!(resumed.steps_taken, full.steps_taken);
        assert_eq!(resumed.verdict, full.verdict);
    }

    #[test]
    fn resume_rejects_mismatched_config() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = small_config(SchemeId::Qsa, 2.5, 6.0);
        config.checkpoint_interval = 10;
        run_with_checkpoints(&config, Some(dir.path())).unwrap();

        let mut other = config.clone();
        other.ic.amplitude = 3.0;
        let err = resume_simulation(&other, &dir.path().join("ckpt-10")).unwrap_err();
        assert!(err.to_string().contains("configuration"));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let config = small_config(SchemeId::MacCormack, 2.5, 4.0);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_simulation(&config).unwrap());
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_simulation(&config).unwrap());
        assert_eq!(one.final_state, four.final_state);
        assert_eq!(one.series, four.series);
    }

    #[test]
    fn rejects_cfl_violation() {
        let params = ModelParams::default();
        let grid = GridSpec::new(0.01, 1.0, 10.0, params.domain_length).unwrap();
        let config = RunConfig::new(params, grid, SchemeId::Upwind, InitialConditionSpec::sin02(1.0));
        assert!(matches!(
            config.validate(),
            Err(ConfigError::CflViolation { .. })
        ));
    }
}
