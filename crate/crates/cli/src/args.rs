//! Command-line surface: flags, defaults and their translation into a
//! validated [`RunConfig`] or sweep request.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde::Deserialize;

use hyperflock_core::{
    DiagnosticThresholds, GridSpec, IcKind, InitialConditionSpec, ModelParams, RunConfig, SchemeId,
    SweepAxis,
};

/// Solver CLI for the two-speed nonlocal aggregation model. With no flags it
/// runs the reference setup: upwind scheme, sin02 initial condition with
/// amplitude 2.5, dx = 2⁻⁷, dt = 2⁻⁶, T = 2000.
#[derive(Debug, Parser)]
#[command(name = "hyperflock", version)]
pub struct Cli {
    /// Scheme: upwind, maccormack, fsm, qsa, qsa_center, qsa_bw, qsa_lw,
    /// qsa_minmod, qsa_superbee, qsa_mc.
    #[arg(long, default_value = "upwind", value_parser = parse_scheme)]
    pub scheme: SchemeId,

    /// Space step.
    #[arg(long, default_value_t = 0.0078125)]
    pub dx: f64,

    /// Time step. Mutually exclusive with --courant.
    #[arg(long, conflicts_with = "courant")]
    pub dt: Option<f64>,

    /// Time step as a multiple of dx: dt = COURANT·dx (e.g. 2 for dt = 2dx).
    #[arg(long)]
    pub courant: Option<f64>,

    /// Initial perturbation amplitude Â.
    #[arg(long, default_value_t = 2.5)]
    pub amplitude: f64,

    /// Initial condition: sin02 | sin04 | rand | file:PATH.
    #[arg(long, default_value = "sin02")]
    pub ic: String,

    /// Final time T.
    #[arg(long = "T", default_value_t = 2000.0)]
    pub t_final: f64,

    /// Seed for the random initial condition.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output directory; files land in <out-dir>/<config-hash>/.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,

    /// Worker threads (0 = one per core). Results do not depend on this.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,

    /// Steps between checkpoint snapshots (0 = no checkpoints).
    #[arg(long = "checkpoint-every", default_value_t = 0)]
    pub checkpoint_every: u64,

    /// Resume from a checkpoint file written by an earlier run.
    #[arg(long)]
    pub resume: Option<PathBuf>,

    /// Amplitude sweep: "start:end:step" (inclusive) or a comma list.
    #[arg(long = "sweep-amplitudes")]
    pub sweep_amplitudes: Option<String>,

    /// Space-step sweep: comma list of dx values; requires --courant to fix
    /// dt = courant·dx per entry.
    #[arg(long = "sweep-dx", conflicts_with = "sweep_amplitudes")]
    pub sweep_dx: Option<String>,

    /// TOML file overriding the default model parameters.
    #[arg(long)]
    pub params: Option<PathBuf>,

    /// Profile snapshot times: comma list of times and/or "stop" for the
    /// final state. Default: 0,T/2,stop.
    #[arg(long = "snapshot-times")]
    pub snapshot_times: Option<String>,

    /// Print one "t E" line every N recorded samples (0 = quiet).
    #[arg(long, default_value_t = 0)]
    pub progress: u64,

    /// Symmetry tolerance (relative reflection residual).
    #[arg(long = "tol-symmetry")]
    pub tol_symmetry: Option<f64>,

    /// Peak margin as a fraction of the profile's range above its baseline.
    #[arg(long = "tol-peak-margin")]
    pub tol_peak_margin: Option<f64>,

    /// Trailing fraction of E(t) examined for non-convergence.
    #[arg(long = "tol-tail-fraction")]
    pub tol_tail_fraction: Option<f64>,

    /// Largest E_max/E_min ratio still counted as a narrow band.
    #[arg(long = "tol-band-ratio")]
    pub tol_band_ratio: Option<f64>,

    /// Most negative admissible ln-E trend for the non-convergence probe.
    #[arg(long = "tol-log-slope")]
    pub tol_log_slope: Option<f64>,

    /// Stop-time factor applied to t₀.
    #[arg(long = "stop-factor")]
    pub stop_factor: Option<f64>,
}

/// What a parsed command line asks for.
#[derive(Debug, Clone, PartialEq)]
pub enum Request {
    Run(RunConfig),
    Sweep(RunConfig, SweepAxis),
}

fn parse_scheme(s: &str) -> Result<SchemeId, String> {
    s.parse().map_err(|e: hyperflock_core::scheme::UnknownScheme| e.to_string())
}

/// Model parameters as they appear in a TOML override file. Absent keys fall
/// back to the reference values; absent kernel widths follow m_j = s_j/8.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    gamma: Option<f64>,
    lambda1: Option<f64>,
    lambda2: Option<f64>,
    y0: Option<f64>,
    q_a: Option<f64>,
    q_r: Option<f64>,
    q_al: Option<f64>,
    s_a: Option<f64>,
    s_r: Option<f64>,
    s_al: Option<f64>,
    m_a: Option<f64>,
    m_r: Option<f64>,
    m_al: Option<f64>,
    total_density: Option<f64>,
    domain_length: Option<f64>,
}

fn apply_params_file(text: &str) -> Result<ModelParams> {
    let file: ParamsFile = toml::from_str(text).context("parsing params file")?;
    let mut p = ModelParams::default();
    let set = |target: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *target = v;
        }
    };
    set(&mut p.gamma, file.gamma);
    set(&mut p.lambda1, file.lambda1);
    set(&mut p.lambda2, file.lambda2);
    set(&mut p.y0, file.y0);
    set(&mut p.q_a, file.q_a);
    set(&mut p.q_r, file.q_r);
    set(&mut p.q_al, file.q_al);
    set(&mut p.s_a, file.s_a);
    set(&mut p.s_r, file.s_r);
    set(&mut p.s_al, file.s_al);
    p.m_a = file.m_a.unwrap_or(p.s_a / 8.0);
    p.m_r = file.m_r.unwrap_or(p.s_r / 8.0);
    p.m_al = file.m_al.unwrap_or(p.s_al / 8.0);
    set(&mut p.total_density, file.total_density);
    set(&mut p.domain_length, file.domain_length);
    Ok(p)
}

fn parse_ic(spec: &str, amplitude: f64, seed: u64) -> Result<InitialConditionSpec> {
    let kind = match spec {
        "sin02" => IcKind::Sin02,
        "sin04" => IcKind::Sin04,
        "rand" => IcKind::UniformRandom,
        other => {
            if let Some(path) = other.strip_prefix("file:") {
                IcKind::Custom(load_profile(Path::new(path))?)
            } else {
                bail!("unknown initial condition `{other}`; use sin02, sin04, rand or file:PATH");
            }
        }
    };
    Ok(InitialConditionSpec {
        kind,
        amplitude,
        seed,
    })
}

/// Reads a total-density profile: one value per line, `#` comments allowed.
pub fn load_profile(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading profile {}", path.display()))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .with_context(|| format!("{}:{}: not a number", path.display(), lineno + 1))?;
        values.push(v);
    }
    Ok(values)
}

/// Parses "a:b:step" (inclusive) or a comma list into amplitudes.
pub fn parse_amplitude_list(spec: &str) -> Result<Vec<f64>> {
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            bail!("range must be start:end:step, got `{spec}`");
        }
        let start: f64 = parts[0].parse().context("range start")?;
        let end: f64 = parts[1].parse().context("range end")?;
        let step: f64 = parts[2].parse().context("range step")?;
        if !(step > 0.0) || end < start {
            bail!("range `{spec}` is empty or has a non-positive step");
        }
        let mut values = Vec::new();
        let mut k = 0u64;
        loop {
            let v = start + k as f64 * step;
            if v > end + 0.5 * step {
                break;
            }
            values.push(v.min(end));
            k += 1;
        }
        Ok(values)
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().with_context(|| format!("amplitude `{s}`")))
            .collect()
    }
}

fn parse_float_list(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("value `{s}`")))
        .collect()
}

/// Snapshot times requested on the command line; `include_final` stands for
/// the "stop" entry (the final state is emitted as its own profile block).
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotRequest {
    pub times: Vec<f64>,
    pub include_final: bool,
}

pub fn parse_snapshot_times(spec: Option<&str>, t_final: f64) -> Result<SnapshotRequest> {
    match spec {
        None => Ok(SnapshotRequest {
            times: vec![0.0, t_final / 2.0],
            include_final: true,
        }),
        Some(s) => {
            let mut times = Vec::new();
            let mut include_final = false;
            for item in s.split(',') {
                let item = item.trim();
                if item.eq_ignore_ascii_case("stop") {
                    include_final = true;
                } else {
                    times.push(item.parse::<f64>().with_context(|| format!("time `{item}`"))?);
                }
            }
            Ok(SnapshotRequest {
                times,
                include_final,
            })
        }
    }
}

impl Cli {
    pub fn thresholds(&self) -> DiagnosticThresholds {
        let mut t = DiagnosticThresholds::default();
        if let Some(v) = self.tol_symmetry {
            t.symmetry_tol = v;
        }
        if let Some(v) = self.tol_peak_margin {
            t.peak_margin_rel = v;
        }
        if let Some(v) = self.tol_tail_fraction {
            t.tail_fraction = v;
        }
        if let Some(v) = self.tol_band_ratio {
            t.band_ratio = v;
        }
        if let Some(v) = self.tol_log_slope {
            t.log_slope_threshold = v;
        }
        if let Some(v) = self.stop_factor {
            t.stop_factor = v;
        }
        t
    }

    /// Builds the validated run or sweep request.
    pub fn request(&self) -> Result<Request> {
        let params = match &self.params {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading params {}", path.display()))?;
                apply_params_file(&text)?
            }
            None => ModelParams::default(),
        };
        let dt = match (self.dt, self.courant) {
            (Some(dt), _) => dt,
            (None, Some(c)) => c * self.dx,
            (None, None) => 0.015625,
        };
        let grid = GridSpec::new(self.dx, dt, self.t_final, params.domain_length)?;
        let ic = parse_ic(&self.ic, self.amplitude, self.seed)?;
        let snapshots = parse_snapshot_times(self.snapshot_times.as_deref(), self.t_final)?;

        let mut config = RunConfig::new(params, grid, self.scheme, ic);
        config.thresholds = self.thresholds();
        config.seed = self.seed;
        config.checkpoint_interval = self.checkpoint_every;
        config.thread_count = self.threads;
        config.snapshot_times = snapshots.times;
        config.validate()?;

        if let Some(spec) = &self.sweep_amplitudes {
            let amplitudes = parse_amplitude_list(spec)?;
            if amplitudes.is_empty() {
                bail!("amplitude sweep is empty");
            }
            return Ok(Request::Sweep(config, SweepAxis::Amplitudes(amplitudes)));
        }
        if let Some(spec) = &self.sweep_dx {
            let Some(c) = self.courant else {
                bail!("--sweep-dx needs --courant to fix dt = courant*dx per entry");
            };
            let steps: Vec<(f64, f64)> =
                parse_float_list(spec)?.into_iter().map(|dx| (dx, c * dx)).collect();
            if steps.is_empty() {
                bail!("space-step sweep is empty");
            }
            return Ok(Request::Sweep(config, SweepAxis::SpaceTimeSteps(steps)));
        }
        Ok(Request::Run(config))
    }

    /// Command-line form of a configuration built by [`Cli::request`];
    /// parsing the rendered arguments reproduces the configuration. Custom
    /// profile initial conditions are rendered as their file path, so the
    /// original path must be supplied.
    pub fn render_args(config: &RunConfig, ic_path: Option<&Path>) -> Vec<String> {
        let mut args = vec![
            "--scheme".into(),
            config.scheme.to_string(),
            "--dx".into(),
            format!("{:.17e}", config.grid.dx),
            "--dt".into(),
            format!("{:.17e}", config.grid.dt),
            "--T".into(),
            format!("{:.17e}", config.grid.t_final),
            "--amplitude".into(),
            format!("{:.17e}", config.ic.amplitude),
            "--seed".into(),
            config.seed.to_string(),
        ];
        let ic = match &config.ic.kind {
            IcKind::Sin02 => "sin02".to_string(),
            IcKind::Sin04 => "sin04".to_string(),
            IcKind::UniformRandom => "rand".to_string(),
            IcKind::Custom(_) => format!(
                "file:{}",
                ic_path.map(|p| p.display().to_string()).unwrap_or_default()
            ),
        };
        args.push("--ic".into());
        args.push(ic);
        let defaults = DiagnosticThresholds::default();
        let t = &config.thresholds;
        let mut push_tol = |flag: &str, value: f64, default: f64| {
            if value != default {
                args.push(flag.into());
                args.push(format!("{value:.17e}"));
            }
        };
        push_tol("--tol-symmetry", t.symmetry_tol, defaults.symmetry_tol);
        push_tol("--tol-peak-margin", t.peak_margin_rel, defaults.peak_margin_rel);
        push_tol("--tol-tail-fraction", t.tail_fraction, defaults.tail_fraction);
        push_tol("--tol-band-ratio", t.band_ratio, defaults.band_ratio);
        push_tol("--tol-log-slope", t.log_slope_threshold, defaults.log_slope_threshold);
        push_tol("--stop-factor", t.stop_factor, defaults.stop_factor);
        if config.checkpoint_interval > 0 {
            args.push("--checkpoint-every".into());
            args.push(config.checkpoint_interval.to_string());
        }
        if config.thread_count > 0 {
            args.push("--threads".into());
            args.push(config.thread_count.to_string());
        }
        if config.snapshot_times != vec![0.0, config.grid.t_final / 2.0] {
            let mut items: Vec<String> = config
                .snapshot_times
                .iter()
                .map(|v| format!("{v:.17e}"))
                .collect();
            items.push("stop".into());
            args.push("--snapshot-times".into());
            args.push(items.join(","));
        }
        args
    }
}
