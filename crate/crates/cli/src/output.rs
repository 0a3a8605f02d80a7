//! Analysis-ready output files: error traces, profiles, verdicts and sweep
//! tables. Every file starts with `#`-prefixed metadata lines carrying the
//! configuration hash; every floating value is printed with 17 significant
//! digits so it re-parses to the identical bits.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use hyperflock_core::{ProfileSnapshot, RunConfig, RunRecord, SweepAxis, SweepRow};

/// 17-significant-digit scientific form; round-trips to the same f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn create(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::File::create(path).with_context(|| format!("writing {}", path.display()))
}

fn metadata_header(out: &mut impl Write, record_hash: &str, config: &RunConfig) -> Result<()> {
    writeln!(out, "# config_hash = {record_hash}")?;
    writeln!(out, "# scheme = {}", config.scheme)?;
    writeln!(
        out,
        "# dx = {}, dt = {}, T = {}",
        format_float(config.grid.dx),
        format_float(config.grid.dt),
        format_float(config.grid.t_final)
    )?;
    writeln!(out, "# amplitude = {}", format_float(config.ic.amplitude))?;
    Ok(())
}

/// `<out-dir>/<hash>/` — where all files of one run live.
pub fn run_dir(out_dir: &Path, record: &RunRecord) -> PathBuf {
    out_dir.join(&record.config_hash)
}

/// Writes `error_series.csv`: one `t,E` row per recorded sample.
pub fn emit_error_series(dir: &Path, config: &RunConfig, record: &RunRecord) -> Result<PathBuf> {
    let path = dir.join("error_series.csv");
    let mut out = std::io::BufWriter::new(create(&path)?);
    metadata_header(&mut out, &record.config_hash, config)?;
    writeln!(out, "t,E")?;
    for &(t, e) in record.series.samples() {
        writeln!(out, "{t},{}", format_float(e))?;
    }
    out.flush()?;
    Ok(path)
}

fn profile_block(
    out: &mut impl Write,
    label: f64,
    step: u64,
    dx: f64,
    u_plus: &[f64],
    u_minus: &[f64],
) -> Result<()> {
    writeln!(out, "# t = {} (step {step})", format_float(label))?;
    writeln!(out, "x,u_plus,u_minus,u")?;
    for i in 0..u_plus.len() {
        let x = i as f64 * dx;
        writeln!(
            out,
            "{},{},{},{}",
            format_float(x),
            format_float(u_plus[i]),
            format_float(u_minus[i]),
            format_float(u_plus[i] + u_minus[i])
        )?;
    }
    Ok(())
}

/// Writes `profile.csv`: one block per captured snapshot, plus the final
/// state when requested.
pub fn emit_profiles(
    dir: &Path,
    config: &RunConfig,
    record: &RunRecord,
    include_final: bool,
) -> Result<PathBuf> {
    let path = dir.join("profile.csv");
    let mut out = std::io::BufWriter::new(create(&path)?);
    metadata_header(&mut out, &record.config_hash, config)?;
    for ProfileSnapshot {
        step,
        time,
        u_plus,
        u_minus,
        ..
    } in &record.snapshots
    {
        profile_block(&mut out, *time, *step, config.grid.dx, u_plus, u_minus)?;
    }
    if include_final {
        profile_block(
            &mut out,
            record.stop_time,
            record.steps_taken,
            config.grid.dx,
            &record.final_state.u_plus,
            &record.final_state.u_minus,
        )?;
    }
    out.flush()?;
    Ok(path)
}

#[derive(Serialize)]
struct Provenance<'a> {
    seed: u64,
    version: &'static str,
    threads: usize,
    wall_ms: u128,
    command: &'a [String],
}

#[derive(Serialize)]
struct VerdictDocument<'a> {
    config_hash: &'a str,
    scheme: String,
    verdict: &'a hyperflock_core::RunVerdict,
    stop_time: f64,
    steps_taken: u64,
    final_l1: f64,
    health: &'a hyperflock_core::HealthFlags,
    kernel_mass_defects: [f64; 3],
    provenance: Provenance<'a>,
    config: &'a RunConfig,
}

/// Writes `verdict.json`: the machine-readable run outcome. The layout is
/// documented by `docs/verdict.schema.json`.
pub fn emit_verdict(
    dir: &Path,
    config: &RunConfig,
    record: &RunRecord,
    command: &[String],
) -> Result<PathBuf> {
    let path = dir.join("verdict.json");
    let doc = VerdictDocument {
        config_hash: &record.config_hash,
        scheme: record.scheme.to_string(),
        verdict: &record.verdict,
        stop_time: record.stop_time,
        steps_taken: record.steps_taken,
        final_l1: record.final_l1,
        health: &record.health,
        kernel_mass_defects: record.kernel_mass_defects,
        provenance: Provenance {
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION"),
            threads: config.thread_count,
            wall_ms: record.wall_ms,
            command,
        },
        config,
    };
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(path)
}

/// Writes the sweep table: one row per requested configuration, in request
/// order, with the symmetry verdict and the L¹ norm of the final profile.
pub fn emit_sweep_table(
    out_dir: &Path,
    template_hash: &str,
    template: &RunConfig,
    axis: &SweepAxis,
    rows: &[SweepRow],
) -> Result<PathBuf> {
    let path = out_dir.join(format!("sweep-{template_hash}")).join("sweep.csv");
    let mut out = std::io::BufWriter::new(create(&path)?);
    writeln!(out, "# config_hash = {template_hash}")?;
    writeln!(out, "# scheme = {}", template.scheme)?;
    writeln!(
        out,
        "# axis = {}",
        match axis {
            SweepAxis::Amplitudes(_) => "amplitudes",
            SweepAxis::SpaceTimeSteps(_) => "space_time_steps",
        }
    )?;
    writeln!(
        out,
        "index,amplitude,dx,dt,config_hash,stop_reason,solution_kind,symmetry,\
         peak_count,aggregation_count,l1_norm,stop_time,error"
    )?;
    for row in rows {
        let (stop_reason, kind, symmetry, peaks, aggs) = match &row.verdict {
            Some(v) => (
                serde_token(&v.stop_reason),
                serde_token(&v.solution_kind),
                serde_token(&v.symmetry),
                v.peak_count.to_string(),
                v.aggregation_count.to_string(),
            ),
            None => Default::default(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.index,
            format_float(row.amplitude),
            format_float(row.dx),
            format_float(row.dt),
            row.config_hash,
            stop_reason,
            kind,
            symmetry,
            peaks,
            aggs,
            row.final_l1.map(format_float).unwrap_or_default(),
            row.stop_time.map(format_float).unwrap_or_default(),
            row.error.as_deref().unwrap_or_default().replace(',', ";"),
        )?;
    }
    out.flush()?;
    Ok(path)
}

/// snake_case token of a fieldless enum value, via its serde form.
fn serde_token<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}
