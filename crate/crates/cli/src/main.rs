use anyhow::{Context, Result};
use clap::Parser;

use hyperflock_cli::args::{parse_snapshot_times, Cli, Request};
use hyperflock_cli::output;
use hyperflock_core::{
    config_hash, resume_with_observer, run_with_observer, sweep, RunConfig, RunRecord,
};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: &Cli) -> Result<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let command: Vec<String> = std::env::args().collect();

    match cli.request()? {
        Request::Run(config) => {
            let record = execute(cli, &config)?;
            report(cli, &config, &record, &command)
        }
        Request::Sweep(template, axis) => {
            let template_hash = config_hash(&template);
            let rows = sweep(&template, &axis);
            let path =
                output::emit_sweep_table(&cli.out_dir, &template_hash, &template, &axis, &rows)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            println!(
                "sweep: {} runs ({} failed) -> {}",
                rows.len(),
                failed,
                path.display()
            );
            Ok(())
        }
    }
}

fn execute(cli: &Cli, config: &RunConfig) -> Result<RunRecord> {
    let hash = config_hash(config);
    let ckpt_dir = cli.out_dir.join(&hash);
    let every = cli.progress;
    let mut observer = move |t: u64, e: f64| {
        if every > 0 && t % every == 0 {
            println!("t = {t}  E = {e:.3e}");
        }
    };
    let record = match &cli.resume {
        Some(snapshot) => resume_with_observer(config, snapshot, &mut observer)?,
        None => {
            let dir = (config.checkpoint_interval > 0).then_some(ckpt_dir.as_path());
            run_with_observer(config, dir, &mut observer)?
        }
    };
    Ok(record)
}

fn report(cli: &Cli, config: &RunConfig, record: &RunRecord, command: &[String]) -> Result<()> {
    let dir = output::run_dir(&cli.out_dir, record);
    let snapshots = parse_snapshot_times(cli.snapshot_times.as_deref(), cli.t_final)?;
    output::emit_error_series(&dir, config, record)?;
    output::emit_profiles(&dir, config, record, snapshots.include_final)?;
    output::emit_verdict(&dir, config, record, command)?;

    let v = &record.verdict;
    println!(
        "{}: {:?} / {:?} ({:?}, {} peaks, {} aggregations) after {} steps (t = {}), outputs in {}",
        record.scheme,
        v.stop_reason,
        v.solution_kind,
        v.symmetry,
        v.peak_count,
        v.aggregation_count,
        record.steps_taken,
        record.stop_time,
        dir.display()
    );
    if let Some((step, cell)) = record.health.nan_abort {
        eprintln!("warning: aborted on a non-finite value at step {step}, cell {cell}");
    }
    if let Some(step) = record.health.first_negative_step {
        eprintln!("warning: density first went negative at step {step}");
    }
    Ok(())
}
