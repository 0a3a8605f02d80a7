//! End-to-end checks of the command-line surface and the emitted files.

use std::path::Path;
use std::process::Command;

use clap::Parser;

use hyperflock_cli::args::{parse_amplitude_list, parse_snapshot_times, Cli, Request};
use hyperflock_cli::output::format_float;
use hyperflock_core::{IcKind, SchemeId};

fn parse(args: &[&str]) -> Cli {
    let mut full = vec!["hyperflock"];
    full.extend_from_slice(args);
    Cli::parse_from(full)
}

#[test]
fn defaults_are_the_reference_setup() {
    let cli = parse(&[]);
    let Request::Run(config) = cli.request().unwrap() else {
        panic!("expected a plain run");
    };
    assert_eq!(config.scheme, SchemeId::Upwind);
    assert_eq!(config.ic.kind, IcKind::Sin02);
    assert_eq!(config.ic.amplitude, 2.5);
    assert_eq!(config.grid.dx, 0.0078125);
    assert_eq!(config.grid.dt, 0.015625);
    assert_eq!(config.grid.nx, 1280);
    assert_eq!(config.params, hyperflock_core::ModelParams::default());
    // Default snapshots: initial, halfway, final.
    let snaps = parse_snapshot_times(None, config.grid.t_final).unwrap();
    assert_eq!(snaps.times, vec![0.0, 1000.0]);
    assert!(snaps.include_final);
}

#[test]
fn reference_step_pair_has_courant_point_two() {
    let cli = parse(&[
        "--scheme",
        "qsa_mc",
        "--dx",
        "0.0078125",
        "--dt",
        "0.015625",
        "--amplitude",
        "5.0",
    ]);
    let Request::Run(config) = cli.request().unwrap() else {
        panic!("expected a plain run");
    };
    assert_eq!(config.scheme, SchemeId::QsaMc);
    let courant = config.grid.courant(config.params.gamma);
    assert!((courant - 0.2).abs() < 1e-15);
}

#[test]
fn courant_flag_sets_dt_from_dx() {
    let cli = parse(&["--dx", "0.015625", "--courant", "2"]);
    let Request::Run(config) = cli.request().unwrap() else {
        panic!("expected a plain run");
    };
    assert_eq!(config.grid.dt, 0.03125);
}

#[test]
fn cfl_violation_is_rejected_with_the_courant_number() {
    let cli = parse(&["--dt", "1.0", "--dx", "0.01"]);
    let err = cli.request().unwrap_err().to_string();
    assert!(err.contains("CFL"), "{err}");
    assert!(err.contains("10"), "{err}");
}

#[test]
fn unknown_scheme_lists_all_ten_names() {
    let err = Cli::try_parse_from(["hyperflock", "--scheme", "leapfrog"]).unwrap_err();
    let text = err.to_string();
    for scheme in SchemeId::ALL {
        assert!(text.contains(scheme.name()), "missing {scheme} in {text}");
    }
}

#[test]
fn amplitude_ranges_and_lists_parse() {
    assert_eq!(parse_amplitude_list("1,2,3.5").unwrap(), vec![1.0, 2.0, 3.5]);
    let range = parse_amplitude_list("0.1:0.5:0.1").unwrap();
    assert_eq!(range.len(), 5);
    assert!((range[4] - 0.5).abs() < 1e-12);
    assert!(parse_amplitude_list("5:1:1").is_err());
}

#[test]
fn sweep_requests_carry_the_axis() {
    let cli = parse(&["--sweep-amplitudes", "1:3:1", "--T", "10"]);
    let Request::Sweep(_, axis) = cli.request().unwrap() else {
        panic!("expected a sweep");
    };
    assert_eq!(axis.len(), 3);

    let cli = parse(&["--sweep-dx", "0.078125,0.15625", "--courant", "2", "--T", "10"]);
    let Request::Sweep(_, axis) = cli.request().unwrap() else {
        panic!("expected a sweep");
    };
    assert_eq!(axis.len(), 2);

    let cli = parse(&["--sweep-dx", "0.078125", "--T", "10"]);
    assert!(cli.request().unwrap_err().to_string().contains("--courant"));
}

#[test]
fn rendered_arguments_round_trip() {
    let sources = [
        vec!["--scheme", "qsa_superbee", "--amplitude", "7.25", "--T", "50"],
        vec!["--ic", "sin04", "--dx", "0.078125", "--courant", "2", "--T", "11.5"],
        vec![
            "--ic",
            "rand",
            "--seed",
            "123",
            "--tol-symmetry",
            "0.01",
            "--stop-factor",
            "1.5",
            "--checkpoint-every",
            "64",
            "--T",
            "10",
        ],
    ];
    for args in sources {
        let Request::Run(config) = parse(&args).request().unwrap() else {
            panic!("expected a plain run");
        };
        let rendered = Cli::render_args(&config, None);
        let rendered_refs: Vec<&str> = rendered.iter().map(String::as_str).collect();
        let Request::Run(reparsed) = parse(&rendered_refs).request().unwrap() else {
            panic!("expected a plain run");
        };
        assert_eq!(reparsed, config, "args: {args:?}");
    }
}

#[test]
fn formatted_floats_reparse_to_identical_bits() {
    let values = [
        0.1,
        2.0 / 3.0,
        1e-300,
        6.02214076e23,
        -0.0078125,
        f64::MIN_POSITIVE,
        1.0 + f64::EPSILON,
    ];
    for v in values {
        let s = format_float(v);
        let back: f64 = s.parse().unwrap();
        assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s}");
    }
}

#[test]
fn params_file_overrides_and_derives_kernel_widths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.toml");
    std::fs::write(&path, "q_a = 1.3\ns_a = 2.0\nlambda1 = 0.4\n").unwrap();
    let cli = parse(&["--params", path.to_str().unwrap(), "--T", "10"]);
    let Request::Run(config) = cli.request().unwrap() else {
        panic!("expected a plain run");
    };
    assert_eq!(config.params.q_a, 1.3);
    assert_eq!(config.params.s_a, 2.0);
    assert_eq!(config.params.m_a, 0.25); // s_a/8 follows the override
    assert_eq!(config.params.lambda1, 0.4);
    assert_eq!(config.params.q_r, 2.2); // untouched default

    std::fs::write(&path, "not_a_param = 1\n").unwrap();
    assert!(parse(&["--params", path.to_str().unwrap()]).request().is_err());
}

#[test]
fn custom_profile_files_load_and_validate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.txt");
    let nx = 128;
    let mut text = String::from("# total density\n");
    for i in 0..nx {
        text.push_str(&format!("{}\n", 2.0 + 0.1 * (i as f64 * 0.3).sin()));
    }
    std::fs::write(&path, text).unwrap();

    let ic = format!("file:{}", path.display());
    let cli = parse(&["--ic", &ic, "--dx", "0.078125", "--courant", "2", "--T", "10"]);
    let Request::Run(config) = cli.request().unwrap() else {
        panic!("expected a plain run");
    };
    assert!(matches!(&config.ic.kind, IcKind::Custom(v) if v.len() == nx));

    // Wrong length against a different grid.
    let cli = parse(&["--ic", &ic, "--dx", "0.15625", "--courant", "2", "--T", "10"]);
    assert!(cli.request().is_err());
}

fn run_binary(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hyperflock"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

/// Walks the emitted verdict against docs/verdict.schema.json: field
/// presence, types and enum membership.
fn check_verdict_document(doc: &serde_json::Value) {
    let schema_text = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/verdict.schema.json"),
    )
    .expect("schema document is in the repo");
    let schema: serde_json::Value = serde_json::from_str(&schema_text).unwrap();

    for field in schema["required"].as_array().unwrap() {
        let name = field.as_str().unwrap();
        assert!(doc.get(name).is_some(), "verdict.json lacks `{name}`");
    }
    let scheme_names: Vec<&str> = schema["properties"]["scheme"]["enum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(scheme_names.contains(&doc["scheme"].as_str().unwrap()));

    let verdict = &doc["verdict"];
    for (field, allowed) in [
        ("stop_reason", vec!["final_time_reached", "steady_state_stop"]),
        (
            "solution_kind",
            vec!["transient_only", "steady_state", "non_convergent", "undetermined"],
        ),
        ("symmetry", vec!["odd", "even", "non_symmetric"]),
    ] {
        let value = verdict[field].as_str().unwrap();
        assert!(allowed.contains(&value), "{field} = {value}");
    }
    assert!(verdict["peak_count"].is_u64());
    assert!(verdict["aggregation_count"].is_u64());
    assert!(doc["config_hash"].as_str().unwrap().len() == 16);
    assert_eq!(doc["kernel_mass_defects"].as_array().unwrap().len(), 3);
}

#[test]
fn end_to_end_run_emits_the_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_binary(
        &[
            "--dx", "0.078125", "--courant", "2", "--T", "20", "--amplitude", "2.5",
            "--out-dir", "out",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let hash_dirs: Vec<_> = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(hash_dirs.len(), 1);
    let run_dir = &hash_dirs[0];
    let hash = run_dir.file_name().unwrap().to_str().unwrap().to_string();
    assert_eq!(hash.len(), 16);

    // Error series: hash header, t,E rows at integer times, 17-digit floats.
    let series = std::fs::read_to_string(run_dir.join("error_series.csv")).unwrap();
    assert!(series.starts_with(&format!("# config_hash = {hash}")));
    let data_lines: Vec<&str> = series.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data_lines[0], "t,E");
    assert_eq!(data_lines.len() - 1, 20); // one sample per integer time
    let first: Vec<&str> = data_lines[1].split(',').collect();
    assert_eq!(first[0], "1");
    let e: f64 = first[1].parse().unwrap();
    assert!(e.is_finite());
    assert!(first[1].contains('e') && first[1].len() >= 18, "{}", first[1]);

    // Profile: default three blocks (t = 0, T/2, stop).
    let profile = std::fs::read_to_string(run_dir.join("profile.csv")).unwrap();
    let blocks = profile.lines().filter(|l| l.starts_with("# t = ")).count();
    assert_eq!(blocks, 3);

    // Verdict document validates against the published schema.
    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run_dir.join("verdict.json")).unwrap())
            .unwrap();
    check_verdict_document(&verdict);
    assert_eq!(verdict["config_hash"].as_str().unwrap(), hash);

    // Emission is an idempotent overwrite: a rerun leaves identical series.
    let rerun = run_binary(
        &[
            "--dx", "0.078125", "--courant", "2", "--T", "20", "--amplitude", "2.5",
            "--out-dir", "out",
        ],
        dir.path(),
    );
    assert!(rerun.status.success());
    let series_again = std::fs::read_to_string(run_dir.join("error_series.csv")).unwrap();
    assert_eq!(series, series_again);
}

#[test]
fn zero_amplitude_run_emits_a_valid_short_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_binary(
        &[
            "--dx", "0.078125", "--courant", "2", "--T", "50", "--amplitude", "0",
            "--out-dir", "out",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let hash_dir = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let series = std::fs::read_to_string(hash_dir.join("error_series.csv")).unwrap();
    let data: Vec<&str> = series.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "t,E");
    assert!(data.len() >= 2, "header plus at least the first sample");
    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(hash_dir.join("verdict.json")).unwrap())
            .unwrap();
    assert_eq!(verdict["verdict"]["solution_kind"], "steady_state");
    assert_eq!(verdict["verdict"]["stop_reason"], "steady_state_stop");
}

#[test]
fn sweep_emits_one_row_per_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_binary(
        &[
            "--dx", "0.078125", "--courant", "2", "--T", "10",
            "--sweep-amplitudes", "0.5,1.5,2.5", "--out-dir", "out",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sweep_dirs: Vec<_> = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with("sweep-"))
        .collect();
    assert_eq!(sweep_dirs.len(), 1);
    let table = std::fs::read_to_string(sweep_dirs[0].join("sweep.csv")).unwrap();
    let rows: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(rows[0].starts_with("index,amplitude,dx,dt,config_hash"));
    assert_eq!(rows.len() - 1, 3);
    // ‖u‖₁ column tracks 20 + 5Â.
    let second: Vec<&str> = rows[2].split(',').collect();
    let l1: f64 = second[10].parse().unwrap();
    assert!((l1 - 27.5).abs() < 1e-6, "l1 = {l1}");
}

#[test]
fn checkpoint_resume_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--dx", "0.078125", "--courant", "2", "--T", "20", "--amplitude", "2.5",
        "--checkpoint-every", "32", "--out-dir", "out",
    ];
    let out = run_binary(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let run_dir = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let final_series = std::fs::read_to_string(run_dir.join("error_series.csv")).unwrap();
    let ckpt = run_dir.join("ckpt-32");
    assert!(ckpt.exists(), "checkpoint written under <out-dir>/<hash>/");

    let mut resume_args: Vec<&str> = args.to_vec();
    resume_args.push("--resume");
    let ckpt_str = ckpt.to_str().unwrap();
    resume_args.push(ckpt_str);
    let out = run_binary(&resume_args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let resumed_series = std::fs::read_to_string(run_dir.join("error_series.csv")).unwrap();
    assert_eq!(final_series, resumed_series);
}
