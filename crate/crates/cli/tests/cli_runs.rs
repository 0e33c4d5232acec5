//! End-to-end checks of the command-line surface: output formats, exit
//! codes, argument validation, and schema conformance.

mod common;

use common::{assert_matches_schema, run, tmp_path};

fn read(path: &str) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("cannot read {path}: {e}"))
}

#[test]
fn capacity_curve_hits_known_value_at_ln2() {
    let out = tmp_path("cap_ln2.csv");
    let status = run(&[
        "capacity-curve",
        "--n", "10",
        "--gamma", "1",
        "--nbar", "0",
        "--t-max", "1.3862943611198906",
        "--steps", "3",
        "--units", "nats",
        "--output", &out,
    ]);
    assert!(status.status.success());
    let text = read(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,I_twin,I_lossy_formula,I_compensated,I_coherent_ref"
    );
    // Row at t = ln 2: I_lossy_formula = ln 21.
    let row: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
    let lossy: f64 = row[2].parse().unwrap();
    assert!((lossy - 21.0_f64.ln()).abs() < 1e-9, "got {lossy}");
    // With K = 0 and λ defaulted to N/(N+1), the generic channel formula
    // and the closed lossy form are two routes to the same number.
    for line in text.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cells[1] - cells[2]).abs() < 1e-10, "I_twin vs I_lossy in {line}");
    }
    // RFC 4180 line endings.
    assert!(text.contains("\r\n"));
}

#[test]
fn capacity_curve_zero_photons_is_all_zero() {
    let out = tmp_path("cap_zero.csv");
    let status = run(&[
        "capacity-curve",
        "--n", "0",
        "--gamma", "1",
        "--t-max", "2",
        "--steps", "5",
        "--output", &out,
    ]);
    assert!(status.status.success());
    for line in read(&out).lines().skip(1) {
        for cell in line.split(',').skip(1) {
            assert_eq!(cell, "0", "nonzero info column in {line}");
        }
    }
}

#[test]
fn capacity_curve_bits_conversion() {
    let nats_path = tmp_path("cap_nats.csv");
    let bits_path = tmp_path("cap_bits.csv");
    for (units, path) in [("nats", &nats_path), ("bits", &bits_path)] {
        let status = run(&[
            "capacity-curve",
            "--n", "1",
            "--gamma", "1",
            "--t-max", "1",
            "--steps", "3",
            "--units", units,
            "--output", path,
        ]);
        assert!(status.status.success());
    }
    let nats: Vec<f64> = read(&nats_path).lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    let bits: Vec<f64> = read(&bits_path).lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    // Values round-trip through 12 significant digits.
    for (n, b) in nats.iter().zip(&bits).skip(1) {
        assert!((b - n / std::f64::consts::LN_2).abs() < 1e-10 * b.abs().max(1.0));
    }
}

#[test]
fn gamma_normalized_times_are_rate_invariant() {
    // With --gamma-normalized the sweep is in Γt, so the information
    // columns do not depend on the physical rate.
    let fast = tmp_path("cap_g2.csv");
    let slow = tmp_path("cap_g05.csv");
    for (gamma, path) in [("2", &fast), ("0.5", &slow)] {
        let status = run(&[
            "capacity-curve",
            "--n", "10",
            "--gamma", gamma,
            "--t-max", "1.3862943611198906",
            "--steps", "3",
            "--gamma-normalized",
            "--output", path,
        ]);
        assert!(status.status.success());
    }
    assert_eq!(read(&fast), read(&slow));
    // Row at Γt = ln 2 still lands on ln 21.
    let row: Vec<f64> = read(&fast).lines().nth(2).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((row[2] - 21.0_f64.ln()).abs() < 1e-9);

    // Same invariance for the evolution series.
    let ev_fast = tmp_path("ev_g2.csv");
    let ev_slow = tmp_path("ev_g05.csv");
    for (gamma, k, path) in [("2", "1", &ev_fast), ("0.5", "0.25", &ev_slow)] {
        let status = run(&[
            "evolve",
            "--lambda", "0.5",
            "--v", "0.5",
            "--w", "0.5",
            "--gamma", gamma,
            "--k", k,
            "--t-max", "1",
            "--steps", "4",
            "--gamma-normalized",
            "--output", path,
        ]);
        assert!(status.status.success());
    }
    assert_eq!(read(&ev_fast), read(&ev_slow));
}

#[test]
fn equivalence_report_passes_and_validates() {
    let out = tmp_path("eq_pass.json");
    let status = run(&[
        "equivalence-report",
        "--lambda", "0.5",
        "--z", "1+1i",
        "--gamma", "1",
        "--t", "0.5",
        "--output", &out,
    ]);
    assert!(status.status.success());
    let text = read(&out);
    assert_matches_schema("docs/equivalence_report.schema.json", &text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "pass");
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn equivalence_report_failure_still_writes_report() {
    let out = tmp_path("eq_fail.json");
    let status = run(&[
        "equivalence-report",
        "--lambda", "0.5",
        "--z", "2",
        "--gamma", "1",
        "--t", "0.5",
        "--threshold", "1e-18",
        "--output", &out,
    ]);
    assert_eq!(status.status.code(), Some(1));
    let text = read(&out);
    assert_matches_schema("docs/equivalence_report.schema.json", &text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "fail");
}

#[test]
fn phase_sensitivity_approaches_asymptote() {
    let out = tmp_path("phase.csv");
    let status = run(&[
        "phase-sensitivity",
        "--nbar-min", "50",
        "--nbar-max", "400",
        "--points", "3",
        "--output", &out,
    ]);
    assert!(status.status.success());
    let text = read(&out);
    assert_eq!(text.lines().next().unwrap(), "nbar,delta_phi,delta_phi_nbar");
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((last[2] - std::f64::consts::FRAC_1_SQRT_2).abs() / std::f64::consts::FRAC_1_SQRT_2 < 0.01);
}

#[test]
fn oracle_check_passes_and_validates() {
    let out = tmp_path("oracle.json");
    let status = run(&[
        "oracle-check",
        "--lambda", "0.4",
        "--z", "0.5+0.25i",
        "--gamma", "1",
        "--k", "0.5",
        "--t", "0.3",
        "--n-max", "18",
        "--output", &out,
    ]);
    assert!(status.status.success());
    let text = read(&out);
    assert_matches_schema("docs/oracle_check.schema.json", &text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "pass");
}

#[test]
fn evolve_emits_expected_series() {
    let out = tmp_path("evolve.csv");
    let status = run(&[
        "evolve",
        "--lambda", "0.5",
        "--v", "0.5+0.5i",
        "--w", "0.5+0.5i",
        "--gamma", "1",
        "--k", "0.5",
        "--t-max", "1",
        "--steps", "3",
        "--output", &out,
    ]);
    assert!(status.status.success());
    let text = read(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "t,het_mean_re,het_mean_im,het_var,photons_per_mode"
    );
    // Compensated channel: mean fixed, variance 1/3 + 2Dt.
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((last[1] - 1.0).abs() < 1e-10);
    assert!((last[2] - 1.0).abs() < 1e-10);
    assert!((last[3] - (1.0 / 3.0 + 1.0)).abs() < 1e-10);
}

#[test]
fn evolve_supports_phase_sensitive_kind() {
    // PSA on vacuum: het mean stays zero, Δ² = (e^{2Kt} + e^{−2Kt})/2·…
    // both quadrature sectors contribute symmetrically, so the variance
    // is cosh(2Kt).
    let out = tmp_path("evolve_psa.csv");
    let status = run(&[
        "evolve",
        "--lambda", "0",
        "--k", "0.3",
        "--kind", "psa",
        "--t-max", "1",
        "--steps", "2",
        "--output", &out,
    ]);
    assert!(status.status.success());
    let last: Vec<f64> = read(&out).lines().last().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((last[3] - (2.0 * 0.3_f64).cosh()).abs() < 1e-9, "het_var {}", last[3]);
}

#[test]
fn bad_arguments_exit_two() {
    let cases: Vec<Vec<&str>> = vec![
        // unknown flag
        vec!["capacity-curve", "--n", "1", "--bogus", "1"],
        // steps below 2
        vec![
            "capacity-curve", "--n", "1", "--gamma", "1", "--t-max", "1", "--steps", "1",
            "--output", "x.csv",
        ],
        // negative rate
        vec![
            "capacity-curve", "--n", "1", "--gamma", "-1", "--t-max", "1", "--steps", "4",
            "--output", "x.csv",
        ],
        // lambda out of range
        vec![
            "equivalence-report", "--lambda", "1.5", "--z", "1", "--gamma", "1", "--t", "1",
            "--output", "x.json",
        ],
        // malformed complex literal
        vec![
            "equivalence-report", "--lambda", "0.5", "--z", "1+2j", "--gamma", "1", "--t", "1",
            "--output", "x.json",
        ],
        // nonpositive photon floor
        vec![
            "phase-sensitivity", "--nbar-min", "0", "--nbar-max", "10", "--points", "4",
            "--output", "x.csv",
        ],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?} did not exit 2");
    }
}

#[test]
fn out_dir_override_is_honored() {
    let dir = tmp_path("outdir");
    std::fs::create_dir_all(&dir).unwrap();
    let status = std::process::Command::new(common::binary())
        .args([
            "capacity-curve",
            "--n", "1",
            "--gamma", "1",
            "--t-max", "1",
            "--steps", "2",
            "--output", "relative.csv",
        ])
        .env("TWINBEAM_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(std::path::Path::new(&dir).join("relative.csv").exists());
}
