//! Subcommand implementations.

use serde::Serialize;

use twinbeam_core::capacity::{
    coherent_reference, mutual_info_channel, mutual_info_compensated, mutual_info_lossy,
    nats_to_bits,
};
use twinbeam_core::evolution::{
    canonicalize, drift_diffusion, evolve_state, KindK, PhysicalGenerator,
};
use twinbeam_core::fock::{
    heterodyne_pdf_projected, lindblad_evolve_fock, suggested_steps, twin_beam_fock_displaced,
    FockState, HeterodyneProjector,
};
use twinbeam_core::gaussian::{twin_beam_state, TwinBeamSpec};
use twinbeam_core::measurement::{
    equivalence_chain_deviation, heterodyne_distribution, optimize_phase_allocation,
    phase_sensitivity_mc,
};
use twinbeam_core::{C64, Error};

use crate::output::{write_csv, write_json};
use crate::{KindArg, RunStatus, Units};

type RunResult = Result<RunStatus, String>;

fn check_nonnegative(pairs: &[(&str, f64)]) -> Result<(), String> {
    for &(name, value) in pairs {
        if !(value.is_finite() && value >= 0.0) {
            return Err(format!("{name} must be nonnegative and finite, got {value}"));
        }
    }
    Ok(())
}

fn check_steps(steps: usize) -> Result<(), String> {
    if steps < 2 {
        return Err(format!("grid steps must be at least 2, got {steps}"));
    }
    Ok(())
}

fn build_generator(
    gamma: f64,
    nbar: f64,
    lambda_gain: f64,
    mbar: f64,
    k: f64,
    kind: KindArg,
) -> Result<PhysicalGenerator, String> {
    let kind_k = match kind {
        KindArg::Pia => KindK::Pia,
        KindArg::Psa => KindK::Psa,
    };
    PhysicalGenerator::new(gamma, nbar, nbar, lambda_gain, mbar, mbar, k, kind_k)
        .map_err(|e| e.to_string())
}

fn convert(units: Units, nats: f64) -> f64 {
    match units {
        Units::Nats => nats,
        Units::Bits => nats_to_bits(nats),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn capacity_curve(
    n: f64,
    lambda: Option<f64>,
    gamma: f64,
    nbar: f64,
    k: f64,
    t_max: f64,
    steps: usize,
    units: Units,
    gamma_normalized: bool,
    output: &str,
) -> RunResult {
    check_nonnegative(&[("--n", n), ("--gamma", gamma), ("--nbar", nbar), ("--t-max", t_max)])?;
    check_steps(steps)?;
    if gamma_normalized && gamma <= 0.0 {
        return Err("--gamma-normalized needs --gamma > 0".into());
    }
    let lambda_used = lambda.unwrap_or(n / (n + 1.0));
    let gen = PhysicalGenerator::loss_with_pia(gamma, nbar, k).map_err(|e| e.to_string())?;
    let (q, d) = drift_diffusion(&canonicalize(&gen).map_err(|e| e.to_string())?);

    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let t_sweep = t_max * i as f64 / (steps - 1) as f64;
        let t_phys = if gamma_normalized { t_sweep / gamma } else { t_sweep };
        let gamma_t = gamma * t_phys;
        let i_twin = match mutual_info_channel(n, lambda_used, q, d, t_phys) {
            Ok(v) => v,
            Err(Error::PowerConstraint { .. }) => {
                return Err(format!(
                    "--lambda {lambda_used} exceeds the photon budget N = {n}"
                ))
            }
            Err(e) => return Err(e.to_string()),
        };
        let i_lossy = mutual_info_lossy(n, 1.0, nbar, gamma_t).map_err(|e| e.to_string())?;
        let i_comp = mutual_info_compensated(n, 1.0, nbar, gamma_t).map_err(|e| e.to_string())?;
        let i_coh = 2.0 * coherent_reference(n).map_err(|e| e.to_string())?;
        rows.push(vec![
            t_sweep,
            convert(units, i_twin),
            convert(units, i_lossy),
            convert(units, i_comp),
            convert(units, i_coh),
        ]);
    }
    write_csv(
        output,
        &["t", "I_twin", "I_lossy_formula", "I_compensated", "I_coherent_ref"],
        &rows,
    )?;
    Ok(RunStatus::Pass)
}

#[derive(Serialize)]
struct EquivalenceConfig {
    lambda: f64,
    z: String,
    gamma: f64,
    nbar: f64,
    lambda_gain: f64,
    mbar: f64,
    k: f64,
    t: f64,
}

#[derive(Serialize)]
struct EquivalenceDeviations {
    state_mean: f64,
    state_cov: f64,
    generator_drift: f64,
    generator_diffusion: f64,
    heterodyne_mean: f64,
    heterodyne_cov: f64,
}

#[derive(Serialize)]
struct EquivalenceReport {
    config: EquivalenceConfig,
    deviations: EquivalenceDeviations,
    max_deviation: f64,
    threshold: f64,
    status: String,
}

#[allow(clippy::too_many_arguments)]
pub fn equivalence_report(
    lambda: f64,
    z: C64,
    gamma: f64,
    nbar: f64,
    lambda_gain: f64,
    mbar: f64,
    k: f64,
    t: f64,
    threshold: f64,
    output: &str,
) -> RunResult {
    check_nonnegative(&[
        ("--gamma", gamma),
        ("--nbar", nbar),
        ("--lambda-gain", lambda_gain),
        ("--mbar", mbar),
        ("--t", t),
    ])?;
    if !(lambda.is_finite() && (0.0..1.0).contains(&lambda)) {
        return Err(format!("--lambda must lie in [0, 1), got {lambda}"));
    }
    let gen = build_generator(gamma, nbar, lambda_gain, mbar, k, KindArg::Pia)?;
    let dev = equivalence_chain_deviation(lambda, z, &gen, t).map_err(|e| e.to_string())?;
    let max = dev.max();
    let pass = max < threshold;
    let report = EquivalenceReport {
        config: EquivalenceConfig {
            lambda,
            z: format!("{}+{}i", z.re, z.im),
            gamma,
            nbar,
            lambda_gain,
            mbar,
            k,
            t,
        },
        deviations: EquivalenceDeviations {
            state_mean: dev.state_mean,
            state_cov: dev.state_cov,
            generator_drift: dev.generator_drift,
            generator_diffusion: dev.generator_diffusion,
            heterodyne_mean: dev.heterodyne_mean,
            heterodyne_cov: dev.heterodyne_cov,
        },
        max_deviation: max,
        threshold,
        status: if pass { "pass".into() } else { "fail".into() },
    };
    write_json(output, &report)?;
    Ok(if pass { RunStatus::Pass } else { RunStatus::ValidationFailure })
}

pub fn phase_sensitivity(
    nbar_min: f64,
    nbar_max: f64,
    points: usize,
    mc_samples: u64,
    seed: u64,
    output: &str,
) -> RunResult {
    if !(nbar_min.is_finite() && nbar_min > 0.0) {
        return Err(format!("--nbar-min must be positive, got {nbar_min}"));
    }
    if !(nbar_max.is_finite() && nbar_max >= nbar_min) {
        return Err(format!("--nbar-max must be at least --nbar-min, got {nbar_max}"));
    }
    check_steps(points)?;

    let mut header = vec!["nbar", "delta_phi", "delta_phi_nbar"];
    if mc_samples > 0 {
        header.push("delta_phi_mc");
    }
    let log_min = nbar_min.ln();
    let log_max = nbar_max.ln();
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let nbar = (log_min + (log_max - log_min) * i as f64 / (points - 1) as f64).exp();
        let opt = optimize_phase_allocation(nbar).map_err(|e| e.to_string())?;
        let mut row = vec![nbar, opt.delta_phi, opt.delta_phi * nbar];
        if mc_samples > 0 {
            let mc = phase_sensitivity_mc(opt.lambda, opt.signal, mc_samples, seed ^ i as u64)
                .map_err(|e| e.to_string())?;
            row.push(mc);
        }
        rows.push(row);
    }
    write_csv(output, &header, &rows)?;
    Ok(RunStatus::Pass)
}

#[derive(Serialize)]
struct OracleConfig {
    lambda: f64,
    z: String,
    gamma: f64,
    nbar: f64,
    lambda_gain: f64,
    mbar: f64,
    k: f64,
    kind: String,
    t: f64,
    n_max: usize,
    steps: usize,
    grid: usize,
}

#[derive(Serialize)]
struct OracleReport {
    config: OracleConfig,
    pdf_max_abs_deviation: f64,
    moments_mean_max_abs_deviation: f64,
    moments_cov_max_abs_deviation: f64,
    trace_drift: f64,
    tolerance: f64,
    status: String,
}

#[allow(clippy::too_many_arguments)]
pub fn oracle_check(
    lambda: f64,
    z: C64,
    gamma: f64,
    nbar: f64,
    lambda_gain: f64,
    mbar: f64,
    k: f64,
    kind: KindArg,
    t: f64,
    n_max: usize,
    steps: usize,
    grid: usize,
    output: &str,
) -> RunResult {
    check_nonnegative(&[
        ("--gamma", gamma),
        ("--nbar", nbar),
        ("--lambda-gain", lambda_gain),
        ("--mbar", mbar),
        ("--t", t),
    ])?;
    if grid < 2 {
        return Err(format!("--grid must be at least 2, got {grid}"));
    }
    if !(lambda.is_finite() && (0.0..1.0).contains(&lambda)) {
        return Err(format!("--lambda must lie in [0, 1), got {lambda}"));
    }
    let gen = build_generator(gamma, nbar, lambda_gain, mbar, k, kind)?;
    let steps = if steps == 0 { suggested_steps(&gen, t, n_max) } else { steps };
    let spec = TwinBeamSpec::symmetric(lambda, z).map_err(|e| e.to_string())?;

    let fock0 = twin_beam_fock_displaced(&spec, n_max).map_err(|e| e.to_string())?;
    let evolved = lindblad_evolve_fock(&FockState::Pure(fock0), &gen, t, steps)
        .map_err(|e| e.to_string())?;
    let trace_drift = (evolved.trace().re - 1.0).abs();

    let gauss = evolve_state(&twin_beam_state(&spec).map_err(|e| e.to_string())?, &gen, t)
        .map_err(|e| e.to_string())?;
    let (fock_mean, fock_cov) = evolved.moments();
    let mean_dev = (fock_mean - gauss.mean).abs().max();
    let cov_dev = (fock_cov - gauss.cov).abs().max();

    // Pointwise heterodyne-density comparison on a grid centered at the
    // evolved mean.
    let analytic = heterodyne_distribution(&gauss);
    let proj = HeterodyneProjector::new(n_max);
    let evolved_state = FockState::Mixed(evolved);
    let half = 2.0;
    let mut pdf_dev = 0.0_f64;
    for i in 0..grid {
        for j in 0..grid {
            let w = C64::new(
                analytic.mean.re - half + 2.0 * half * i as f64 / (grid - 1) as f64,
                analytic.mean.im - half + 2.0 * half * j as f64 / (grid - 1) as f64,
            );
            let (p, _) = heterodyne_pdf_projected(&proj, &evolved_state, w);
            pdf_dev = pdf_dev.max((p - analytic.pdf(w)).abs());
        }
    }

    let tolerance = 1e-6;
    let pass = pdf_dev < tolerance && mean_dev < tolerance && cov_dev < tolerance;
    let report = OracleReport {
        config: OracleConfig {
            lambda,
            z: format!("{}+{}i", z.re, z.im),
            gamma,
            nbar,
            lambda_gain,
            mbar,
            k,
            kind: match kind {
                KindArg::Pia => "pia".into(),
                KindArg::Psa => "psa".into(),
            },
            t,
            n_max,
            steps,
            grid,
        },
        pdf_max_abs_deviation: pdf_dev,
        moments_mean_max_abs_deviation: mean_dev,
        moments_cov_max_abs_deviation: cov_dev,
        trace_drift,
        tolerance,
        status: if pass { "pass".into() } else { "fail".into() },
    };
    write_json(output, &report)?;
    Ok(if pass { RunStatus::Pass } else { RunStatus::ValidationFailure })
}

#[allow(clippy::too_many_arguments)]
pub fn evolve(
    lambda: f64,
    v: C64,
    w: C64,
    gamma: f64,
    nbar: f64,
    lambda_gain: f64,
    mbar: f64,
    k: f64,
    kind: KindArg,
    t_max: f64,
    steps: usize,
    gamma_normalized: bool,
    output: &str,
) -> RunResult {
    check_nonnegative(&[
        ("--gamma", gamma),
        ("--nbar", nbar),
        ("--lambda-gain", lambda_gain),
        ("--mbar", mbar),
        ("--t-max", t_max),
    ])?;
    check_steps(steps)?;
    if gamma_normalized && gamma <= 0.0 {
        return Err("--gamma-normalized needs --gamma > 0".into());
    }
    let gen = build_generator(gamma, nbar, lambda_gain, mbar, k, kind)?;
    let spec = TwinBeamSpec::new(lambda, v, w).map_err(|e| e.to_string())?;
    let initial = twin_beam_state(&spec).map_err(|e| e.to_string())?;

    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let t_sweep = t_max * i as f64 / (steps - 1) as f64;
        let t_phys = if gamma_normalized { t_sweep / gamma } else { t_sweep };
        let state = evolve_state(&initial, &gen, t_phys).map_err(|e| e.to_string())?;
        let het = heterodyne_distribution(&state);
        rows.push(vec![
            t_sweep,
            het.mean.re,
            het.mean.im,
            het.delta_squared(),
            state.photons_per_mode(),
        ]);
    }
    write_csv(
        output,
        &["t", "het_mean_re", "het_mean_im", "het_var", "photons_per_mode"],
        &rows,
    )?;
    Ok(RunStatus::Pass)
}
