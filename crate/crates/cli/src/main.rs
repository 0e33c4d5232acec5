//! Command-line front end for the two-mode channel toolkit.
//!
//! Subcommands produce CSV (RFC 4180, header row, 12 significant digits)
//! and JSON reports; identical arguments and seed produce byte-identical
//! files. Exit codes: 0 success, 1 validation failure (the report is
//! still written), 2 bad arguments.

mod commands;
mod complex_arg;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use complex_arg::ComplexArg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Nats,
    Bits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Pia,
    Psa,
}

#[derive(Parser)]
#[command(
    name = "twinbeam",
    about = "Two-mode bosonic channel simulator: twin-beam/heterodyne vs squeezed-pair/homodyne",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutual-information curves over time for the configured channel.
    CapacityCurve {
        /// Mean photons per mode N.
        #[arg(long)]
        n: f64,
        /// Squeezing fraction; defaults to the lossless optimum N/(N+1).
        #[arg(long)]
        lambda: Option<f64>,
        /// Damping rate Γ.
        #[arg(long)]
        gamma: f64,
        /// Thermal photons per mode.
        #[arg(long, default_value_t = 0.0)]
        nbar: f64,
        /// Distributed PIA rate K for the I_twin column.
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        /// End of the time sweep.
        #[arg(long)]
        t_max: f64,
        /// Number of grid points (≥ 2).
        #[arg(long)]
        steps: usize,
        /// Output units for information columns.
        #[arg(long, value_enum, default_value_t = Units::Nats)]
        units: Units,
        /// Interpret times as Γt.
        #[arg(long)]
        gamma_normalized: bool,
        /// Output CSV path.
        #[arg(long)]
        output: String,
    },
    /// Maximum deviation across the twin-beam ↔ squeezed-pair chain.
    EquivalenceReport {
        #[arg(long)]
        lambda: f64,
        /// Encoded complex symbol, `a+bi` form.
        #[arg(long)]
        z: ComplexArg,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        nbar: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda_gain: f64,
        #[arg(long, default_value_t = 0.0)]
        mbar: f64,
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        #[arg(long)]
        t: f64,
        /// Pass threshold on the maximum deviation.
        #[arg(long, default_value_t = 1e-9)]
        threshold: f64,
        /// Output JSON path.
        #[arg(long)]
        output: String,
    },
    /// Optimal phase sensitivity over a logarithmic photon-number grid.
    PhaseSensitivity {
        #[arg(long)]
        nbar_min: f64,
        #[arg(long)]
        nbar_max: f64,
        #[arg(long)]
        points: usize,
        /// Add a Monte-Carlo validation column with this many samples.
        #[arg(long, default_value_t = 0)]
        mc_samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        output: String,
    },
    /// Gaussian-vs-Fock deviations for one configuration.
    OracleCheck {
        #[arg(long)]
        lambda: f64,
        /// Encoded symbol of the probe twin beam.
        #[arg(long, default_value = "0")]
        z: ComplexArg,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        nbar: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda_gain: f64,
        #[arg(long, default_value_t = 0.0)]
        mbar: f64,
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        #[arg(long, value_enum, default_value_t = KindArg::Pia)]
        kind: KindArg,
        #[arg(long)]
        t: f64,
        /// Fock truncation per mode.
        #[arg(long, default_value_t = 24)]
        n_max: usize,
        /// RK4 steps; 0 selects a stability-based count.
        #[arg(long, default_value_t = 0)]
        steps: usize,
        /// Heterodyne-density comparison grid is `grid × grid`.
        #[arg(long, default_value_t = 11)]
        grid: usize,
        /// Output JSON path.
        #[arg(long)]
        output: String,
    },
    /// Time series of heterodyne statistics and photon number.
    Evolve {
        #[arg(long)]
        lambda: f64,
        /// Signal-mode displacement share, `a+bi` form.
        #[arg(long, default_value = "0")]
        v: ComplexArg,
        /// Image-band displacement share, `a+bi` form.
        #[arg(long, default_value = "0")]
        w: ComplexArg,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        nbar: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda_gain: f64,
        #[arg(long, default_value_t = 0.0)]
        mbar: f64,
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        #[arg(long, value_enum, default_value_t = KindArg::Pia)]
        kind: KindArg,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        steps: usize,
        /// Interpret times as Γt.
        #[arg(long)]
        gamma_normalized: bool,
        /// Output CSV path.
        #[arg(long)]
        output: String,
    },
}

/// Outcome of a successfully parsed run.
pub enum RunStatus {
    Pass,
    ValidationFailure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::CapacityCurve {
            n,
            lambda,
            gamma,
            nbar,
            k,
            t_max,
            steps,
            units,
            gamma_normalized,
            output,
        } => commands::capacity_curve(
            n, lambda, gamma, nbar, k, t_max, steps, units, gamma_normalized, &output,
        ),
        Command::EquivalenceReport {
            lambda,
            z,
            gamma,
            nbar,
            lambda_gain,
            mbar,
            k,
            t,
            threshold,
            output,
        } => commands::equivalence_report(
            lambda, z.0, gamma, nbar, lambda_gain, mbar, k, t, threshold, &output,
        ),
        Command::PhaseSensitivity { nbar_min, nbar_max, points, mc_samples, seed, output } => {
            commands::phase_sensitivity(nbar_min, nbar_max, points, mc_samples, seed, &output)
        }
        Command::OracleCheck {
            lambda,
            z,
            gamma,
            nbar,
            lambda_gain,
            mbar,
            k,
            kind,
            t,
            n_max,
            steps,
            grid,
            output,
        } => commands::oracle_check(
            lambda, z.0, gamma, nbar, lambda_gain, mbar, k, kind, t, n_max, steps, grid, &output,
        ),
        Command::Evolve {
            lambda,
            v,
            w,
            gamma,
            nbar,
            lambda_gain,
            mbar,
            k,
            kind,
            t_max,
            steps,
            gamma_normalized,
            output,
        } => commands::evolve(
            lambda, v.0, w.0, gamma, nbar, lambda_gain, mbar, k, kind, t_max, steps,
            gamma_normalized, &output,
        ),
    };
    match result {
        Ok(RunStatus::Pass) => ExitCode::SUCCESS,
        Ok(RunStatus::ValidationFailure) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
