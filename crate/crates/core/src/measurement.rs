//! Outcome statistics for unconventional heterodyne and ordinary
//! homodyne detection.
//!
//! The heterodyne photocurrent is `Z = a + b†`; its real and imaginary
//! parts `(X_a + X_b, Y_a − Y_b)` commute, so a Gaussian state produces a
//! Gaussian outcome density with moments read directly off the state.
//! Homodyne detection measures a single quadrature marginal. The
//! coordinate change `z = √2(x + iy)` with `x ↔ X_b`, `y ↔ Y_a` maps a
//! product of homodyne densities onto a heterodyne density, which is how
//! the squeezed-pair scheme reproduces the twin-beam statistics.

use nalgebra::{Matrix2, Vector4};

use crate::error::{Error, Result};
use crate::evolution::{
    conjugate_generator, evolve_state, moment_ode, PhysicalGenerator,
};
use crate::gaussian::{
    apply_unitary, heterodyne_variance, squeezed_pair_state, twin_beam_state, GaussianUnitary,
    Mode, TwinBeamSpec, TwoModeGaussianState,
};
use crate::optimize::golden_section_min;
use crate::rng::Xoshiro256;
use crate::C64;

/// Quadrature selector for homodyne detection: `X` is the in-phase
/// quadrature (φ = 0), `Y` the out-of-phase one (φ = π/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    Y,
}

/// Gaussian distribution of a complex outcome, stored as the mean and the
/// 2×2 covariance of `(Re z, Im z)`.
///
/// Isotropic distributions have `cov2 = (Δ²/2)·I` with `Δ²` the
/// conventional heterodyne variance, i.e. density
/// `(1/πΔ²) exp(−|z−u|²/Δ²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGaussian {
    pub mean: C64,
    pub cov2: Matrix2<f64>,
}

impl ComplexGaussian {
    pub fn new(mean: C64, cov2: Matrix2<f64>) -> Result<Self> {
        let asym = (cov2[(0, 1)] - cov2[(1, 0)]).abs();
        if asym > 1e-12 {
            return Err(Error::InvalidCovariance(format!(
                "cov2 asymmetry {asym:.3e}"
            )));
        }
        // PSD for a 2×2 symmetric matrix: nonnegative diagonal and determinant.
        let det = cov2[(0, 0)] * cov2[(1, 1)] - cov2[(0, 1)] * cov2[(1, 0)];
        if cov2[(0, 0)] < -1e-14 || cov2[(1, 1)] < -1e-14 || det < -1e-14 {
            return Err(Error::InvalidCovariance(format!(
                "cov2 not PSD (diag {} {}, det {det:.3e})",
                cov2[(0, 0)],
                cov2[(1, 1)]
            )));
        }
        Ok(Self { mean, cov2 })
    }

    /// Isotropic distribution of variance `Δ²` (so `Var Re = Var Im = Δ²/2`).
    pub fn isotropic_new(mean: C64, delta2: f64) -> Result<Self> {
        if !(delta2.is_finite() && delta2 >= 0.0) {
            return Err(Error::InvalidVariance { name: "delta2", value: delta2 });
        }
        Ok(Self { mean, cov2: Matrix2::identity() * (delta2 / 2.0) })
    }

    /// Total variance `Δ² = Var Re + Var Im` (equals the conventional
    /// heterodyne variance when the distribution is isotropic).
    pub fn delta_squared(&self) -> f64 {
        self.cov2[(0, 0)] + self.cov2[(1, 1)]
    }

    /// True when `cov2` is isotropic within `tol` (absolute, scaled by
    /// `max(1, Δ²)`).
    pub fn is_isotropic(&self, tol: f64) -> bool {
        let scale = self.delta_squared().abs().max(1.0);
        (self.cov2[(0, 0)] - self.cov2[(1, 1)]).abs() <= tol * scale
            && self.cov2[(0, 1)].abs() <= tol * scale
    }

    /// Isotropic variance `Δ²`, rejecting anisotropic distributions.
    pub fn isotropic_variance(&self, tol: f64) -> Result<f64> {
        if self.is_isotropic(tol) {
            Ok(self.delta_squared())
        } else {
            Err(Error::InvalidCovariance(format!(
                "distribution is anisotropic: cov2 = [[{}, {}], [{}, {}]]",
                self.cov2[(0, 0)],
                self.cov2[(0, 1)],
                self.cov2[(1, 0)],
                self.cov2[(1, 1)]
            )))
        }
    }

    /// Probability density at `z`.
    pub fn pdf(&self, z: C64) -> f64 {
        let det = self.cov2[(0, 0)] * self.cov2[(1, 1)] - self.cov2[(0, 1)] * self.cov2[(1, 0)];
        let inv = Matrix2::new(
            self.cov2[(1, 1)], -self.cov2[(0, 1)],
            -self.cov2[(1, 0)], self.cov2[(0, 0)],
        ) / det;
        let r = nalgebra::Vector2::new(z.re - self.mean.re, z.im - self.mean.im);
        let quad = (r.transpose() * inv * r)[(0, 0)];
        (-0.5 * quad).exp() / (2.0 * std::f64::consts::PI * det.sqrt())
    }
}

/// One-dimensional Gaussian outcome density (homodyne marginal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian1D {
    pub mean: f64,
    pub var: f64,
}

impl Gaussian1D {
    pub fn new(mean: f64, var: f64) -> Result<Self> {
        if !(var.is_finite() && var >= 0.0) {
            return Err(Error::InvalidVariance { name: "var", value: var });
        }
        Ok(Self { mean, var })
    }
}

/// Outcome distribution of the photocurrent `Z = a + b†`:
/// mean `⟨a⟩ + ⟨b⟩*`, covariance from the linear forms
/// `Re Z = X_a + X_b`, `Im Z = Y_a − Y_b`.
///
/// Anisotropic states (e.g. PSA-evolved ones) are fully supported; the
/// twin-beam family comes out isotropic with `Δ² = (1−λ)/(1+λ)`.
pub fn heterodyne_distribution(state: &TwoModeGaussianState) -> ComplexGaussian {
    let u = Vector4::new(1.0, 0.0, 1.0, 0.0);
    let v = Vector4::new(0.0, 1.0, 0.0, -1.0);
    let mean = C64::new(
        state.mean[0] + state.mean[2],
        state.mean[1] - state.mean[3],
    );
    let cu = state.cov * u;
    let cv = state.cov * v;
    let cov2 = Matrix2::new(u.dot(&cu), u.dot(&cv), v.dot(&cu), v.dot(&cv));
    // cov is symmetric, so u·(C v) = v·(C u) exactly up to roundoff;
    // symmetrize to keep the invariant literal.
    let cov2 = (cov2 + cov2.transpose()) * 0.5;
    ComplexGaussian { mean, cov2 }
}

/// Marginal distribution of one quadrature of one mode.
pub fn homodyne_distribution(
    state: &TwoModeGaussianState,
    mode: Mode,
    quad: Quadrature,
) -> Gaussian1D {
    let idx = match (mode, quad) {
        (Mode::A, Quadrature::X) => 0,
        (Mode::A, Quadrature::Y) => 1,
        (Mode::B, Quadrature::X) => 2,
        (Mode::B, Quadrature::Y) => 3,
    };
    Gaussian1D {
        mean: state.mean[idx],
        var: state.cov[(idx, idx)],
    }
}

/// Map a product of homodyne densities `P_b(x)·P_a(y)` onto the
/// heterodyne plane via `z = √2(x + iy)`: mean `√2(x̄ + iȳ)`, variances
/// doubled. The 1/2 Jacobian of the coordinate change keeps the output
/// normalized, which the moment representation encodes for free.
pub fn product_to_heterodyne(px: &Gaussian1D, py: &Gaussian1D) -> Result<ComplexGaussian> {
    for g in [px, py] {
        if !(g.var.is_finite() && g.var >= 0.0) {
            return Err(Error::InvalidVariance { name: "var", value: g.var });
        }
    }
    let sqrt2 = 2.0_f64.sqrt();
    ComplexGaussian::new(
        C64::new(sqrt2 * px.mean, sqrt2 * py.mean),
        Matrix2::new(2.0 * px.var, 0.0, 0.0, 2.0 * py.var),
    )
}

/// Small-angle phase sensitivity of the symmetric twin-beam probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSensitivity {
    /// Angular r.m.s. deviation `δφ = Δλ/(√2·|signal|)`.
    pub delta_phi: f64,
    /// False when `δφ > 0.3`, where the small-angle Gaussian marginal
    /// stops being trustworthy.
    pub small_angle_valid: bool,
}

/// Phase sensitivity `δφ = Δλ/(√2·|signal|)` of an isotropic complex
/// Gaussian of variance `Δλ²` centered a distance `|signal|` from the
/// origin.
pub fn phase_sensitivity(lambda: f64, signal: f64) -> Result<PhaseSensitivity> {
    if !(lambda.is_finite() && (0.0..1.0).contains(&lambda)) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    if !(signal.is_finite() && signal > 0.0) {
        return Err(Error::NonPositiveSignal(signal));
    }
    let delta_phi = heterodyne_variance(lambda).sqrt() / (2.0_f64.sqrt() * signal);
    Ok(PhaseSensitivity { delta_phi, small_angle_valid: delta_phi <= 0.3 })
}

/// Monte-Carlo estimate of the r.m.s. of `arg(z)` for samples of the
/// isotropic Gaussian of variance `Δλ²` centered at `signal` on the real
/// axis. Deterministic for a fixed seed.
pub fn phase_sensitivity_mc(lambda: f64, signal: f64, samples: u64, seed: u64) -> Result<f64> {
    if !(lambda.is_finite() && (0.0..1.0).contains(&lambda)) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    if !(signal.is_finite() && signal > 0.0) {
        return Err(Error::NonPositiveSignal(signal));
    }
    let sigma = (heterodyne_variance(lambda) / 2.0).sqrt();
    let mut rng = Xoshiro256::new(seed);
    let mut sumsq = 0.0;
    for _ in 0..samples {
        let (gx, gy) = rng.next_gaussian_pair();
        let phi = (sigma * gy).atan2(signal + sigma * gx);
        sumsq += phi * phi;
    }
    Ok((sumsq / samples as f64).sqrt())
}

/// Optimal photon split for phase estimation at total photon number `n̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAllocation {
    pub lambda: f64,
    pub signal: f64,
    pub delta_phi: f64,
}

/// Minimize [`phase_sensitivity`] over λ subject to the total-photon
/// constraint `n̄ = 2λ²/(1−λ²) + |z|²/2` of the symmetric twin beam.
///
/// The asymptotic optimum puts half the photons into squeezing and half
/// into displacement, reaching `δφ ≈ 1/(√2·n̄)`.
pub fn optimize_phase_allocation(nbar: f64) -> Result<PhaseAllocation> {
    if !(nbar.is_finite() && nbar > 0.0) {
        return Err(Error::NegativeParameter { name: "nbar", value: nbar });
    }
    let lambda_max = (nbar / (nbar + 2.0)).sqrt();
    let objective = |lambda: f64| -> f64 {
        let l2 = lambda * lambda;
        let signal_sq = 2.0 * nbar - 4.0 * l2 / (1.0 - l2);
        if signal_sq <= 0.0 {
            return f64::INFINITY;
        }
        heterodyne_variance(lambda).sqrt() / (2.0 * signal_sq).sqrt()
    };
    let (lambda, delta_phi) = golden_section_min(objective, 0.0, lambda_max, 1e-12, 200);
    let l2 = lambda * lambda;
    let signal = (2.0 * nbar - 4.0 * l2 / (1.0 - l2)).max(0.0).sqrt();
    Ok(PhaseAllocation { lambda, signal, delta_phi })
}

/// Largest deviations across the twin-beam ↔ squeezed-pair equivalence
/// chain at parameters (λ, z, generator, t): state mapping, generator
/// conjugation at the moment-matrix level, and measured statistics after
/// evolution through both pictures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainDeviations {
    pub state_mean: f64,
    pub state_cov: f64,
    pub generator_drift: f64,
    pub generator_diffusion: f64,
    pub heterodyne_mean: f64,
    pub heterodyne_cov: f64,
}

impl ChainDeviations {
    pub fn max(&self) -> f64 {
        [
            self.state_mean,
            self.state_cov,
            self.generator_drift,
            self.generator_diffusion,
            self.heterodyne_mean,
            self.heterodyne_cov,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Run the full equivalence chain both ways and report deviations.
///
/// Route one evolves the symmetric twin beam under `gen` and heterodynes;
/// route two frequency-converts to the squeezed pair, evolves under the
/// conjugated generator, homodynes `X_b` and `Y_a`, and maps the product
/// back onto the heterodyne plane.
pub fn equivalence_chain_deviation(
    lambda: f64,
    z: C64,
    gen: &PhysicalGenerator,
    t: f64,
) -> Result<ChainDeviations> {
    let fc = GaussianUnitary::frequency_conversion();
    let twin = twin_beam_state(&TwinBeamSpec::symmetric(lambda, z)?)?;
    let pair = squeezed_pair_state(lambda, z)?;

    // State mapping: FC image of the twin beam vs the squeezed pair.
    let mapped = apply_unitary(&twin, &fc)?;
    let state_mean = (mapped.mean - pair.mean).abs().max();
    let state_cov = (mapped.cov - pair.cov).abs().max();

    // Generator conjugation at the moment-matrix level.
    let conj = conjugate_generator(gen)?;
    let ode = moment_ode(gen);
    let conj_ode = moment_ode(&conj);
    let generator_drift =
        (fc.s * ode.drift * fc.s.transpose() - conj_ode.drift).abs().max();
    let generator_diffusion =
        (fc.s * ode.diffusion * fc.s.transpose() - conj_ode.diffusion).abs().max();

    // Measurement mapping after evolving both pictures to time t.
    let het = heterodyne_distribution(&evolve_state(&twin, gen, t)?);
    let evolved_pair = evolve_state(&pair, &conj, t)?;
    let px = homodyne_distribution(&evolved_pair, Mode::B, Quadrature::X);
    let py = homodyne_distribution(&evolved_pair, Mode::A, Quadrature::Y);
    let mapped_het = product_to_heterodyne(&px, &py)?;
    let heterodyne_mean = (het.mean - mapped_het.mean).norm();
    let heterodyne_cov = (het.cov2 - mapped_het.cov2).abs().max();

    Ok(ChainDeviations {
        state_mean,
        state_cov,
        generator_drift,
        generator_diffusion,
        heterodyne_mean,
        heterodyne_cov,
    })
}
