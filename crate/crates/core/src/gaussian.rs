//! Two-mode Gaussian states and the symplectic unitary catalog.
//!
//! States carry first and second quadrature moments in the ordering
//! `(X_a, Y_a, X_b, Y_b)` with vacuum variance 1/4. Unitaries are stored
//! as the pair `(S, d)` acting on moments as `mean → S·mean + d`,
//! `cov → S·cov·Sᵀ`.
//!
//! The catalog covers the phase-insensitive amplifier (two-mode
//! squeezer), 50-50 frequency conversion, single-mode squeezers and
//! displacements: everything needed to build the twin-beam and
//! squeezed-pair state families and to map between them.

use nalgebra::{Matrix4, SMatrix, Vector4};

use crate::error::{Error, Result};
use crate::C64;

/// Field mode label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// Symplectic form Ω for the ordering (X_a, Y_a, X_b, Y_b):
/// block-diagonal with blocks [[0, 1], [−1, 0]].
pub fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Largest absolute entry of `S·Ω·Sᵀ − Ω`.
pub fn symplectic_deviation(s: &Matrix4<f64>) -> f64 {
    let omega = symplectic_form();
    (s * omega * s.transpose() - omega).abs().max()
}

fn validate_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && (0.0..1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda))
    }
}

/// Two-mode Gaussian state: quadrature mean vector and 4×4 covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeGaussianState {
    pub mean: Vector4<f64>,
    pub cov: Matrix4<f64>,
}

impl TwoModeGaussianState {
    /// Build from moments, enforcing covariance symmetry to 1e-12.
    ///
    /// The stored covariance is the symmetrized input, so downstream
    /// algebra can rely on exact symmetry.
    pub fn new(mean: Vector4<f64>, cov: Matrix4<f64>) -> Result<Self> {
        let asym = (cov - cov.transpose()).abs().max();
        if !asym.is_finite() || asym > 1e-12 {
            return Err(Error::InvalidCovariance(format!(
                "asymmetry {asym:.3e} exceeds 1e-12"
            )));
        }
        let cov = (cov + cov.transpose()) * 0.5;
        Ok(Self { mean, cov })
    }

    /// Two-mode vacuum: zero mean, covariance I/4.
    pub fn vacuum() -> Self {
        Self {
            mean: Vector4::zeros(),
            cov: Matrix4::identity() * 0.25,
        }
    }

    /// Coherent state |α⟩⊗|β⟩: displaced vacuum.
    pub fn coherent(alpha: C64, beta: C64) -> Self {
        Self {
            mean: Vector4::new(alpha.re, alpha.im, beta.re, beta.im),
            cov: Matrix4::identity() * 0.25,
        }
    }

    /// Mean photon number per mode, `(Σ_modes VarX + VarY − 1/2 + ⟨X⟩² + ⟨Y⟩²)/2`.
    pub fn photons_per_mode(&self) -> f64 {
        let mut total = 0.0;
        for m in [0, 2] {
            total += self.cov[(m, m)] + self.cov[(m + 1, m + 1)] - 0.5
                + self.mean[m] * self.mean[m]
                + self.mean[m + 1] * self.mean[m + 1];
        }
        total / 2.0
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + (i/4)Ω`.
    ///
    /// Physical states have this ≥ 0 (up to roundoff); the check embeds
    /// the 4×4 Hermitian problem into a real symmetric 8×8 one.
    pub fn min_uncertainty_eigenvalue(&self) -> f64 {
        // H = A + iB with A = cov, B = Ω/4; embed as [[A, −B], [B, A]].
        let a = self.cov;
        let b = symplectic_form() * 0.25;
        let mut emb = SMatrix::<f64, 8, 8>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                emb[(i, j)] = a[(i, j)];
                emb[(i + 4, j + 4)] = a[(i, j)];
                emb[(i, j + 4)] = -b[(i, j)];
                emb[(i + 4, j)] = b[(i, j)];
            }
        }
        let eig = emb.symmetric_eigen();
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// True when the uncertainty relation holds within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_uncertainty_eigenvalue() >= -tol
    }
}

/// Gaussian unitary at the moment level: symplectic matrix plus displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianUnitary {
    pub s: Matrix4<f64>,
    pub d: Vector4<f64>,
}

impl GaussianUnitary {
    pub fn identity() -> Self {
        Self {
            s: Matrix4::identity(),
            d: Vector4::zeros(),
        }
    }

    /// Phase-insensitive amplifier `exp[ξ(ab − a†b†)]` with `ξ = tanh⁻¹λ`,
    /// gain `G = (1 − λ²)⁻¹`.
    ///
    /// Signs are anchored to the number-basis expansion
    /// `√(1−λ²) Σ (−λ)ⁿ |n,n⟩` of the output on vacuum, which pins the
    /// correlations to `Cov(X_a, X_b) < 0`, `Cov(Y_a, Y_b) > 0` and the
    /// heterodyne variance to `(1−λ)/(1+λ)`.
    pub fn pia(lambda: f64) -> Result<Self> {
        validate_lambda(lambda)?;
        let ch = 1.0 / (1.0 - lambda * lambda).sqrt();
        let sh = lambda * ch;
        let s = Matrix4::new(
            ch, 0.0, -sh, 0.0, //
            0.0, ch, 0.0, sh, //
            -sh, 0.0, ch, 0.0, //
            0.0, sh, 0.0, ch,
        );
        Ok(Self { s, d: Vector4::zeros() })
    }

    /// 50-50 frequency conversion `exp[(π/4)(ab† − a†b)]`:
    /// `(a, b) → ((a − b)/√2, (a + b)/√2)`.
    pub fn frequency_conversion() -> Self {
        Self::frequency_conversion_with_phase(0.0)
    }

    /// Frequency conversion with pump phase `ψ`,
    /// `exp[(π/4)(e^{iψ} ab† − e^{−iψ} a†b)]`:
    /// `a → (a − e^{−iψ}b)/√2`, `b → (b + e^{iψ}a)/√2`.
    ///
    /// With `ψ = −2·arg α` this sends `|√2α⟩⊗|0⟩` to the coherent pair
    /// `|α⟩⊗|ᾱ⟩`; `ψ = 0` recovers [`Self::frequency_conversion`].
    pub fn frequency_conversion_with_phase(psi: f64) -> Self {
        let (sn, cs) = psi.sin_cos();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = Matrix4::new(
            1.0, 0.0, -cs, -sn, //
            0.0, 1.0, sn, -cs, //
            cs, -sn, 1.0, 0.0, //
            sn, cs, 0.0, 1.0,
        ) * r;
        Self { s, d: Vector4::zeros() }
    }

    /// Displacement `D_a(v) D_b(w)`: shifts `(X, Y)` of each mode by the
    /// real and imaginary parts of its argument.
    pub fn displace(v: C64, w: C64) -> Self {
        Self {
            s: Matrix4::identity(),
            d: Vector4::new(v.re, v.im, w.re, w.im),
        }
    }

    /// Single-mode squeezer `exp[(r/2)(c†² − c²)]`: scales the mode's `X`
    /// by `e^r` and `Y` by `e^{−r}`.
    pub fn squeeze(mode: Mode, r: f64) -> Self {
        let (ep, em) = (r.exp(), (-r).exp());
        let mut s = Matrix4::identity();
        let o = match mode {
            Mode::A => 0,
            Mode::B => 2,
        };
        s[(o, o)] = ep;
        s[(o + 1, o + 1)] = em;
        Self { s, d: Vector4::zeros() }
    }

    /// Composition: apply `self` first, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        Self {
            s: other.s * self.s,
            d: other.s * self.d + other.d,
        }
    }
}

/// Twin-beam preparation: PIA coupling λ and the displacement shares
/// `v`, `w` of the encoded symbol `z = v + w`.
///
/// The physical displacement applied to the image-band mode is `w̄`, so
/// that the heterodyne photocurrent mean comes out at `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinBeamSpec {
    pub lambda: f64,
    pub v: C64,
    pub w: C64,
}

impl TwinBeamSpec {
    pub fn new(lambda: f64, v: C64, w: C64) -> Result<Self> {
        validate_lambda(lambda)?;
        Ok(Self { lambda, v, w })
    }

    /// Symmetric split `v = w = z/2`.
    pub fn symmetric(lambda: f64, z: C64) -> Result<Self> {
        Self::new(lambda, z / 2.0, z / 2.0)
    }

    /// Encoded complex symbol `z = v + w`.
    pub fn symbol(&self) -> C64 {
        self.v + self.w
    }

    /// Amplifier gain `G = (1 − λ²)⁻¹ ≥ 1`.
    pub fn gain(&self) -> f64 {
        1.0 / (1.0 - self.lambda * self.lambda)
    }

    /// Mean photons per mode: `λ²/(1−λ²) + |v|²/2 + |w|²/2`.
    pub fn photons_per_mode(&self) -> f64 {
        let l2 = self.lambda * self.lambda;
        l2 / (1.0 - l2) + 0.5 * self.v.norm_sqr() + 0.5 * self.w.norm_sqr()
    }
}

/// Heterodyne variance `Δλ² = (1 − λ)/(1 + λ)` of the twin-beam family.
pub fn heterodyne_variance(lambda: f64) -> f64 {
    (1.0 - lambda) / (1.0 + lambda)
}

/// Twin-beam state `D_a(v) D_b(w̄) · PIA(λ) |0,0⟩`.
pub fn twin_beam_state(spec: &TwinBeamSpec) -> Result<TwoModeGaussianState> {
    let pia = GaussianUnitary::pia(spec.lambda)?;
    let disp = GaussianUnitary::displace(spec.v, spec.w.conj());
    apply_unitary(&TwoModeGaussianState::vacuum(), &pia.then(&disp))
}

/// Coherent input pair that reproduces the twin-beam state by straight
/// amplification: `PIA(λ) |α⟩⊗|β⟩` with
/// `α = (v + λw)/√(1−λ²)`, `β = (λv̄ + w̄)/√(1−λ²)`.
pub fn amplifier_input_pair(spec: &TwinBeamSpec) -> (C64, C64) {
    let norm = (1.0 - spec.lambda * spec.lambda).sqrt();
    let alpha = (spec.v + spec.w * spec.lambda) / norm;
    let beta = (spec.v.conj() * spec.lambda + spec.w.conj()) / norm;
    (alpha, beta)
}

/// Twin-beam state built the alternate way: amplify the coherent pair of
/// [`amplifier_input_pair`] instead of displacing amplified vacuum.
pub fn twin_beam_state_amplified(spec: &TwinBeamSpec) -> Result<TwoModeGaussianState> {
    let (alpha, beta) = amplifier_input_pair(spec);
    let pia = GaussianUnitary::pia(spec.lambda)?;
    apply_unitary(&TwoModeGaussianState::coherent(alpha, beta), &pia)
}

/// Squeezed pair `[D_a(i·Im z/√2) S_a(r)]|0⟩ ⊗ [D_b(Re z/√2) S_b(−r)]|0⟩`
/// with `r = tanh⁻¹λ`: the frequency-converted image of the symmetric
/// twin beam. Mode a has reduced `Y` variance, mode b reduced `X`
/// variance, and there are no cross-mode correlations.
pub fn squeezed_pair_state(lambda: f64, z: C64) -> Result<TwoModeGaussianState> {
    validate_lambda(lambda)?;
    let sq = 0.5_f64.sqrt();
    let mean = Vector4::new(0.0, z.im * sq, z.re * sq, 0.0);
    // e^{±2r}/4 with e^{2r} = (1+λ)/(1−λ)
    let anti = 0.25 * (1.0 + lambda) / (1.0 - lambda);
    let sqz = 0.25 * (1.0 - lambda) / (1.0 + lambda);
    let cov = Matrix4::from_diagonal(&Vector4::new(anti, sqz, sqz, anti));
    TwoModeGaussianState::new(mean, cov)
}

/// Apply a Gaussian unitary to a state: `mean → S·mean + d`,
/// `cov → S·cov·Sᵀ`. Rejects matrices that fail the symplectic
/// contract by more than 1e-12.
pub fn apply_unitary(state: &TwoModeGaussianState, u: &GaussianUnitary) -> Result<TwoModeGaussianState> {
    let dev = symplectic_deviation(&u.s);
    if !dev.is_finite() || dev > 1e-12 {
        return Err(Error::NotSymplectic(dev));
    }
    TwoModeGaussianState::new(u.s * state.mean + u.d, u.s * state.cov * u.s.transpose())
}
