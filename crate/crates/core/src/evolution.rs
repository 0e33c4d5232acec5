//! Lindblad generators and closed-form Gaussian evolution.
//!
//! The physical generator bundles equal-rate two-mode loss, linear
//! amplification, and a distributed parametric term that is either
//! phase-insensitive (two-mode, coupling a–b) or phase-sensitive (a pair
//! of independent single-mode amplifiers, the frequency-converted image
//! of the former).
//!
//! Everything here is linear time-invariant, so state evolution uses the
//! exact matrix-exponential solution of the quadrature moment ODEs
//! `mean' = M·mean`, `cov' = M·cov + cov·Mᵀ + D` rather than stepping.

use nalgebra::{Matrix4, SMatrix, Vector4};

use crate::error::{Error, Result};
use crate::gaussian::TwoModeGaussianState;
use crate::measurement::ComplexGaussian;

/// Which parametric term the `k` rate drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindK {
    /// Distributed phase-insensitive amplifier, commutator `K[a†b† − ab, ·]`.
    Pia,
    /// Pair of phase-sensitive amplifiers,
    /// `(K/2)[a² − a†², ·] − (K/2)[b² − b†², ·]` (amplifies `Y_a` and `X_b`
    /// for `K > 0`).
    Psa,
}

/// Physical Lindblad parameters: loss `Γ` with thermal photons `n_a`,
/// `n_b`; linear gain `Λ` with inversion photons `m_a`, `m_b`; parametric
/// rate `K` of the given kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalGenerator {
    pub gamma: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub lambda_gain: f64,
    pub m_a: f64,
    pub m_b: f64,
    pub k: f64,
    pub kind_k: KindK,
}

impl PhysicalGenerator {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gamma: f64,
        n_a: f64,
        n_b: f64,
        lambda_gain: f64,
        m_a: f64,
        m_b: f64,
        k: f64,
        kind_k: KindK,
    ) -> Result<Self> {
        for (name, value) in [
            ("gamma", gamma),
            ("n_a", n_a),
            ("n_b", n_b),
            ("lambda_gain", lambda_gain),
            ("m_a", m_a),
            ("m_b", m_b),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::NegativeParameter { name, value });
            }
        }
        if !k.is_finite() {
            return Err(Error::NegativeParameter { name: "k", value: k });
        }
        Ok(Self { gamma, n_a, n_b, lambda_gain, m_a, m_b, k, kind_k })
    }

    /// Pure loss at rate `gamma` with equal thermal occupation `nbar`.
    pub fn loss(gamma: f64, nbar: f64) -> Result<Self> {
        Self::new(gamma, nbar, nbar, 0.0, 0.0, 0.0, 0.0, KindK::Pia)
    }

    /// Pure linear gain at rate `lambda_gain` with inversion photons `mbar`.
    pub fn gain(lambda_gain: f64, mbar: f64) -> Result<Self> {
        Self::new(0.0, 0.0, 0.0, lambda_gain, mbar, mbar, 0.0, KindK::Pia)
    }

    /// Loss plus a distributed PIA of rate `k`.
    pub fn loss_with_pia(gamma: f64, nbar: f64, k: f64) -> Result<Self> {
        Self::new(gamma, nbar, nbar, 0.0, 0.0, 0.0, k, KindK::Pia)
    }

    /// True when both baths are mode-symmetric (`n_a = n_b`, `m_a = m_b`).
    pub fn symmetric_bath(&self) -> bool {
        self.n_a == self.n_b && self.m_a == self.m_b
    }
}

/// Canonical master-equation coefficients `(A, B, C_a, C_b, K)` of the
/// two-mode form
/// `2{(A+C_a)L[a†] + (A+C_b)L[b†] + (B+C_a)L[a] + (B+C_b)L[b]} + K[a†b†−ab, ·]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalCoefficients {
    pub a: f64,
    pub b: f64,
    pub c_a: f64,
    pub c_b: f64,
    pub k: f64,
}

/// Reduce physical rates to canonical coefficients.
///
/// The defining sums are `2(A+C_a) = Γn_a + Λ(m_a+1)` (weight of `L[a†]`),
/// `2(B+C_a) = Γ(n_a+1) + Λm_a` (weight of `L[a]`), and the b-mode
/// analogues; the difference `B − A = (Γ − Λ)/2` is split-independent.
/// The gauge is fixed by taking `A` as the smaller of the two `L[c†]`
/// half-weights so that `C_a`, `C_b` absorb any mode asymmetry and all
/// coefficients stay nonnegative.
///
/// Only the phase-insensitive kind carries the canonical commutator.
pub fn canonicalize(gen: &PhysicalGenerator) -> Result<CanonicalCoefficients> {
    if gen.kind_k != KindK::Pia {
        return Err(Error::RequiresPiaKind);
    }
    let up_a = 0.5 * (gen.gamma * gen.n_a + gen.lambda_gain * (gen.m_a + 1.0));
    let up_b = 0.5 * (gen.gamma * gen.n_b + gen.lambda_gain * (gen.m_b + 1.0));
    let down_a = 0.5 * (gen.gamma * (gen.n_a + 1.0) + gen.lambda_gain * gen.m_a);
    let a = up_a.min(up_b);
    let c_a = up_a - a;
    let c_b = up_b - a;
    let b = down_a - c_a;
    Ok(CanonicalCoefficients { a, b, c_a, c_b, k: gen.k })
}

/// Drift and diffusion of the heterodyne-density Fokker-Planck equation:
/// `Q = B − A − K`, `D = A + B + C_a + C_b`.
pub fn drift_diffusion(c: &CanonicalCoefficients) -> (f64, f64) {
    (c.b - c.a - c.k, c.a + c.b + c.c_a + c.c_b)
}

/// Quadrature moment ODE: `mean' = M·mean`, `cov' = M·cov + cov·Mᵀ + D`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentOde {
    pub drift: Matrix4<f64>,
    pub diffusion: Matrix4<f64>,
}

/// Build the moment ODE of a physical generator.
///
/// Loss contributes `−(Γ/2)I` drift and `Γ(2n+1)/4` diffusion per mode,
/// gain `+(Λ/2)I` and `Λ(2m+1)/4`; the PIA commutator couples the modes
/// so that the photocurrent mean obeys `d⟨Z⟩/dt = −Q⟨Z⟩`, while the PSA
/// kind contributes `diag(−K, +K, +K, −K)`.
pub fn moment_ode(gen: &PhysicalGenerator) -> MomentOde {
    let mut drift = Matrix4::identity() * (0.5 * (gen.lambda_gain - gen.gamma));
    match gen.kind_k {
        KindK::Pia => {
            let k = gen.k;
            // dX_a = K X_b, dY_a = −K Y_b, dX_b = K X_a, dY_b = −K Y_a.
            drift[(0, 2)] += k;
            drift[(1, 3)] -= k;
            drift[(2, 0)] += k;
            drift[(3, 1)] -= k;
        }
        KindK::Psa => {
            let k = gen.k;
            drift[(0, 0)] -= k;
            drift[(1, 1)] += k;
            drift[(2, 2)] += k;
            drift[(3, 3)] -= k;
        }
    }
    let da = 0.25 * (gen.gamma * (2.0 * gen.n_a + 1.0) + gen.lambda_gain * (2.0 * gen.m_a + 1.0));
    let db = 0.25 * (gen.gamma * (2.0 * gen.n_b + 1.0) + gen.lambda_gain * (2.0 * gen.m_b + 1.0));
    let diffusion = Matrix4::from_diagonal(&Vector4::new(da, da, db, db));
    MomentOde { drift, diffusion }
}

/// Project a moment ODE onto the scalar Fokker-Planck coefficients
/// `(Q, D)` of the photocurrent density.
///
/// Returns `None` when the drift does not act covariantly on the
/// `Z = a + b†` sector (the PSA kind, or asymmetric couplings).
pub fn fp_projection(ode: &MomentOde) -> Option<(f64, f64)> {
    let u = Vector4::new(1.0, 0.0, 1.0, 0.0); // Re Z direction
    let v = Vector4::new(0.0, 1.0, 0.0, -1.0); // Im Z direction
    let mu = ode.drift * u;
    let mv = ode.drift * v;
    // Need M·u = −Q·u and M·v = −Q·v with a common Q.
    let qu = -mu.dot(&u) / u.dot(&u);
    let qv = -mv.dot(&v) / v.dot(&v);
    let residual = (mu + u * qu).abs().max().max((mv + v * qv).abs().max());
    if residual > 1e-12 || (qu - qv).abs() > 1e-12 {
        return None;
    }
    let d_re = (u.transpose() * ode.diffusion * u)[(0, 0)];
    let d_im = (v.transpose() * ode.diffusion * v)[(0, 0)];
    if (d_re - d_im).abs() > 1e-12 {
        return None;
    }
    Some((qu, d_re))
}

/// Exact moment evolution for time `t ≥ 0` via the block matrix
/// exponential `exp([[M, D], [0, −Mᵀ]] t)`, whose off-diagonal block
/// yields the diffusion integral `∫ e^{Ms} D e^{Mᵀs} ds` in closed form.
pub fn evolve_state(
    state: &TwoModeGaussianState,
    gen: &PhysicalGenerator,
    t: f64,
) -> Result<TwoModeGaussianState> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::NegativeParameter { name: "t", value: t });
    }
    let ode = moment_ode(gen);
    let mut block = SMatrix::<f64, 8, 8>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            block[(i, j)] = ode.drift[(i, j)] * t;
            block[(i, j + 4)] = ode.diffusion[(i, j)] * t;
            block[(i + 4, j + 4)] = -ode.drift[(j, i)] * t;
        }
    }
    let e = block.exp();
    let mut f = Matrix4::zeros();
    let mut g = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            f[(i, j)] = e[(i, j)];
            g[(i, j)] = e[(i, j + 4)];
        }
    }
    let mean = f * state.mean;
    let cov = f * state.cov * f.transpose() + g * f.transpose();
    TwoModeGaussianState::new(mean, cov)
}

/// Noise accumulated by the Fokker-Planck channel over time `t`:
/// `(D/Q)(1 − e^{−2Qt})`, with the series form `2Dt(1 − Qt + ⅔(Qt)²)`
/// when `|Qt|` is small enough that the direct expression would cancel
/// catastrophically.
pub fn accumulated_noise(q: f64, d: f64, t: f64) -> f64 {
    let qt = q * t;
    if qt.abs() < 1e-8 {
        d * t * (2.0 - 2.0 * qt + 4.0 / 3.0 * qt * qt)
    } else {
        d / q * (1.0 - (-2.0 * qt).exp())
    }
}

/// Evolve an isotropic heterodyne distribution under the Fokker-Planck
/// flow: mean shrinks by `e^{−Qt}`, variance relaxes as
/// `Δ²(t) = (D/Q)(1 − e^{−2Qt}) + Δ²(0) e^{−2Qt}`.
pub fn fp_evolve(dist: &ComplexGaussian, q: f64, d: f64, t: f64) -> Result<ComplexGaussian> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::NegativeParameter { name: "t", value: t });
    }
    let delta2 = dist.isotropic_variance(1e-9)?;
    if delta2 < 0.0 {
        return Err(Error::InvalidVariance { name: "delta2", value: delta2 });
    }
    let decay = (-q * t).exp();
    let new_delta2 = accumulated_noise(q, d, t) + delta2 * decay * decay;
    ComplexGaussian::isotropic_new(dist.mean * decay, new_delta2)
}

/// Conjugate a symmetric-bath generator by the 50-50 frequency
/// conversion: loss and gain are invariant, while the parametric kind
/// toggles PIA ↔ PSA at the same rate (a vanishing `K` leaves the
/// generator untouched). Asymmetric baths would grow cross-mode terms
/// and are rejected.
pub fn conjugate_generator(gen: &PhysicalGenerator) -> Result<PhysicalGenerator> {
    if !gen.symmetric_bath() {
        return Err(Error::AsymmetricBath {
            n_a: gen.n_a,
            n_b: gen.n_b,
            m_a: gen.m_a,
            m_b: gen.m_b,
        });
    }
    let kind_k = if gen.k == 0.0 {
        gen.kind_k
    } else {
        match gen.kind_k {
            KindK::Pia => KindK::Psa,
            KindK::Psa => KindK::Pia,
        }
    };
    Ok(PhysicalGenerator { kind_k, ..*gen })
}
