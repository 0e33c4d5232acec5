//! Brute-force validation engine in the truncated number basis.
//!
//! Everything the Gaussian modules compute in closed form is recomputed
//! here the hard way: states as amplitude tensors over `|n_a, n_b⟩`,
//! unitaries as exponentials of sparse generators applied by substepped
//! Taylor series, the heterodyne density from the truncated photocurrent
//! eigenprojectors, and open-system evolution by fixed-step RK4 on the
//! density matrix. Agreement between the two routes certifies both.
//!
//! Truncation is controlled by `n_max` (default 40) and a hard
//! tail-weight bound; states whose population leaks into the top Fock
//! shells are rejected rather than silently wrong.

mod heterodyne;
mod lindblad;
mod ops;

pub use heterodyne::{
    heterodyne_pdf_fock, heterodyne_pdf_projected, heterodyne_pdf_with_tail, HeterodyneProjector,
};
pub use lindblad::{lindblad_evolve_fock, suggested_steps};
pub use ops::{unitary_fock, FockUnitary, UnitaryKind};

use nalgebra::{DMatrix, Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::gaussian::TwinBeamSpec;
use crate::C64;

/// Default per-mode truncation.
pub const DEFAULT_N_MAX: usize = 40;
/// Hard bound on the population allowed in the top two Fock shells.
pub const TAIL_BOUND: f64 = 1e-10;

/// Pure two-mode state: amplitude tensor of size `(n_max+1)²`, indexed as
/// `n_a·(n_max+1) + n_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockPure {
    n_max: usize,
    amps: Vec<C64>,
}

/// Mixed two-mode state: density matrix of size `(n_max+1)² × (n_max+1)²`,
/// row-major over the same composite index.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    n_max: usize,
    rho: Vec<C64>,
}

/// Pure or mixed truncated state.
#[derive(Debug, Clone, PartialEq)]
pub enum FockState {
    Pure(FockPure),
    Mixed(FockDensity),
}

impl FockPure {
    pub fn vacuum(n_max: usize) -> Self {
        let m = n_max + 1;
        let mut amps = vec![C64::new(0.0, 0.0); m * m];
        amps[0] = C64::new(1.0, 0.0);
        Self { n_max, amps }
    }

    pub fn from_amplitudes(n_max: usize, amps: Vec<C64>) -> Self {
        assert_eq!(amps.len(), (n_max + 1) * (n_max + 1));
        Self { n_max, amps }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> C64 {
        self.amps[n_a * (self.n_max + 1) + n_b]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Missing probability relative to a normalized state.
    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    /// Population in the top `shells` Fock levels of either mode.
    pub fn tail_weight(&self, shells: usize) -> f64 {
        let m = self.n_max + 1;
        let cut = m.saturating_sub(shells);
        let mut w = 0.0;
        for na in 0..m {
            for nb in 0..m {
                if na >= cut || nb >= cut {
                    w += self.amps[na * m + nb].norm_sqr();
                }
            }
        }
        w
    }

    /// Promote to a density matrix `|ψ⟩⟨ψ|`.
    pub fn to_density(&self) -> FockDensity {
        let dim = self.amps.len();
        let mut rho = vec![C64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            let ar = self.amps[r];
            if ar.norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..dim {
                rho[r * dim + c] = ar * self.amps[c].conj();
            }
        }
        FockDensity { n_max: self.n_max, rho }
    }

    /// Entanglement entropy (nats) between the two modes, from the
    /// Schmidt spectrum of the amplitude matrix.
    pub fn entanglement_entropy(&self) -> f64 {
        let m = self.n_max + 1;
        let mat = DMatrix::from_fn(m, m, |i, j| self.amps[i * m + j]);
        let svd = mat.svd(false, false);
        let total: f64 = svd.singular_values.iter().map(|s| s * s).sum();
        svd.singular_values
            .iter()
            .map(|s| {
                let p = s * s / total;
                if p > 1e-300 { -p * p.ln() } else { 0.0 }
            })
            .sum()
    }

    /// Quadrature mean vector and covariance matrix, same conventions as
    /// the Gaussian module.
    pub fn moments(&self) -> (Vector4<f64>, Matrix4<f64>) {
        complex_moments_pure(self).quadrature_moments()
    }
}

impl FockDensity {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn elements(&self) -> &[C64] {
        &self.rho
    }

    pub(crate) fn from_parts(n_max: usize, rho: Vec<C64>) -> Self {
        Self { n_max, rho }
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1) * (self.n_max + 1)
    }

    pub fn trace(&self) -> C64 {
        let dim = self.dim();
        (0..dim).map(|i| self.rho[i * dim + i]).sum()
    }

    /// Largest absolute deviation from Hermiticity.
    pub fn hermiticity_deficit(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..dim {
            for c in r..dim {
                let dev = (self.rho[r * dim + c] - self.rho[c * dim + r].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Smallest eigenvalue of the (Hermitian) density matrix. Physical
    /// states have this ≥ 0 up to roundoff. Dense eigendecomposition,
    /// so meant for validation at small truncation.
    pub fn min_eigenvalue(&self) -> f64 {
        let dim = self.dim();
        let mat = DMatrix::from_fn(dim, dim, |r, c| self.rho[r * dim + c]);
        let eig = mat.symmetric_eigen();
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn moments(&self) -> (Vector4<f64>, Matrix4<f64>) {
        complex_moments_density(self).quadrature_moments()
    }
}

impl FockState {
    pub fn n_max(&self) -> usize {
        match self {
            FockState::Pure(p) => p.n_max,
            FockState::Mixed(d) => d.n_max,
        }
    }

    pub fn to_density(&self) -> FockDensity {
        match self {
            FockState::Pure(p) => p.to_density(),
            FockState::Mixed(d) => d.clone(),
        }
    }

    pub fn moments(&self) -> (Vector4<f64>, Matrix4<f64>) {
        match self {
            FockState::Pure(p) => p.moments(),
            FockState::Mixed(d) => d.moments(),
        }
    }
}

/// Twin beam `√(1−λ²) Σ (−λ)ⁿ |n,n⟩` truncated at `n_max`; the norm
/// deficit is the geometric tail `λ^{2(n_max+1)}`.
pub fn twin_beam_fock(lambda: f64, n_max: usize) -> Result<FockPure> {
    if !(lambda.is_finite() && (0.0..1.0).contains(&lambda)) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    let m = n_max + 1;
    let mut amps = vec![C64::new(0.0, 0.0); m * m];
    let scale = (1.0 - lambda * lambda).sqrt();
    let mut coeff = scale;
    for n in 0..m {
        amps[n * m + n] = C64::new(coeff, 0.0);
        coeff *= -lambda;
    }
    Ok(FockPure { n_max, amps })
}

/// Displaced twin beam `D_a(v) D_b(w̄) · PIA(λ)|0,0⟩` built entirely in
/// the number basis.
pub fn twin_beam_fock_displaced(spec: &TwinBeamSpec, n_max: usize) -> Result<FockPure> {
    let tb = twin_beam_fock(spec.lambda, n_max)?;
    if spec.v.norm_sqr() == 0.0 && spec.w.norm_sqr() == 0.0 {
        return Ok(tb);
    }
    let disp = unitary_fock(
        UnitaryKind::Displace { v: spec.v, w: spec.w.conj() },
        n_max,
    );
    disp.apply(&tb)
}

/// Coherent product state `|α⟩⊗|β⟩`, rejected if the truncation tail
/// exceeds the hard bound.
pub fn coherent_fock(alpha: C64, beta: C64, n_max: usize) -> Result<FockPure> {
    let m = n_max + 1;
    let mut amps = vec![C64::new(0.0, 0.0); m * m];
    let mut pa = vec![C64::new(0.0, 0.0); m];
    let mut pb = vec![C64::new(0.0, 0.0); m];
    let ea = (-alpha.norm_sqr() / 2.0).exp();
    let eb = (-beta.norm_sqr() / 2.0).exp();
    let mut ca = C64::new(ea, 0.0);
    let mut cb = C64::new(eb, 0.0);
    for n in 0..m {
        pa[n] = ca;
        pb[n] = cb;
        ca *= alpha / ((n + 1) as f64).sqrt();
        cb *= beta / ((n + 1) as f64).sqrt();
    }
    for na in 0..m {
        for nb in 0..m {
            amps[na * m + nb] = pa[na] * pb[nb];
        }
    }
    let state = FockPure { n_max, amps };
    let tail = state.tail_weight(2);
    if tail > TAIL_BOUND {
        return Err(Error::TruncationTail { weight: tail, bound: TAIL_BOUND, n_max });
    }
    Ok(state)
}

/// Squared overlap `|⟨a|b⟩|²` normalized by both norms.
pub fn fidelity_pure(a: &FockPure, b: &FockPure) -> f64 {
    let inner: C64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum();
    inner.norm_sqr() / (a.norm_sqr() * b.norm_sqr())
}

/// The eight complex moments that determine Gaussian quadrature moments.
pub(crate) struct ComplexMoments {
    pub a: C64,
    pub b: C64,
    pub a_sq: C64,
    pub b_sq: C64,
    pub ada: f64,
    pub bdb: f64,
    pub ab: C64,
    pub ab_dag: C64,
    pub norm: f64,
}

impl ComplexMoments {
    /// Convert to quadrature mean/covariance using
    /// `X = (c + c†)/2`, `Y = i(c† − c)/2`:
    /// `⟨X²⟩ = (⟨c†c⟩ + 1/2 + Re⟨c²⟩)/2`, `⟨XY+YX⟩/2 = Im⟨c²⟩/2`, and for
    /// cross-mode terms `⟨X_aX_b⟩ = (Re⟨ab⟩ + Re⟨ab†⟩)/2` etc.
    pub fn quadrature_moments(&self) -> (Vector4<f64>, Matrix4<f64>) {
        let n = self.norm;
        let a = self.a / n;
        let b = self.b / n;
        let a_sq = self.a_sq / n;
        let b_sq = self.b_sq / n;
        let ada = self.ada / n;
        let bdb = self.bdb / n;
        let ab = self.ab / n;
        let ab_dag = self.ab_dag / n;

        let mean = Vector4::new(a.re, a.im, b.re, b.im);
        let mut cov = Matrix4::zeros();
        cov[(0, 0)] = (ada + 0.5 + a_sq.re) / 2.0 - a.re * a.re;
        cov[(1, 1)] = (ada + 0.5 - a_sq.re) / 2.0 - a.im * a.im;
        cov[(0, 1)] = a_sq.im / 2.0 - a.re * a.im;
        cov[(2, 2)] = (bdb + 0.5 + b_sq.re) / 2.0 - b.re * b.re;
        cov[(3, 3)] = (bdb + 0.5 - b_sq.re) / 2.0 - b.im * b.im;
        cov[(2, 3)] = b_sq.im / 2.0 - b.re * b.im;
        cov[(0, 2)] = (ab.re + ab_dag.re) / 2.0 - a.re * b.re;
        cov[(0, 3)] = (ab.im - ab_dag.im) / 2.0 - a.re * b.im;
        cov[(1, 2)] = (ab.im + ab_dag.im) / 2.0 - a.im * b.re;
        cov[(1, 3)] = (ab_dag.re - ab.re) / 2.0 - a.im * b.im;
        for r in 0..4 {
            for c in 0..r {
                cov[(r, c)] = cov[(c, r)];
            }
        }
        (mean, cov)
    }
}

fn complex_moments_pure(state: &FockPure) -> ComplexMoments {
    let m = state.n_max + 1;
    let psi = &state.amps;
    let idx = |na: usize, nb: usize| na * m + nb;
    let mut mom = ComplexMoments {
        a: C64::new(0.0, 0.0),
        b: C64::new(0.0, 0.0),
        a_sq: C64::new(0.0, 0.0),
        b_sq: C64::new(0.0, 0.0),
        ada: 0.0,
        bdb: 0.0,
        ab: C64::new(0.0, 0.0),
        ab_dag: C64::new(0.0, 0.0),
        norm: 0.0,
    };
    for na in 0..m {
        for nb in 0..m {
            let c = psi[idx(na, nb)];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let cc = c.conj();
            mom.norm += c.norm_sqr();
            mom.ada += na as f64 * c.norm_sqr();
            mom.bdb += nb as f64 * c.norm_sqr();
            // ⟨ψ|a|ψ⟩ collects ψ̄(na,nb)·√(na+1)·ψ(na+1,nb), etc.
            if na + 1 < m {
                mom.a += cc * ((na + 1) as f64).sqrt() * psi[idx(na + 1, nb)];
            }
            if nb + 1 < m {
                mom.b += cc * ((nb + 1) as f64).sqrt() * psi[idx(na, nb + 1)];
            }
            if na + 2 < m {
                mom.a_sq +=
                    cc * (((na + 1) * (na + 2)) as f64).sqrt() * psi[idx(na + 2, nb)];
            }
            if nb + 2 < m {
                mom.b_sq +=
                    cc * (((nb + 1) * (nb + 2)) as f64).sqrt() * psi[idx(na, nb + 2)];
            }
            if na + 1 < m && nb + 1 < m {
                mom.ab +=
                    cc * (((na + 1) * (nb + 1)) as f64).sqrt() * psi[idx(na + 1, nb + 1)];
            }
            if na + 1 < m && nb > 0 {
                mom.ab_dag += cc * (((na + 1) * nb) as f64).sqrt() * psi[idx(na + 1, nb - 1)];
            }
        }
    }
    mom
}

fn complex_moments_density(state: &FockDensity) -> ComplexMoments {
    let m = state.n_max + 1;
    let dim = m * m;
    let rho = &state.rho;
    let at = |r: usize, c: usize| rho[r * dim + c];
    let idx = |na: usize, nb: usize| na * m + nb;
    let mut mom = ComplexMoments {
        a: C64::new(0.0, 0.0),
        b: C64::new(0.0, 0.0),
        a_sq: C64::new(0.0, 0.0),
        b_sq: C64::new(0.0, 0.0),
        ada: 0.0,
        bdb: 0.0,
        ab: C64::new(0.0, 0.0),
        ab_dag: C64::new(0.0, 0.0),
        norm: 0.0,
    };
    // tr(ρ·O) for ladder monomials O reduces to single sums over shifted
    // diagonals: tr(ρa) = Σ √n_a ρ[r, r − e_a], etc.
    for na in 0..m {
        for nb in 0..m {
            let r = idx(na, nb);
            mom.norm += at(r, r).re;
            mom.ada += na as f64 * at(r, r).re;
            mom.bdb += nb as f64 * at(r, r).re;
            if na > 0 {
                mom.a += (na as f64).sqrt() * at(r, idx(na - 1, nb));
            }
            if nb > 0 {
                mom.b += (nb as f64).sqrt() * at(r, idx(na, nb - 1));
            }
            if na > 1 {
                mom.a_sq += ((na * (na - 1)) as f64).sqrt() * at(r, idx(na - 2, nb));
            }
            if nb > 1 {
                mom.b_sq += ((nb * (nb - 1)) as f64).sqrt() * at(r, idx(na, nb - 2));
            }
            if na > 0 && nb > 0 {
                mom.ab += ((na * nb) as f64).sqrt() * at(r, idx(na - 1, nb - 1));
            }
            if na > 0 && nb + 1 < m {
                mom.ab_dag += ((na * (nb + 1)) as f64).sqrt() * at(r, idx(na - 1, nb + 1));
            }
        }
    }
    mom
}
