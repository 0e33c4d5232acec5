//! Heterodyne probability density from the truncated photocurrent
//! eigenprojectors.
//!
//! The eigenstate of `Z = a + b†` with eigenvalue `z` expands over the
//! number basis as
//! `⟨p,q|z⟩⟩ = (e^{−|z|²/2}/√π) e^{i(p−q)·arg z} Σ_k (−1)^k T_{pqk} |z|^{p+q−2k}`
//! with `T_{pqk} = √(p! q!)/(k! (p−k)! (q−k)!)`. The combinatorial table
//! is z-independent, so evaluating the density on a grid costs one table
//! build plus cheap power sums per point.

use crate::C64;

use super::{FockDensity, FockPure, FockState};

/// Precomputed projector table for one truncation size.
pub struct HeterodyneProjector {
    n_max: usize,
    /// `table[(p·(n_max+1) + q)·(n_max+1) + k] = T_{pqk}` (0 for k > min(p,q)).
    table: Vec<f64>,
}

impl HeterodyneProjector {
    pub fn new(n_max: usize) -> Self {
        let m = n_max + 1;
        let mut ln_fact = vec![0.0_f64; m];
        for n in 1..m {
            ln_fact[n] = ln_fact[n - 1] + (n as f64).ln();
        }
        let mut table = vec![0.0_f64; m * m * m];
        for p in 0..m {
            for q in 0..m {
                for k in 0..=p.min(q) {
                    let ln = 0.5 * (ln_fact[p] + ln_fact[q])
                        - ln_fact[k]
                        - ln_fact[p - k]
                        - ln_fact[q - k];
                    table[(p * m + q) * m + k] = ln.exp();
                }
            }
        }
        Self { n_max, table }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Coefficient vector of the (Dirac-normalized) eigenprojector |z⟩⟩.
    pub fn projector_vector(&self, z: C64) -> Vec<C64> {
        let m = self.n_max + 1;
        let r = z.norm();
        let phi = if r > 0.0 { z.arg() } else { 0.0 };
        let mut pows = vec![0.0_f64; 2 * m];
        pows[0] = 1.0;
        for j in 1..2 * m {
            pows[j] = pows[j - 1] * r;
        }
        let norm = (-0.5 * r * r).exp() / std::f64::consts::PI.sqrt();
        let mut out = vec![C64::new(0.0, 0.0); m * m];
        for p in 0..m {
            for q in 0..m {
                let mut sum = 0.0;
                let mut sign = 1.0;
                for k in 0..=p.min(q) {
                    sum += sign * self.table[(p * m + q) * m + k] * pows[p + q - 2 * k];
                    sign = -sign;
                }
                out[p * m + q] = C64::from_polar(1.0, (p as f64 - q as f64) * phi) * (norm * sum);
            }
        }
        out
    }
}

/// Heterodyne density `P(z) = |⟨⟨z|ψ⟩|²` (pure) or `⟨⟨z|ρ|z⟩⟩` (mixed).
pub fn heterodyne_pdf_fock(state: &FockState, z: C64) -> f64 {
    heterodyne_pdf_with_tail(state, z).0
}

/// Density together with an estimate of the truncated contribution: the
/// overlap mass sitting in the top two Fock shells of either mode, which
/// callers can compare against their tail bound.
pub fn heterodyne_pdf_with_tail(state: &FockState, z: C64) -> (f64, f64) {
    let proj = HeterodyneProjector::new(state.n_max());
    heterodyne_pdf_projected(&proj, state, z)
}

/// Same as [`heterodyne_pdf_with_tail`] with a caller-held projector
/// table (grid sweeps should build the table once).
pub fn heterodyne_pdf_projected(
    proj: &HeterodyneProjector,
    state: &FockState,
    z: C64,
) -> (f64, f64) {
    assert_eq!(proj.n_max(), state.n_max(), "truncation mismatch");
    let c = proj.projector_vector(z);
    match state {
        FockState::Pure(p) => pdf_pure(proj.n_max, &c, p),
        FockState::Mixed(d) => pdf_mixed(proj.n_max, &c, d),
    }
}

fn shell_cut(m: usize) -> usize {
    m.saturating_sub(2)
}

fn pdf_pure(n_max: usize, c: &[C64], state: &FockPure) -> (f64, f64) {
    let m = n_max + 1;
    let cut = shell_cut(m);
    let mut inner = C64::new(0.0, 0.0);
    let mut tail = 0.0;
    for p in 0..m {
        for q in 0..m {
            let i = p * m + q;
            let contrib = c[i].conj() * state.amplitudes()[i];
            inner += contrib;
            if p >= cut || q >= cut {
                tail += contrib.norm();
            }
        }
    }
    (inner.norm_sqr(), tail)
}

fn pdf_mixed(n_max: usize, c: &[C64], state: &FockDensity) -> (f64, f64) {
    let m = n_max + 1;
    let dim = m * m;
    let cut = shell_cut(m);
    let rho = state.elements();
    // v = ρ·c, then P = c†·v.
    let mut value = C64::new(0.0, 0.0);
    let mut tail = 0.0;
    for r in 0..dim {
        let mut v = C64::new(0.0, 0.0);
        let row = &rho[r * dim..(r + 1) * dim];
        for (col, &cc) in c.iter().enumerate() {
            v += row[col] * cc;
        }
        let contrib = c[r].conj() * v;
        value += contrib;
        let (p, q) = (r / m, r % m);
        if p >= cut || q >= cut {
            tail += contrib.norm();
        }
    }
    (value.re, tail)
}
