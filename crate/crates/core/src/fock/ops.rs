//! Sparse generators and unitary application on the truncated space.
//!
//! Unitaries are represented by their anti-Hermitian generators; `U|ψ⟩`
//! is evaluated as a substepped Taylor series, with the substep count
//! chosen so each factor has generator norm ≤ 1. This keeps every
//! catalog unitary exact to near machine precision without ever forming
//! a dense (n_max+1)² × (n_max+1)² matrix exponential.

use crate::error::{Error, Result};
use crate::gaussian::Mode;
use crate::C64;

use super::{FockPure, TAIL_BOUND};

/// Sparse operator on the composite index `n_a·(n_max+1) + n_b`.
pub(crate) struct SparseOp {
    dim: usize,
    entries: Vec<(u32, u32, C64)>,
}

impl SparseOp {
    fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    fn push(&mut self, row: usize, col: usize, val: C64) {
        if val.norm_sqr() > 0.0 {
            self.entries.push((row as u32, col as u32, val));
        }
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        y.fill(C64::new(0.0, 0.0));
        for &(r, c, v) in &self.entries {
            y[r as usize] += v * x[c as usize];
        }
    }

    /// 1-norm (max column sum), an upper bound on the spectral norm.
    fn norm_one(&self) -> f64 {
        let mut col_sums = vec![0.0_f64; self.dim];
        for &(_, c, v) in &self.entries {
            col_sums[c as usize] += v.norm();
        }
        col_sums.into_iter().fold(0.0, f64::max)
    }

    fn negated(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&(r, c, v)| (r, c, -v)).collect(),
        }
    }
}

/// Catalog of generators whose exponentials the oracle needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitaryKind {
    /// `exp[ξ(ab − a†b†)]`, `ξ = tanh⁻¹λ`.
    Pia { lambda: f64 },
    /// `exp[(π/4)(e^{iψ}ab† − e^{−iψ}a†b)]`; `ψ = 0` is the plain 50-50
    /// device.
    FrequencyConversion { pump_phase: f64 },
    /// `D_a(v)·D_b(w)`.
    Displace { v: C64, w: C64 },
    /// `exp[(r/2)(c†² − c²)]` on one mode.
    Squeeze { mode: Mode, r: f64 },
}

/// A catalog unitary bound to a truncation size.
pub struct FockUnitary {
    n_max: usize,
    gen: SparseOp,
}

/// Build a catalog unitary at truncation `n_max`.
pub fn unitary_fock(kind: UnitaryKind, n_max: usize) -> FockUnitary {
    let m = n_max + 1;
    let dim = m * m;
    let idx = |na: usize, nb: usize| na * m + nb;
    let mut gen = SparseOp::new(dim);
    match kind {
        UnitaryKind::Pia { lambda } => {
            let xi = lambda.atanh();
            for na in 0..m {
                for nb in 0..m {
                    // ab: |na,nb⟩ → √(na·nb)|na−1,nb−1⟩
                    if na > 0 && nb > 0 {
                        gen.push(
                            idx(na - 1, nb - 1),
                            idx(na, nb),
                            C64::new(xi * ((na * nb) as f64).sqrt(), 0.0),
                        );
                    }
                    // −a†b†: |na,nb⟩ → −√((na+1)(nb+1))|na+1,nb+1⟩
                    if na + 1 < m && nb + 1 < m {
                        gen.push(
                            idx(na + 1, nb + 1),
                            idx(na, nb),
                            C64::new(-xi * (((na + 1) * (nb + 1)) as f64).sqrt(), 0.0),
                        );
                    }
                }
            }
        }
        UnitaryKind::FrequencyConversion { pump_phase } => {
            let theta = std::f64::consts::FRAC_PI_4;
            let phase = C64::from_polar(theta, pump_phase);
            for na in 0..m {
                for nb in 0..m {
                    // e^{iψ}ab†: |na,nb⟩ → √(na(nb+1))|na−1,nb+1⟩
                    if na > 0 && nb + 1 < m {
                        gen.push(
                            idx(na - 1, nb + 1),
                            idx(na, nb),
                            phase * ((na * (nb + 1)) as f64).sqrt(),
                        );
                    }
                    // −e^{−iψ}a†b: |na,nb⟩ → −√((na+1)nb)|na+1,nb−1⟩
                    if na + 1 < m && nb > 0 {
                        gen.push(
                            idx(na + 1, nb - 1),
                            idx(na, nb),
                            -phase.conj() * (((na + 1) * nb) as f64).sqrt(),
                        );
                    }
                }
            }
        }
        UnitaryKind::Displace { v, w } => {
            for na in 0..m {
                for nb in 0..m {
                    if na + 1 < m {
                        gen.push(idx(na + 1, nb), idx(na, nb), v * ((na + 1) as f64).sqrt());
                    }
                    if na > 0 {
                        gen.push(idx(na - 1, nb), idx(na, nb), -v.conj() * (na as f64).sqrt());
                    }
                    if nb + 1 < m {
                        gen.push(idx(na, nb + 1), idx(na, nb), w * ((nb + 1) as f64).sqrt());
                    }
                    if nb > 0 {
                        gen.push(idx(na, nb - 1), idx(na, nb), -w.conj() * (nb as f64).sqrt());
                    }
                }
            }
        }
        UnitaryKind::Squeeze { mode, r } => {
            let half_r = 0.5 * r;
            for na in 0..m {
                for nb in 0..m {
                    let (n, up2, dn2): (usize, Option<usize>, Option<usize>) = match mode {
                        Mode::A => (
                            na,
                            (na + 2 < m).then(|| idx(na + 2, nb)),
                            (na >= 2).then(|| idx(na - 2, nb)),
                        ),
                        Mode::B => (
                            nb,
                            (nb + 2 < m).then(|| idx(na, nb + 2)),
                            (nb >= 2).then(|| idx(na, nb - 2)),
                        ),
                    };
                    // c†²: √((n+1)(n+2)); −c²: −√(n(n−1)).
                    if let Some(up) = up2 {
                        gen.push(up, idx(na, nb), C64::new(half_r * (((n + 1) * (n + 2)) as f64).sqrt(), 0.0));
                    }
                    if let Some(dn) = dn2 {
                        gen.push(dn, idx(na, nb), C64::new(-half_r * ((n * (n - 1)) as f64).sqrt(), 0.0));
                    }
                }
            }
        }
    }
    FockUnitary { n_max, gen }
}

fn expm_apply(gen: &SparseOp, input: &[C64]) -> Vec<C64> {
    // Substep so each Taylor factor has norm ≤ 1, then sum to machine
    // precision. Generators are anti-Hermitian, so nothing grows.
    let substeps = gen.norm_one().ceil().max(1.0) as usize;
    let scale = 1.0 / substeps as f64;
    let mut state = input.to_vec();
    let mut term = vec![C64::new(0.0, 0.0); input.len()];
    let mut next = vec![C64::new(0.0, 0.0); input.len()];
    for _ in 0..substeps {
        term.copy_from_slice(&state);
        let mut k = 1.0;
        loop {
            gen.apply(&term, &mut next);
            let factor = scale / k;
            let mut term_norm = 0.0;
            let mut state_norm = 0.0;
            for i in 0..state.len() {
                term[i] = next[i] * factor;
                state[i] += term[i];
                term_norm += term[i].norm_sqr();
                state_norm += state[i].norm_sqr();
            }
            if term_norm <= 1e-34 * state_norm || k > 60.0 {
                break;
            }
            k += 1.0;
        }
    }
    state
}

impl FockUnitary {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `U|ψ⟩`, rejecting results whose top-shell population exceeds the
    /// hard tail bound (relative to the state norm).
    pub fn apply(&self, state: &FockPure) -> Result<FockPure> {
        let out = self.apply_unchecked(state);
        let tail = out.tail_weight(2) / out.norm_sqr().max(1e-300);
        if tail > TAIL_BOUND {
            return Err(Error::TruncationTail { weight: tail, bound: TAIL_BOUND, n_max: self.n_max });
        }
        Ok(out)
    }

    /// `U|ψ⟩` without the tail check.
    pub fn apply_unchecked(&self, state: &FockPure) -> FockPure {
        assert_eq!(state.n_max(), self.n_max, "truncation mismatch");
        FockPure::from_amplitudes(self.n_max, expm_apply(&self.gen, state.amplitudes()))
    }

    /// `U†|ψ⟩` (= `exp(−G)|ψ⟩` for the anti-Hermitian generator `G`).
    pub fn apply_adjoint_unchecked(&self, state: &FockPure) -> FockPure {
        assert_eq!(state.n_max(), self.n_max, "truncation mismatch");
        FockPure::from_amplitudes(self.n_max, expm_apply(&self.gen.negated(), state.amplitudes()))
    }
}
