//! Mutual information and capacity of the power-constrained two-mode
//! channel.
//!
//! A complex symbol with Gaussian prior of variance σ² rides the
//! twin-beam (or, equivalently, squeezed-pair) carrier; the channel
//! multiplies the conditional mean by `g = e^{−Qt}` and inflates the
//! conditional variance to `Δ²(t)`. Everything reduces to the
//! Shannon-type closed form `I = ln(1 + g²σ²/Δ²)`, evaluated in nats;
//! conversion to bits happens only at presentation.

use crate::error::{Error, Result};
use crate::evolution::accumulated_noise;
use crate::gaussian::heterodyne_variance;
use crate::optimize::{count_local_maxima, golden_section_max};

/// Gaussian-prior, Gaussian-conditional channel description: prior
/// variance σ², amplitude gain g of the conditional mean, conditional
/// variance Δ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInfoInput {
    pub sigma2: f64,
    pub g: f64,
    pub delta2: f64,
}

/// Mutual information `ln(1 + g²σ²/Δ²)` in nats.
pub fn gaussian_mutual_info(input: &MutualInfoInput) -> Result<f64> {
    if !(input.sigma2.is_finite() && input.sigma2 >= 0.0) {
        return Err(Error::InvalidVariance { name: "sigma2", value: input.sigma2 });
    }
    if !(input.delta2.is_finite() && input.delta2 > 0.0) {
        return Err(Error::InvalidVariance { name: "delta2", value: input.delta2 });
    }
    Ok((1.0 + input.g * input.g * input.sigma2 / input.delta2).ln())
}

/// Prior variance `σ² = 4(N − λ²/(1−λ²))` left for displacement coding
/// once `λ²/(1−λ²)` photons per mode go into squeezing.
pub fn prior_variance(photons: f64, lambda: f64) -> Result<f64> {
    if !(photons.is_finite() && photons >= 0.0) {
        return Err(Error::NegativeParameter { name: "photons", value: photons });
    }
    if !(lambda.is_finite() && (0.0..1.0).contains(&lambda)) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    let squeeze = lambda * lambda / (1.0 - lambda * lambda);
    if squeeze > photons {
        return Err(Error::PowerConstraint { squeeze, budget: photons });
    }
    Ok(4.0 * (photons - squeeze))
}

/// Mutual information at time `t` for the channel with Fokker-Planck
/// drift `Q` and diffusion `D`:
/// `I = ln(1 + 4(N − λ²/(1−λ²)) / [(D/Q)(e^{2Qt} − 1) + Δλ²])`.
///
/// Consistent by construction with the `prior_variance` →
/// Fokker-Planck-evolution → `gaussian_mutual_info` pipeline under
/// `g = e^{−Qt}`; `Q = 0` (compensated loss) falls back to the `2Dt`
/// limit of the noise term.
pub fn mutual_info_channel(photons: f64, lambda: f64, q: f64, d: f64, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::NegativeParameter { name: "t", value: t });
    }
    let sigma2 = prior_variance(photons, lambda)?;
    let g = (-q * t).exp();
    // (D/Q)(e^{2Qt} − 1) = accumulated noise referred back to the input.
    let grown = accumulated_noise(q, d, t) / (g * g);
    let delta2 = grown + heterodyne_variance(lambda);
    gaussian_mutual_info(&MutualInfoInput { sigma2, g: 1.0, delta2 })
}

/// Lossless optimum: `λ* = N/(N+1)`, `I = 2 ln(1 + 2N)` nats.
pub fn capacity_ideal(photons: f64) -> Result<(f64, f64)> {
    if !(photons.is_finite() && photons >= 0.0) {
        return Err(Error::NegativeParameter { name: "photons", value: photons });
    }
    let lambda = photons / (photons + 1.0);
    Ok((lambda, 2.0 * (1.0 + 2.0 * photons).ln()))
}

/// Lossy channel at the lossless operating point `λ = N/(N+1)`:
/// `I = ln(1 + 4N(N+1)/[1 + (2N+1)(2n̄+1)(e^{Γt} − 1)])`.
pub fn mutual_info_lossy(photons: f64, gamma: f64, nbar: f64, t: f64) -> Result<f64> {
    for (name, value) in [("photons", photons), ("gamma", gamma), ("nbar", nbar), ("t", t)] {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::NegativeParameter { name, value });
        }
    }
    let n = photons;
    let noise = 1.0 + (2.0 * n + 1.0) * (2.0 * nbar + 1.0) * ((gamma * t).exp_m1());
    Ok((1.0 + 4.0 * n * (n + 1.0) / noise).ln())
}

/// Lossy channel compensated by a distributed PIA at `K = Γ/2`: the
/// exponential erasure becomes linear,
/// `I = ln(1 + 4N(N+1)/[1 + (2N+1)(2n̄+1)Γt])`.
pub fn mutual_info_compensated(photons: f64, gamma: f64, nbar: f64, t: f64) -> Result<f64> {
    for (name, value) in [("photons", photons), ("gamma", gamma), ("nbar", nbar), ("t", t)] {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::NegativeParameter { name, value });
        }
    }
    let n = photons;
    let noise = 1.0 + (2.0 * n + 1.0) * (2.0 * nbar + 1.0) * gamma * t;
    Ok((1.0 + 4.0 * n * (n + 1.0) / noise).ln())
}

/// Mean photons per mode of the compensated channel after a transient:
/// `N(t) = ½[N₀ + n̄ − ½ + (N₀ − n̄ + ½)e^{−2Γt} + Γ(2n̄+1)t]`,
/// approximately linear growth driven by the pump.
pub fn photon_growth(n0: f64, gamma: f64, nbar: f64, t: f64) -> Result<f64> {
    for (name, value) in [("n0", n0), ("gamma", gamma), ("nbar", nbar), ("t", t)] {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::NegativeParameter { name, value });
        }
    }
    Ok(0.5
        * (n0 + nbar - 0.5
            + (n0 - nbar + 0.5) * (-2.0 * gamma * t).exp()
            + gamma * (2.0 * nbar + 1.0) * t))
}

/// Deterministic maximization of [`mutual_info_channel`] over the
/// feasible squeezing fraction `λ ∈ [0, λ_max(N)]`, `λ_max = √(N/(N+1))`.
///
/// A coarse pre-scan asserts unimodality before the bracketed search;
/// multiple interior maxima abort rather than silently returning one.
pub fn optimize_lambda(photons: f64, q: f64, d: f64, t: f64) -> Result<(f64, f64)> {
    if !(photons.is_finite() && photons >= 0.0) {
        return Err(Error::NegativeParameter { name: "photons", value: photons });
    }
    if photons == 0.0 {
        return Ok((0.0, 0.0));
    }
    let lambda_max = (photons / (photons + 1.0)).sqrt();
    let objective =
        |lambda: f64| mutual_info_channel(photons, lambda, q, d, t).unwrap_or(f64::NEG_INFINITY);
    let maxima = count_local_maxima(objective, 0.0, lambda_max, 65);
    if maxima > 1 {
        return Err(Error::NotUnimodal(maxima));
    }
    let (lambda, info) = golden_section_max(objective, 0.0, lambda_max, 1e-10, 400);
    // The bracket endpoints can beat the interior probe when the optimum
    // sits on the boundary.
    let candidates = [(0.0, objective(0.0)), (lambda, info), (lambda_max, objective(lambda_max))];
    let best = candidates
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    Ok(best)
}

/// Per-mode information of a lossless coherent-state channel, `ln(1+N)`
/// nats: the comparison baseline the twin-beam channel beats by one bit
/// per mode at high power.
pub fn coherent_reference(photons: f64) -> Result<f64> {
    if !(photons.is_finite() && photons >= 0.0) {
        return Err(Error::NegativeParameter { name: "photons", value: photons });
    }
    Ok((1.0 + photons).ln())
}

/// Nats → bits.
pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::fp_evolve;
    use crate::measurement::ComplexGaussian;
    use crate::C64;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gaussian_mutual_info_basics() {
        let zero = gaussian_mutual_info(&MutualInfoInput { sigma2: 0.0, g: 1.0, delta2: 0.5 });
        assert_eq!(zero.unwrap(), 0.0);

        // σ² = 8/3, g = 1, Δ² = 1/3 → ln 9.
        let i = gaussian_mutual_info(&MutualInfoInput {
            sigma2: 8.0 / 3.0,
            g: 1.0,
            delta2: 1.0 / 3.0,
        })
        .unwrap();
        assert_abs_diff_eq!(i, 9.0_f64.ln(), epsilon = 1e-14);

        // Doubling g quadruples the SNR term.
        let snr = |g: f64| {
            (gaussian_mutual_info(&MutualInfoInput { sigma2: 2.0, g, delta2: 0.7 })
                .unwrap())
            .exp_m1()
        };
        assert_abs_diff_eq!(snr(2.0) / snr(1.0), 4.0, epsilon = 1e-10);

        assert!(gaussian_mutual_info(&MutualInfoInput { sigma2: 1.0, g: 1.0, delta2: 0.0 }).is_err());
    }

    #[test]
    fn prior_variance_budget() {
        assert_abs_diff_eq!(prior_variance(3.0, 0.0).unwrap(), 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(prior_variance(1.0, 0.5).unwrap(), 8.0 / 3.0, epsilon = 1e-14);
        assert!(matches!(
            prior_variance(1.0, 0.8),
            Err(Error::PowerConstraint { .. })
        ));
    }

    #[test]
    fn channel_info_closed_form() {
        // t = 0 at the ideal operating point: ln 9 for N = 1.
        let i = mutual_info_channel(1.0, 0.5, 0.5, 0.5, 0.0).unwrap();
        assert_abs_diff_eq!(i, 9.0_f64.ln(), epsilon = 1e-13);

        // N = 10, λ = 10/11, Q = D = 1/2, t = ln 2 → ln 21.
        let i = mutual_info_channel(10.0, 10.0 / 11.0, 0.5, 0.5, 2.0_f64.ln()).unwrap();
        assert_abs_diff_eq!(i, 21.0_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn channel_info_matches_pipeline() {
        // Independent route: prior variance, Fokker-Planck evolution of the
        // conditional density, then the generic Gaussian formula.
        for &n in &[0.5, 1.0, 4.0, 10.0] {
            for &lambda in &[0.0, 0.2, 0.5, 0.8] {
                if lambda * lambda / (1.0 - lambda * lambda) > n {
                    continue;
                }
                for &t in &[0.0, 0.3, 1.0, 2.5] {
                    for (q, d) in [(0.5, 0.5), (0.5, 1.5), (0.0, 0.5), (-0.25, 0.4)] {
                        let direct = mutual_info_channel(n, lambda, q, d, t).unwrap();
                        let sigma2 = prior_variance(n, lambda).unwrap();
                        let cond = ComplexGaussian::isotropic_new(
                            C64::new(0.0, 0.0),
                            heterodyne_variance(lambda),
                        )
                        .unwrap();
                        let evolved = fp_evolve(&cond, q, d, t).unwrap();
                        let pipeline = gaussian_mutual_info(&MutualInfoInput {
                            sigma2,
                            g: (-q * t).exp(),
                            delta2: evolved.isotropic_variance(1e-12).unwrap(),
                        })
                        .unwrap();
                        assert_abs_diff_eq!(direct, pipeline, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn ideal_capacity_values() {
        assert_eq!(capacity_ideal(0.0).unwrap(), (0.0, 0.0));
        let (l1, i1) = capacity_ideal(1.0).unwrap();
        assert_abs_diff_eq!(l1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(i1, 2.0 * 3.0_f64.ln(), epsilon = 1e-15);
        let (l10, i10) = capacity_ideal(10.0).unwrap();
        assert_abs_diff_eq!(l10, 10.0 / 11.0, epsilon = 1e-15);
        assert_abs_diff_eq!(i10, 2.0 * 21.0_f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn lossy_formula() {
        // Zero loss reduces to the ideal capacity.
        for n in [0.5, 1.0, 10.0] {
            let (_, ideal) = capacity_ideal(n).unwrap();
            assert_abs_diff_eq!(mutual_info_lossy(n, 1.0, 0.0, 0.0).unwrap(), ideal, epsilon = 1e-13);
        }

        // N = 10, n̄ = 0, Γt = ln 2 → ln 21.
        let i = mutual_info_lossy(10.0, 1.0, 0.0, 2.0_f64.ln()).unwrap();
        assert_abs_diff_eq!(i, 21.0_f64.ln(), epsilon = 1e-12);

        // Information is erased exponentially at long times.
        let i5 = mutual_info_lossy(10.0, 1.0, 0.0, 5.0).unwrap();
        let i10 = mutual_info_lossy(10.0, 1.0, 0.0, 10.0).unwrap();
        assert!(i10 < i5 && i10 < 1e-2);
        let ratio = i10 / i5;
        assert!((ratio - (-5.0_f64).exp()).abs() < 5e-3, "ratio {ratio}");
    }

    #[test]
    fn compensated_formula() {
        for n in [0.5, 1.0, 10.0] {
            let (_, ideal) = capacity_ideal(n).unwrap();
            assert_abs_diff_eq!(
                mutual_info_compensated(n, 1.0, 0.0, 0.0).unwrap(),
                ideal,
                epsilon = 1e-13
            );
        }

        let i = mutual_info_compensated(10.0, 1.0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(i, 21.0_f64.ln(), epsilon = 1e-12);

        // Γt < e^{Γt} − 1 for t > 0, so compensation always wins.
        for i in 1..=50 {
            let t = 0.1 * i as f64;
            assert!(
                mutual_info_compensated(5.0, 1.0, 0.2, t).unwrap()
                    > mutual_info_lossy(5.0, 1.0, 0.2, t).unwrap()
            );
        }
    }

    #[test]
    fn photon_growth_formula() {
        assert_abs_diff_eq!(photon_growth(1.0, 1.0, 0.0, 0.0).unwrap(), 1.0, epsilon = 1e-15);

        // N₀ = 1, n̄ = 0, Γ = 1, t = 1 → ½[0.5 + 1.5e^{−2} + 1].
        let n = photon_growth(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(n, 0.5 * (0.5 + 1.5 * (-2.0_f64).exp() + 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(n, 0.8515, epsilon = 5e-5);

        // Slope approaches Γ(2n̄+1)/2.
        let slope = (photon_growth(1.0, 1.0, 0.3, 101.0).unwrap()
            - photon_growth(1.0, 1.0, 0.3, 100.0).unwrap())
            / 1.0;
        assert_abs_diff_eq!(slope, 0.5 * (2.0 * 0.3 + 1.0), epsilon = 1e-10);
    }

    #[test]
    fn lambda_optimization() {
        // Lossless: recovers λ* = N/(N+1).
        for n in [1.0, 4.0, 10.0] {
            let (lambda, info) = optimize_lambda(n, 0.5, 0.5, 0.0).unwrap();
            assert_abs_diff_eq!(lambda, n / (n + 1.0), epsilon = 1e-8);
            let (_, ideal) = capacity_ideal(n).unwrap();
            assert_abs_diff_eq!(info, ideal, epsilon = 1e-10);
        }

        // Heavy loss pushes the optimum below N/(N+1); confirm against a
        // coarse grid scan.
        let (lambda, info) = optimize_lambda(1.0, 0.5, 0.5, 1.0).unwrap();
        assert!(lambda < 0.5);
        let mut best = (0.0, f64::NEG_INFINITY);
        let lambda_max = (1.0_f64 / 2.0).sqrt();
        for i in 0..=4000 {
            let l = lambda_max * i as f64 / 4000.0;
            if let Ok(v) = mutual_info_channel(1.0, l, 0.5, 0.5, 1.0) {
                if v > best.1 {
                    best = (l, v);
                }
            }
        }
        assert!((lambda - best.0).abs() < 1e-3, "opt {lambda} scan {}", best.0);
        assert!(info >= best.1 - 1e-10);

        assert_eq!(optimize_lambda(0.0, 0.5, 0.5, 1.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn coherent_baseline_gap() {
        assert_eq!(coherent_reference(0.0).unwrap(), 0.0);

        // Per-mode gap → ln 2 at high power; N = 1000 within 0.1%.
        let n = 1000.0;
        let (_, ideal) = capacity_ideal(n).unwrap();
        let gap = ideal / 2.0 - coherent_reference(n).unwrap();
        assert_abs_diff_eq!(gap, (2001.0_f64 / 1001.0).ln(), epsilon = 1e-12);
        assert!((gap - std::f64::consts::LN_2).abs() / std::f64::consts::LN_2 < 1e-3);
    }

    #[test]
    fn monotonicity_and_units() {
        // Decreasing in t for Q > 0.
        let mut prev = f64::INFINITY;
        for i in 0..=10 {
            let t = i as f64 * 0.4;
            let v = mutual_info_channel(4.0, 0.6, 0.5, 0.5, t).unwrap();
            assert!(v < prev);
            prev = v;
        }
        // Increasing in N at fixed λ.
        let mut prev = -1.0;
        for n in [1.0, 2.0, 5.0, 10.0, 20.0] {
            let v = mutual_info_channel(n, 0.6, 0.5, 0.5, 0.5).unwrap();
            assert!(v > prev);
            prev = v;
        }
        // Bits are nats/ln 2 exactly.
        let nats = 2.0 * 3.0_f64.ln();
        assert_eq!(nats_to_bits(nats), nats / std::f64::consts::LN_2);
    }
}
