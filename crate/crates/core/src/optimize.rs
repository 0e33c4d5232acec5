//! Deterministic scalar optimization helpers.

/// Golden-section search for the minimum of `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)`. The bracket shrinks by the golden ratio each
/// iteration, so `max_evals` around 80 resolves `x` to ~1e-12 of the
/// original interval.
pub fn golden_section_min(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
    max_evals: usize,
) -> (f64, f64) {
    const PHI: f64 = 1.618_033_988_749_895;
    const RESP: f64 = 2.0 - PHI;

    let mut x1 = a + RESP * (b - a);
    let mut x2 = b - RESP * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;

    while evals < max_evals && (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + RESP * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - RESP * (b - a);
            f2 = f(x2);
        }
        evals += 1;
    }

    if f1 < f2 { (x1, f1) } else { (x2, f2) }
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
pub fn golden_section_max(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_evals: usize,
) -> (f64, f64) {
    let (x, neg) = golden_section_min(|x| -f(x), a, b, tol, max_evals);
    (x, -neg)
}

/// Count strict interior local maxima of `f` sampled on a uniform grid.
///
/// Used as a unimodality pre-scan before bracketed maximization.
pub fn count_local_maxima(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> usize {
    assert!(points >= 3);
    let ys: Vec<f64> = (0..points)
        .map(|i| f(a + (b - a) * i as f64 / (points - 1) as f64))
        .collect();
    ys.windows(3)
        .filter(|w| w[1] > w[0] && w[1] > w[2])
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        // A quadratic minimum is only locatable to ~√ε of the function
        // scale, however tight the bracket.
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, -1.0, 1.0, 1e-12, 200);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-13);
    }

    #[test]
    fn max_of_concave() {
        let (x, fx) = golden_section_max(|x| -(x - 2.0).powi(2) + 5.0, 0.0, 4.0, 1e-12, 200);
        assert!((x - 2.0).abs() < 1e-6);
        assert!((fx - 5.0).abs() < 1e-12);
    }

    #[test]
    fn counts_maxima() {
        assert_eq!(count_local_maxima(|x| -(x * x), -1.0, 1.0, 101), 1);
        assert_eq!(count_local_maxima(|x| (6.0 * x).sin(), 0.0, 3.0, 301), 3);
        assert_eq!(count_local_maxima(|_| 1.0, 0.0, 1.0, 11), 0);
    }
}
