use super::TaylorSeries;
use crate::dd;
use crate::error::{HvError, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Evaluation {
    pub value: Complex64,
    /// Bound on the omitted tail `sum_{k>N} |a_k| |z|^k`; `None` if the
    /// available hint cannot control it at this radius.
    pub tail_bound: Option<f64>,
    /// Rounding error bound of the compensated evaluation.
    pub rounding_bound: f64,
}

/// Evaluate the truncation at `z` by compensated Horner.
pub fn evaluate(f: &TaylorSeries, z: Complex64) -> Result<Evaluation> {
    let r = z.norm();
    if !(r < 1.0) {
        return Err(HvError::RadiusOutOfRange(r));
    }
    let (value, abs_sum) = dd::compensated_horner(f.coeffs(), z);
    let n = f.order() as f64;
    let u = f64::EPSILON / 2.0;
    let gamma = 2.0 * (4.0 * n + 2.0) * u / (1.0 - (4.0 * n + 2.0) * u);
    let rounding_bound = u * value.norm() + gamma * gamma * abs_sum;
    let tail = f.sup_tail(r);
    Ok(Evaluation { value, tail_bound: tail.is_finite().then_some(tail), rounding_bound })
}

/// `f(r e^{2 pi i m / M})` for `m = 0..M`, via one inverse DFT of the
/// radius-scaled, zero-padded coefficients. `M` must be a power of two with
/// `M >= 2 (N + 1)`.
pub fn evaluate_on_circle(f: &TaylorSeries, r: f64, m: usize) -> Result<Vec<Complex64>> {
    if !(0.0..1.0).contains(&r) {
        return Err(HvError::RadiusOutOfRange(r));
    }
    if !m.is_power_of_two() || m < 2 * (f.order() + 1) {
        return Err(HvError::InvalidGrid(format!(
            "circle sample count {m} must be a power of two >= {}",
            2 * (f.order() + 1)
        )));
    }
    Ok(circle_samples(f, r, m))
}

/// Samples on the circle of radius `r` (any `r >= 0`) at `m` equispaced
/// angles. Coefficients beyond `m` are folded modulo `m`, which is exact for
/// point values, so `m` may be smaller than the order.
pub fn circle_samples(f: &TaylorSeries, r: f64, m: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut rk = 1.0;
    for (k, a) in f.coeffs().iter().enumerate() {
        buf[k % m] += a * rk;
        rk *= r;
        if rk == 0.0 {
            break;
        }
    }
    FFT_PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m).process(&mut buf));
    buf
}

thread_local! {
    static FFT_PLANNER: std::cell::RefCell<FftPlanner<f64>> = std::cell::RefCell::new(FftPlanner::new());
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn evaluate_linear() {
        let f = TaylorSeries::polynomial(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let e = evaluate(&f, Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(e.value, Complex64::new(1.5, 0.0));
        assert_eq!(e.tail_bound, Some(0.0));
        assert!(evaluate(&f, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn circle_of_monomial_z() {
        let f = TaylorSeries::monomial(1, 1);
        let r = 0.7;
        let v = evaluate_on_circle(&f, r, 4).unwrap();
        let want = [Complex64::new(r, 0.0), Complex64::new(0.0, r), Complex64::new(-r, 0.0), Complex64::new(0.0, -r)];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(evaluate_on_circle(&f, r, 2).is_err());
        assert!(evaluate_on_circle(&f, r, 6).is_err());
    }

    #[test]
    fn circle_matches_horner_on_random_degree_100() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let coeffs: Vec<Complex64> =
            (0..=100).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = TaylorSeries::new(coeffs).unwrap();
        let r = 0.93;
        let m = 256;
        let v = evaluate_on_circle(&f, r, m).unwrap();
        for (j, s) in v.iter().enumerate() {
            let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / m as f64);
            let h = evaluate(&f, z).unwrap().value;
            assert!((s - h).norm() < 1e-12, "j={j}: {s} vs {h}");
        }
    }

    #[test]
    fn folding_is_exact_for_point_values() {
        let f = TaylorSeries::from_real(&(0..300).map(|k| 1.0 / (k as f64 + 1.0)).collect::<Vec<_>>()).unwrap();
        let r = 0.8;
        let folded = circle_samples(&f, r, 64);
        let full = evaluate_on_circle(&f, r, 1024).unwrap();
        for j in 0..64 {
            assert!((folded[j] - full[16 * j]).norm() < 1e-12);
        }
    }
}
