use super::NormEstimate;
use crate::disk::{pairwise_sum, safe_radius, safe_radius_l2, RadiusLadder};
use crate::error::{HvError, Result};
use crate::operators::volterra;
use crate::series::{circle_samples, TaylorSeries};
use crate::verdict::{Rule, Status};

const MAX_CIRCLE: usize = 1 << 22;
const MEAN_REL_TOL: f64 = 1e-12;

/// `M_p(r, f)`; `p = f64::INFINITY` gives the maximum modulus.
///
/// Periodic trapezoid over FFT circle samples, with the sample count doubled
/// until two successive means agree to `1e-12` relatively. `r = 1` is allowed
/// for exact polynomials.
pub fn mean_p(f: &TaylorSeries, r: f64, p: f64) -> Result<f64> {
    Ok(mean_p_detailed(f, r, p)?.0)
}

/// As [`mean_p`], also returning the final sample count and the last change.
pub fn mean_p_detailed(f: &TaylorSeries, r: f64, p: f64) -> Result<(f64, usize, f64)> {
    let limit = if f.is_exact() { 1.0 } else { 1.0 - f64::EPSILON };
    if !(0.0..=limit).contains(&r) {
        return Err(HvError::RadiusOutOfRange(r));
    }
    if !(p >= 1.0) {
        return Err(HvError::InvalidSpec(format!("mean exponent p = {p} must be at least 1")));
    }
    let deg = f.degree().unwrap_or(0);
    let mut m = (2 * (deg + 1)).next_power_of_two().max(64);
    // resolve the scale 1 - r of boundary singularities
    if r < 1.0 {
        m = m.max(((8.0 / (1.0 - r)) as usize).next_power_of_two()).min(MAX_CIRCLE);
    }
    let mut prev = circle_mean(f, r, p, m);
    loop {
        let next = m * 2;
        if next > MAX_CIRCLE {
            return Ok((prev, m, f64::INFINITY));
        }
        let v = circle_mean(f, r, p, next);
        let change = (v - prev).abs();
        if change <= MEAN_REL_TOL * v.abs().max(f64::MIN_POSITIVE) {
            return Ok((v, next, change));
        }
        prev = v;
        m = next;
    }
}

fn circle_mean(f: &TaylorSeries, r: f64, p: f64, m: usize) -> f64 {
    let vals = circle_samples(f, r, m);
    if p.is_infinite() {
        return vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let pw: Vec<f64> = if p == 2.0 {
        vals.iter().map(|v| v.norm_sqr()).collect()
    } else {
        vals.iter().map(|v| v.norm().powf(p)).collect()
    };
    (pairwise_sum(&pw) / m as f64).powf(1.0 / p)
}

/// `sqrt(sum |a_k|^2)` of the stored coefficients: the H² norm of the
/// truncation, a lower bound for the function itself.
pub fn h2_norm_exact(f: &TaylorSeries) -> f64 {
    let sq: Vec<f64> = f.coeffs().iter().map(|a| a.norm_sqr()).collect();
    pairwise_sum(&sq).sqrt()
}

/// `‖f‖_2` read along truncation orders instead of radii: the samples are the
/// Parseval norms of the prefixes of degree `start, 2 start, 4 start, ...` and
/// finally the full stored order, with the order as abscissa.
///
/// Increments along this ladder shrink with the coefficient tail, so finite
/// norms reach the Cauchy rule at desk-scale orders where the radius ladder
/// cannot. The tail bound at `r = 1`, when the envelope gives one, is recorded
/// in the note.
pub fn h2_prefix_ladder(f: &TaylorSeries, start: usize) -> NormEstimate {
    let n = f.order();
    let sq: Vec<f64> = f.coeffs().iter().map(|a| a.norm_sqr()).collect();
    let mut orders = Vec::new();
    let mut m = start.max(1);
    while m < n {
        orders.push(m);
        m *= 2;
    }
    orders.push(n);
    let samples: Vec<f64> = orders.iter().map(|&m| pairwise_sum(&sq[..=m]).sqrt()).collect();
    let xs: Vec<f64> = orders.iter().map(|&m| m as f64).collect();
    if f.is_exact() {
        let v = *samples.last().unwrap();
        let mut e = NormEstimate::exact(v, "polynomial: Parseval sum of all coefficients");
        e.samples = samples;
        e.abscissae = xs;
        return e;
    }
    let mut e = NormEstimate::from_ladder(samples, xs, 2.0);
    let tail = f.l2_tail(1.0);
    e.truncation_note = if tail.is_finite() {
        format!("prefix ladder to order {n}; squared tail beyond the truncation bounded by {tail:e}")
    } else {
        format!("prefix ladder to order {n}; no finite tail bound at r = 1")
    };
    e
}

/// `‖f‖_p = sup_r M_p(r, f)` read along the ladder.
///
/// Radii beyond the safe radius (tail bound above `tol · max(1, ‖f_N‖_2)`)
/// are kept in `extrapolated` and excluded from the verdict. For `p <= 2`
/// the square-summed tail controls the error, otherwise the sup tail.
pub fn hardy_norm(f: &TaylorSeries, p: f64, ladder: &RadiusLadder) -> Result<NormEstimate> {
    let scale = h2_norm_exact(f).max(1.0);
    let safe = if p <= 2.0 { safe_radius_l2(f, ladder.tol * scale) } else { safe_radius(f, ladder.tol * scale) };
    let mut samples = Vec::new();
    let mut xs = Vec::new();
    let mut extrapolated = Vec::new();
    for &r in &ladder.radii {
        let v = mean_p(f, r, p)?;
        if r <= safe {
            samples.push(v);
            xs.push(1.0 / (1.0 - r));
        } else {
            extrapolated.push(v);
        }
    }
    let energy = if p.is_finite() { p } else { 1.0 };
    let mut est = if f.is_exact() {
        let boundary = mean_p(f, 1.0, p)?;
        samples.push(boundary);
        xs.push(f64::INFINITY);
        let mut e = NormEstimate::from_ladder(samples, xs, energy);
        e.value = boundary;
        e.lower_bound = boundary;
        e.status = Status::Converged;
        e.rule = Rule::ExactPolynomial;
        e.truncation_note = "polynomial: evaluated on the unit circle".into();
        e
    } else {
        let mut e = NormEstimate::from_ladder(samples, xs, energy);
        e.truncation_note = format!(
            "truncated at degree {}; {} of {} ladder radii beyond the safe radius",
            f.order(),
            extrapolated.len(),
            ladder.depth()
        );
        e
    };
    est.safe_radius = Some(safe);
    est.extrapolated = extrapolated;
    Ok(est)
}

/// `‖f‖_{[T_g, H^p]} = ‖T_g f‖_p`.
pub fn optimal_domain_norm(g: &TaylorSeries, f: &TaylorSeries, p: f64, ladder: &RadiusLadder) -> Result<NormEstimate> {
    if g.coeffs().iter().skip(1).all(|a| a.norm() == 0.0) {
        return Err(HvError::ConstantSymbol);
    }
    hardy_norm(&volterra(g, f), p, ladder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{realize, FunctionSpec};
    use num_complex::Complex64;

    #[test]
    fn monomial_means_are_powers_of_r() {
        let f = TaylorSeries::monomial(5, 5);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let v = mean_p(&f, 0.8, p).unwrap();
            assert!((v - 0.8f64.powi(5)).abs() < 1e-14, "p={p}");
        }
        let one_plus_z = TaylorSeries::polynomial(vec![Complex64::new(1.0, 0.0); 2]).unwrap();
        assert!((mean_p(&one_plus_z, 0.0, 3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(mean_p(&realize(&FunctionSpec::NegLogOneMinusZ, 8).unwrap(), 1.0, 2.0).is_err());
    }

    #[test]
    fn parseval_oracle() {
        let f = realize(&FunctionSpec::binomial(-0.75), 500).unwrap();
        for r in [0.3, 0.9, 0.99] {
            let m2 = mean_p(&f, r, 2.0).unwrap();
            let direct: f64 = f.coeffs().iter().enumerate().map(|(k, a)| a.norm_sqr() * r.powi(2 * k as i32)).sum();
            assert!((m2 * m2 - direct).abs() < 1e-12 * direct.max(1.0));
        }
    }

    #[test]
    fn hardy_norm_of_monomial_and_constant() {
        let ladder = RadiusLadder::default();
        let e = hardy_norm(&TaylorSeries::monomial(3, 3), 2.0, &ladder).unwrap();
        assert_eq!(e.status, Status::Converged);
        assert!((e.value - 1.0).abs() < 1e-14);
        let c = TaylorSeries::polynomial(vec![Complex64::new(-2.5, 0.0)]).unwrap();
        assert!((hardy_norm(&c, 1.0, &ladder).unwrap().value - 2.5).abs() < 1e-14);
    }

    #[test]
    fn h2_exact_examples() {
        let f = TaylorSeries::from_real(&[1.0, 1.0]).unwrap();
        assert!((h2_norm_exact(&f) - 2f64.sqrt()).abs() < 1e-15);
        let n = 20_000;
        let l = realize(&FunctionSpec::NegLogOneMinusZ, n).unwrap();
        let basel = std::f64::consts::PI / 6f64.sqrt();
        assert!((h2_norm_exact(&l) - basel).abs() < 1.0 / n as f64);
    }

    #[test]
    fn constant_symbol_is_rejected() {
        let g = TaylorSeries::polynomial(vec![Complex64::new(2.0, 0.0)]).unwrap();
        let f = TaylorSeries::unit(0);
        assert!(matches!(optimal_domain_norm(&g, &f, 2.0, &RadiusLadder::default()), Err(HvError::ConstantSymbol)));
    }
}
