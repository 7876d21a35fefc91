use crate::disk::{area_integral_refined, pairwise_sum, series_density, PolarGrid};
use crate::error::Result;
use crate::operators::multiplication;
use crate::series::{differentiate, TaylorSeries};
use num_complex::Complex64;

const MAX_ANGLES: usize = 1 << 16;

/// Littlewood–Paley functional `|f(0)|^2 + ∫ |f'|^2 (1 - |z|^2) dA` of the
/// stored coefficients, in closed form: `|a_0|^2 + Σ |a_k|^2 k/(k+1)`.
pub fn lp_functional(f: &TaylorSeries) -> f64 {
    let terms: Vec<f64> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| if k == 0 { a.norm_sqr() } else { a.norm_sqr() * k as f64 / (k + 1) as f64 })
        .collect();
    pairwise_sum(&terms)
}

// Gauss points in u = r^2 and angles making the rule exact for degree `deg`.
fn exact_grid(deg: usize) -> Result<PolarGrid> {
    PolarGrid::disk(deg / 2 + 2, (2 * (deg + 1)).next_power_of_two().max(16))
}

/// Same functional by quadrature of `|f'|^2 (1 - r^2)` on a polar grid.
pub fn lp_functional_quadrature(f: &TaylorSeries) -> Result<f64> {
    let df = differentiate(f);
    let grid = exact_grid(df.order() + 1)?;
    let (area, _, _) = area_integral_refined(series_density(&df, |r| 1.0 - r * r), &grid, 1e-14, MAX_ANGLES);
    Ok(f.coeff(0).norm_sqr() + area)
}

/// `⟨f, h⟩_{A^2_1} = Σ a_k conj(b_k) · 2/((k+1)(k+2))` over the common range.
pub fn a21_inner(f: &TaylorSeries, h: &TaylorSeries) -> Complex64 {
    let n = f.order().min(h.order());
    let mut re = Vec::with_capacity(n + 1);
    let mut im = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let v = f.coeff(k) * h.coeff(k).conj() * a21_weight(k);
        re.push(v.re);
        im.push(v.im);
    }
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
}

pub fn a21_weight(k: usize) -> f64 {
    2.0 / ((k + 1) as f64 * (k + 2) as f64)
}

/// `‖f‖_{A^2_w}` with `w = |g'|^2 (1 - |z|^2)`, by polar quadrature of
/// `|f g'|^2 (1 - r^2)` over the product truncated to its valid order.
pub fn bergman_weighted_norm(f: &TaylorSeries, g: &TaylorSeries) -> Result<f64> {
    let h = multiplication(f, &differentiate(g));
    let grid = exact_grid(h.order() + 1)?;
    let (v, _, _) = area_integral_refined(series_density(&h, |r| 1.0 - r * r), &grid, 1e-14, MAX_ANGLES);
    Ok(v.sqrt())
}

/// Coefficient form of [`bergman_weighted_norm`]: `Σ |c_k|^2 / ((k+1)(k+2))`
/// for `f g' = Σ c_k z^k`.
pub fn bergman_weighted_norm_coeff(f: &TaylorSeries, g: &TaylorSeries) -> f64 {
    let h = multiplication(f, &differentiate(g));
    let terms: Vec<f64> = h.coeffs().iter().enumerate().map(|(k, c)| c.norm_sqr() * a21_weight(k) / 2.0).collect();
    pairwise_sum(&terms).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::h2_norm_exact;
    use crate::series::{realize, reciprocal, FunctionSpec};

    #[test]
    fn lp_closed_forms() {
        let c = TaylorSeries::polynomial(vec![Complex64::new(0.0, -2.0)]).unwrap();
        assert_eq!(lp_functional(&c), 4.0);
        assert_eq!(lp_functional(&TaylorSeries::monomial(1, 1)), 0.5);
        let f = realize(&FunctionSpec::binomial(-0.3), 200).unwrap();
        let q = lp_functional_quadrature(&f).unwrap();
        assert!((q - lp_functional(&f)).abs() < 1e-10, "{q}");
        let h2 = h2_norm_exact(&f).powi(2);
        assert!(0.5 * h2 <= lp_functional(&f) && lp_functional(&f) <= h2);
    }

    #[test]
    fn a21_monomials() {
        for j in 0..6 {
            for k in 0..6 {
                let v = a21_inner(&TaylorSeries::monomial(j, 8), &TaylorSeries::monomial(k, 8));
                let want = if j == k { 2.0 / ((k + 1) * (k + 2)) as f64 } else { 0.0 };
                assert!((v.re - want).abs() < 1e-16 && v.im == 0.0);
            }
        }
    }

    #[test]
    fn reciprocal_of_inner_against_its_antiderivative() {
        let n = 48;
        let s = realize(&FunctionSpec::SingularInner, n).unwrap();
        let inv = reciprocal(&s, n).unwrap();
        let g = realize(&FunctionSpec::antiderivative(FunctionSpec::SingularInner), n + 1).unwrap();
        let q = bergman_weighted_norm(&inv, &g).unwrap();
        let c = bergman_weighted_norm_coeff(&inv, &g);
        assert!((q * q - 0.5).abs() < 1e-6, "{}", q * q);
        assert!((q - c).abs() < 1e-10);
    }
}
