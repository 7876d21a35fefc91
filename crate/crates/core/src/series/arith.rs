use super::TaylorSeries;
use crate::error::{HvError, Result};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn both_exact(a: &TaylorSeries, b: &TaylorSeries) -> bool {
    a.is_exact() && b.is_exact()
}

/// Termwise `sum c_i f_i`; output order is the largest input order.
pub fn linear_combine(terms: &[(Complex64, &TaylorSeries)]) -> TaylorSeries {
    let order = terms.iter().map(|(_, f)| f.order()).max().unwrap_or(0);
    let mut out = vec![ZERO; order + 1];
    for (c, f) in terms {
        for (o, a) in out.iter_mut().zip(f.coeffs()) {
            *o += c * a;
        }
    }
    let exact = terms.iter().all(|(_, f)| f.is_exact());
    let s = TaylorSeries::from_parts(out, None);
    if exact {
        s.exact()
    } else {
        s
    }
}

/// `c_n = sum_{j<=n} a_j b_{n-j}` for `n <= order`.
///
/// Index pairs `(j, n-j)` and `(n-j, j)` are added together before
/// accumulating in ascending `j`, so swapping the arguments reproduces the
/// result bit for bit. Work is proportional to the shorter effective support.
pub fn cauchy_product(f: &TaylorSeries, g: &TaylorSeries, order: usize) -> TaylorSeries {
    let a = f.coeffs();
    let b = g.coeffs();
    let (Some(da), Some(db)) = (f.degree(), g.degree()) else {
        return TaylorSeries::zero(order);
    };
    let get = |v: &[Complex64], i: usize, d: usize| if i <= d { v[i] } else { ZERO };
    let hi = da.max(db);
    let lo_deg = da.min(db);
    let mut out = vec![ZERO; order + 1];
    for (n, slot) in out.iter_mut().enumerate() {
        if n > da + db {
            break;
        }
        let start = n.saturating_sub(hi);
        let end = (n / 2).min(lo_deg);
        let mut acc = ZERO;
        for j in start..=end {
            let k = n - j;
            if j == k {
                acc += a[j] * b[j];
            } else {
                acc += get(a, j, da) * get(b, k, db) + get(a, k, da) * get(b, j, db);
            }
        }
        *slot = acc;
    }
    let s = TaylorSeries::from_parts(out, None);
    if both_exact(f, g) && order >= da + db {
        s.exact()
    } else {
        s
    }
}

/// Series quotient `f / h`, solving `h * q = f` coefficient by coefficient.
pub fn divide(f: &TaylorSeries, h: &TaylorSeries, order: usize) -> Result<TaylorSeries> {
    let h0 = h.coeff(0);
    if h0 == ZERO {
        return Err(HvError::InvalidSpec("division by a series with zero constant term".into()));
    }
    let dh = h.degree().unwrap_or(0);
    let hc = h.coeffs();
    let inv = 1.0 / h0;
    let mut q = vec![ZERO; order + 1];
    for n in 0..=order {
        let mut acc = f.coeff(n);
        for j in 1..=n.min(dh) {
            acc -= hc[j] * q[n - j];
        }
        q[n] = acc * inv;
    }
    let s = TaylorSeries::from_parts(q, None);
    if h.is_exact() && dh == 0 && f.is_exact() && f.degree().map_or(true, |d| d <= order) {
        Ok(s.exact())
    } else {
        Ok(s)
    }
}

pub fn reciprocal(f: &TaylorSeries, order: usize) -> Result<TaylorSeries> {
    divide(&TaylorSeries::unit(0), f, order)
}

/// `exp(f)` from `e' = f' e`.
pub fn series_exp(f: &TaylorSeries, order: usize) -> TaylorSeries {
    let df = f.degree().unwrap_or(0);
    let a = f.coeffs();
    let mut e = vec![ZERO; order + 1];
    e[0] = f.coeff(0).exp();
    for n in 1..=order {
        let mut acc = ZERO;
        for k in 1..=n.min(df) {
            acc += a[k] * (k as f64) * e[n - k];
        }
        e[n] = acc / n as f64;
    }
    let s = TaylorSeries::from_parts(e, None);
    if f.is_exact() && df == 0 {
        s.exact()
    } else {
        s
    }
}

/// Principal-branch `log(f)` from `f l' = f'`.
pub fn series_log(f: &TaylorSeries, order: usize) -> Result<TaylorSeries> {
    let f0 = f.coeff(0);
    if f0 == ZERO {
        return Err(HvError::InvalidSpec("logarithm of a series with zero constant term".into()));
    }
    let df = f.degree().unwrap_or(0);
    let a = f.coeffs();
    let mut l = vec![ZERO; order + 1];
    l[0] = f0.ln();
    for n in 1..=order {
        let mut acc = f.coeff(n) * n as f64;
        for k in n.saturating_sub(df).max(1)..n {
            acc -= l[k] * (k as f64) * a[n - k];
        }
        l[n] = acc / (f0 * n as f64);
    }
    Ok(TaylorSeries::from_parts(l, None))
}

/// Principal-branch `f^alpha = exp(alpha log f)`.
pub fn series_pow(f: &TaylorSeries, alpha: f64, order: usize) -> Result<TaylorSeries> {
    if f.coeff(0) == ZERO {
        return Err(HvError::InvalidSpec("power of a series with zero constant term".into()));
    }
    let mut l = series_log(f, order)?.into_coeffs();
    for c in l.iter_mut() {
        *c *= alpha;
    }
    Ok(series_exp(&TaylorSeries::from_parts(l, None), order))
}

/// `b_k = (k+1) a_{k+1}`; the order drops by one (a constant stays order 0).
pub fn differentiate(f: &TaylorSeries) -> TaylorSeries {
    let a = f.coeffs();
    let out: Vec<Complex64> = if a.len() == 1 {
        vec![ZERO]
    } else {
        a.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
    };
    let hint = f.tail_hint().filter(|h| h.kind == super::TailKind::Exact && !h.heuristic).cloned();
    TaylorSeries::from_parts(out, hint)
}

/// `b_0 = 0`, `b_{k+1} = a_k / (k+1)`: the primitive vanishing at the origin.
pub fn antiderivative(f: &TaylorSeries) -> TaylorSeries {
    let mut out = Vec::with_capacity(f.order() + 2);
    out.push(ZERO);
    out.extend(f.coeffs().iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
    let hint = f.tail_hint().filter(|h| h.kind == super::TailKind::Exact && !h.heuristic).cloned();
    TaylorSeries::from_parts(out, hint)
}

/// Multiply by `z^n`, raising the order by `n`.
pub fn shift_up(f: &TaylorSeries, n: usize) -> TaylorSeries {
    let mut out = vec![ZERO; n];
    out.extend_from_slice(f.coeffs());
    let hint = f.tail_hint().filter(|h| h.kind == super::TailKind::Exact && !h.heuristic).cloned();
    TaylorSeries::from_parts(out, hint)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> TaylorSeries {
        TaylorSeries::from_real(v).unwrap()
    }

    fn re(f: &TaylorSeries) -> Vec<f64> {
        f.coeffs().iter().map(|c| c.re).collect()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn linear_combine_examples() {
        let f = s(&[1.0, 2.0]);
        assert_eq!(re(&linear_combine(&[(one(), &f), (-one(), &f)])), vec![0.0, 0.0]);
        let z = s(&[0.0, 1.0]);
        assert_eq!(re(&linear_combine(&[(2.0 * one(), &z)])), vec![0.0, 2.0]);
        let a = s(&[1.0]);
        let b = s(&[0.0, 0.0, 1.0]);
        assert_eq!(re(&linear_combine(&[(one(), &a), (one(), &b)])), vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn cauchy_product_examples() {
        let f = s(&[1.0, 1.0]);
        assert_eq!(re(&cauchy_product(&f, &f, 2)), vec![1.0, 2.0, 1.0]);
        let g = s(&[0.3, -1.2, 4.0]);
        assert_eq!(cauchy_product(&g, &s(&[1.0]), 2).coeffs(), g.coeffs());
    }

    #[test]
    fn geometric_times_one_minus_z_telescopes() {
        let n = 40;
        let geo = s(&vec![1.0; n + 1]);
        let lin = s(&[1.0, -1.0]);
        let prod = cauchy_product(&geo, &lin, n);
        // direct convolution oracle
        for m in 0..=n {
            let mut direct = Complex64::new(0.0, 0.0);
            for j in 0..=m {
                direct += geo.coeff(j) * lin.coeff(m - j);
            }
            assert_eq!(prod.coeff(m), direct);
        }
        assert_eq!(prod.coeff(0), one());
        assert!(prod.coeffs()[1..n].iter().all(|c| c.norm() == 0.0));
        assert!(prod.coeff(n).norm() <= 1.0);
    }

    #[test]
    fn reciprocal_geometric() {
        let r = reciprocal(&s(&[1.0, -1.0]), 3).unwrap();
        assert_eq!(re(&r), vec![1.0; 4]);
        assert!(reciprocal(&s(&[0.0, 1.0]), 3).is_err());
    }

    #[test]
    fn exp_of_z() {
        let e = series_exp(&s(&[0.0, 1.0]), 4);
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (a, b) in re(&e).iter().zip(want) {
            assert!((a - b).abs() < 1e-16);
        }
        assert_eq!(re(&series_exp(&s(&[0.0]), 3)), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn pow_matches_binomial_square_root() {
        // (1 - z)^{1/2} = 1 - z/2 - z^2/8 - z^3/16 ...
        let p = series_pow(&s(&[1.0, -1.0]), 0.5, 3).unwrap();
        let want = [1.0, -0.5, -0.125, -0.0625];
        for (a, b) in re(&p).iter().zip(want) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert!(series_pow(&s(&[0.0, 1.0]), 0.5, 3).is_err());
    }

    #[test]
    fn log_of_one_minus_z() {
        let l = series_log(&s(&[1.0, -1.0]), 5).unwrap();
        for k in 1..=5 {
            assert!((l.coeff(k).re + 1.0 / k as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_and_primitive() {
        assert_eq!(re(&antiderivative(&s(&[1.0]))), vec![0.0, 1.0]);
        let f = s(&[0.5, -2.0, 3.25, 7.0]);
        assert_eq!(differentiate(&antiderivative(&f)), f);
        assert_eq!(re(&differentiate(&s(&[4.0]))), vec![0.0]);
    }

    #[test]
    fn divide_by_short_polynomial_is_linear_time_recurrence() {
        let ones = s(&vec![1.0; 9]);
        let q = divide(&ones, &s(&[1.0, 1.0]), 8).unwrap();
        assert_eq!(re(&q), vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
    }
}
