//! Coefficient-envelope metadata used to bound truncation error.

use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailKind {
    /// The series is a polynomial; every omitted coefficient is zero.
    Exact,
    /// `|a_k| <= exp(log_c) * rho^{-k}`.
    Geometric { log_c: f64, rho: f64 },
    /// `|a_k| <= exp(log_c) * max(k, 1)^m`.
    Polynomial { log_c: f64, m: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailHint {
    pub kind: TailKind,
    /// Fitted from stored coefficients rather than derived analytically.
    pub heuristic: bool,
}

const MAX_TAIL_TERMS: usize = 50_000_000;
const DIRECT_TERMS: usize = 20_000;

impl TailHint {
    pub fn exact() -> Self {
        Self { kind: TailKind::Exact, heuristic: false }
    }

    pub fn geometric(c: f64, rho: f64) -> Self {
        Self { kind: TailKind::Geometric { log_c: c.ln(), rho }, heuristic: false }
    }

    pub fn polynomial(c: f64, m: f64) -> Self {
        Self { kind: TailKind::Polynomial { log_c: c.ln(), m }, heuristic: false }
    }

    /// Log of the envelope at index `k`; `-inf` for exact polynomials.
    pub fn log_bound(&self, k: usize) -> f64 {
        match self.kind {
            TailKind::Exact => f64::NEG_INFINITY,
            TailKind::Geometric { log_c, rho } => log_c - k as f64 * rho.ln(),
            TailKind::Polynomial { log_c, m } => log_c + m * (k.max(1) as f64).ln(),
        }
    }

    pub(crate) fn first_violation(&self, coeffs: &[Complex64]) -> Option<usize> {
        if self.kind == TailKind::Exact {
            return None;
        }
        coeffs.iter().enumerate().position(|(k, a)| {
            let v = a.norm();
            // subnormals carry no relative precision
            v >= f64::MIN_POSITIVE && v.ln() > self.log_bound(k) + 1e-9
        })
    }

    /// Bound on `sum_{k > n} |a_k| r^k`.
    pub fn sup_tail(&self, n: usize, r: f64) -> f64 {
        self.tail_power_sum(n, r, 1.0)
    }

    /// Bound on `sum_{k > n} |a_k|^2 r^{2k}`.
    pub fn l2_tail(&self, n: usize, r: f64) -> f64 {
        self.tail_power_sum(n, r * r, 2.0)
    }

    // sum_{k>n} bound(k)^s x^k
    fn tail_power_sum(&self, n: usize, x: f64, s: f64) -> f64 {
        match self.kind {
            TailKind::Exact => 0.0,
            TailKind::Geometric { log_c, rho } => {
                let q = x / rho.powf(s);
                if q >= 1.0 {
                    return f64::INFINITY;
                }
                let log_first = s * log_c + (n + 1) as f64 * q.ln();
                (log_first - (1.0 - q).ln()).exp()
            }
            TailKind::Polynomial { log_c, m } => polynomial_tail(s * log_c, s * m, x, n),
        }
    }

    /// Fit an envelope to the last quartile of `coeffs`, then scale it so that
    /// every stored coefficient satisfies it.
    pub fn fit(coeffs: &[Complex64]) -> Self {
        let n = coeffs.len() - 1;
        let lo = (3 * n / 4).max(1);
        if lo > n {
            return Self { kind: TailKind::Exact, heuristic: true };
        }
        let span = n - lo + 1;
        let blocks = span.min(16);
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let s = lo + b * span / blocks;
            let e = lo + (b + 1) * span / blocks;
            let (k, v) = (s..e)
                .map(|k| (k, coeffs[k].norm()))
                .fold((s, 0.0), |acc, kv| if kv.1 > acc.1 { kv } else { acc });
            if v > 1e-300 {
                pts.push((k as f64, v.ln()));
            }
        }
        if pts.is_empty() {
            return Self { kind: TailKind::Exact, heuristic: true };
        }

        let poly = if pts.len() >= 2 {
            let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
            ols(&xs, &ys)
        } else {
            (0.0, 0.0)
        };
        let geo = if pts.len() >= 2 {
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
            Some(ols(&xs, &ys))
        } else {
            None
        };

        let kind = match geo {
            Some((slope, ssr_geo)) if slope < 0.0 && ssr_geo < 0.5 * poly.1 => {
                TailKind::Geometric { log_c: 0.0, rho: (-slope).exp() }
            }
            _ => TailKind::Polynomial { log_c: 0.0, m: poly.0 },
        };
        let shape = Self { kind, heuristic: true };
        let log_c = coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(k, a)| a.norm().ln() - shape.log_bound(k))
            .fold(f64::NEG_INFINITY, f64::max);
        let kind = match kind {
            TailKind::Geometric { rho, .. } => TailKind::Geometric { log_c, rho },
            TailKind::Polynomial { m, .. } => TailKind::Polynomial { log_c, m },
            TailKind::Exact => TailKind::Exact,
        };
        Self { kind, heuristic: true }
    }
}

/// Returns (slope, residual sum of squares) of the least-squares line.
fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    let ssr = xs.iter().zip(ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    (slope, ssr)
}

// sum_{k>n} exp(log_c) k^m x^k: direct summation of a bounded number of
// terms, then a rigorous remainder (integral bound for decreasing terms,
// geometric bound once the term ratio is below exp(-lambda/2)).
fn polynomial_tail(log_c: f64, m: f64, x: f64, n: usize) -> f64 {
    if log_c == f64::NEG_INFINITY || x <= 0.0 {
        return 0.0;
    }
    let c = log_c.exp();
    let k0 = (n + 1) as f64;
    if x >= 1.0 {
        if x == 1.0 && m < -1.0 {
            return c * (k0.powf(m) + k0.powf(m + 1.0) / (-m - 1.0));
        }
        return f64::INFINITY;
    }
    let lam = -x.ln();
    let term = |k: f64| (log_c + m * k.ln() - lam * k).exp();
    // from this index on the terms decrease at least geometrically
    let kstar = if m > 0.0 { k0.max((2.0 * m / lam).ceil()) } else { k0 };
    if kstar - k0 > MAX_TAIL_TERMS as f64 {
        return f64::INFINITY;
    }
    let remainder = |k: f64| {
        let t = term(k);
        if m > 0.0 {
            t / (1.0 - (-0.5 * lam).exp())
        } else {
            let mut b = t * (1.0 + 1.0 / lam);
            if m < -1.0 {
                b = b.min(c * (k.powf(m) + k.powf(m + 1.0) / (-m - 1.0)) * x.powf(k));
            }
            b
        }
    };
    let mut sum = 0.0;
    let mut k = k0;
    while k < kstar {
        sum += term(k);
        k += 1.0;
    }
    for _ in 0..DIRECT_TERMS {
        let rem = remainder(k);
        if rem <= 1e-6 * sum || rem < 1e-300 {
            return sum + rem;
        }
        sum += term(k);
        k += 1.0;
    }
    sum + remainder(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn geometric_tail_closed_form() {
        let h = TailHint::geometric(1.0, 2.0);
        // sum_{k>3} (0.5 * 2^-1)^k ... with r = 1: sum_{k>3} 2^-k = 2^-3
        let t = h.sup_tail(3, 1.0);
        assert!((t - 0.125).abs() < 1e-15);
        assert_eq!(h.sup_tail(3, 2.0), f64::INFINITY);
    }

    #[test]
    fn polynomial_tail_matches_direct_sum() {
        let h = TailHint::polynomial(1.0, -1.0);
        let r = 0.99_f64;
        let direct: f64 = (101..200_000).map(|k| r.powi(k) / k as f64).sum();
        let t = h.sup_tail(100, r);
        assert!(t >= direct);
        assert!(t < direct * 1.0001, "{t} vs {direct}");
    }

    #[test]
    fn l2_tail_at_boundary_for_decaying_envelope() {
        // |a_k| <= k^{-1}: sum_{k>10} k^{-2} <= 1/11^2 + 1/11
        let h = TailHint::polynomial(1.0, -1.0);
        let t = h.l2_tail(10, 1.0);
        let direct: f64 = (11..1_000_000).map(|k| 1.0 / (k as f64).powi(2)).sum();
        assert!(t >= direct && t < 0.1);
    }

    #[test]
    fn fitted_hint_covers_stored_coefficients() {
        let coeffs: Vec<Complex64> = (0..400).map(|k| c((k as f64 + 1.0).powf(-0.75) * (1.0 + 0.3 * (k as f64).sin()))).collect();
        let h = TailHint::fit(&coeffs);
        assert!(h.heuristic);
        assert!(h.first_violation(&coeffs).is_none());
        assert!(matches!(h.kind, TailKind::Polynomial { m, .. } if (m + 0.75).abs() < 0.2));
    }

    #[test]
    fn fitted_hint_detects_geometric_decay() {
        let coeffs: Vec<Complex64> = (0..200).map(|k| c(0.5f64.powi(k))).collect();
        let h = TailHint::fit(&coeffs);
        match h.kind {
            TailKind::Geometric { rho, .. } => assert!((rho - 2.0).abs() < 1e-6),
            other => panic!("expected geometric, got {other:?}"),
        }
    }

    #[test]
    fn zero_tail_is_exact_but_heuristic() {
        let mut coeffs = vec![c(1.0), c(2.0)];
        coeffs.resize(64, c(0.0));
        let h = TailHint::fit(&coeffs);
        assert_eq!(h.kind, TailKind::Exact);
        assert!(h.heuristic);
    }
}
