//! Coefficient-exact `T_g`, `S_g`, `M_g`, the Cesàro operator and the
//! companion images `F_n`.

use crate::series::{antiderivative, cauchy_product, differentiate, TaylorSeries};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Volterra,
    Companion,
    Multiplication,
    Cesaro,
}

impl std::str::FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Tg" | "tg" | "volterra" => Ok(Op::Volterra),
            "Sg" | "sg" | "companion" => Ok(Op::Companion),
            "Mg" | "mg" | "multiplication" => Ok(Op::Multiplication),
            "cesaro" | "C" => Ok(Op::Cesaro),
            other => Err(format!("unknown operator `{other}` (expected Tg, Sg, Mg or cesaro)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorReport {
    pub op: Op,
    pub input_orders: Vec<usize>,
    pub output_order: usize,
    /// Coefficients of the full product beyond the retained range.
    pub discarded: usize,
    pub residuals: BTreeMap<String, f64>,
    pub flags: Vec<String>,
}

// Highest product index whose coefficient is complete given both inputs.
fn product_order(a: &TaylorSeries, b: &TaylorSeries) -> (usize, usize) {
    let full = a.degree().unwrap_or(0) + b.degree().unwrap_or(0);
    let valid = match (a.is_exact(), b.is_exact()) {
        (true, true) => full,
        (true, false) => b.order(),
        (false, true) => a.order(),
        (false, false) => a.order().min(b.order()),
    };
    (valid, full.saturating_sub(valid))
}

/// `T_g f = ∫_0^z f g'`, to the highest degree determined by the inputs.
pub fn volterra(g: &TaylorSeries, f: &TaylorSeries) -> TaylorSeries {
    volterra_report(g, f).0
}

pub fn volterra_report(g: &TaylorSeries, f: &TaylorSeries) -> (TaylorSeries, OperatorReport) {
    let dg = differentiate(g);
    let (order, discarded) = product_order(f, &dg);
    let out = antiderivative(&cauchy_product(f, &dg, order));
    let report = report(Op::Volterra, &[g, f], &out, discarded);
    (out, report)
}

/// `S_g f = ∫_0^z f' g`.
pub fn companion(g: &TaylorSeries, f: &TaylorSeries) -> TaylorSeries {
    companion_report(g, f).0
}

pub fn companion_report(g: &TaylorSeries, f: &TaylorSeries) -> (TaylorSeries, OperatorReport) {
    let df = differentiate(f);
    let (order, discarded) = product_order(&df, g);
    let out = antiderivative(&cauchy_product(&df, g, order));
    let report = report(Op::Companion, &[g, f], &out, discarded);
    (out, report)
}

/// `M_g f = g f`.
pub fn multiplication(g: &TaylorSeries, f: &TaylorSeries) -> TaylorSeries {
    multiplication_report(g, f).0
}

pub fn multiplication_report(g: &TaylorSeries, f: &TaylorSeries) -> (TaylorSeries, OperatorReport) {
    let (order, discarded) = product_order(g, f);
    let out = cauchy_product(g, f, order);
    let report = report(Op::Multiplication, &[g, f], &out, discarded);
    (out, report)
}

fn report(op: Op, inputs: &[&TaylorSeries], out: &TaylorSeries, discarded: usize) -> OperatorReport {
    let mut flags = Vec::new();
    if inputs.iter().any(|s| !s.is_exact()) {
        flags.push("truncated_inputs".to_string());
    }
    OperatorReport {
        op,
        input_orders: inputs.iter().map(|s| s.order()).collect(),
        output_order: out.order(),
        discarded,
        residuals: BTreeMap::new(),
        flags,
    }
}

/// Maximum coefficient modulus of `T_g f + S_g f + g(0) f(0) - g f` over the
/// range where all three operators are complete.
pub fn ibp_defect(g: &TaylorSeries, f: &TaylorSeries) -> f64 {
    let t = volterra(g, f);
    let s = companion(g, f);
    let m = multiplication(g, f);
    let common = t.order().min(s.order()).min(m.order());
    let c = g.coeff(0) * f.coeff(0);
    (0..=common)
        .map(|k| {
            let lhs = t.coeff(k) + s.coeff(k) + if k == 0 { c } else { Complex64::new(0.0, 0.0) };
            (lhs - m.coeff(k)).norm()
        })
        .fold(0.0, f64::max)
}

/// `[C f]_n = (a_0 + ... + a_n) / (n + 1)` for `n <= order`.
pub fn cesaro(f: &TaylorSeries) -> TaylorSeries {
    let mut acc = Complex64::new(0.0, 0.0);
    let out: Vec<Complex64> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| {
            acc += a;
            acc / (n + 1) as f64
        })
        .collect();
    TaylorSeries::new(out).expect("partial means of finite coefficients are finite")
}

/// `F_n(z) = z^{-n} S_f(z^n)(z)`, i.e. coefficients `a_k n / (n + k)`.
pub fn companion_on_monomial(f: &TaylorSeries, n: usize) -> TaylorSeries {
    assert!(n >= 1, "companion_on_monomial needs n >= 1");
    let nf = n as f64;
    let out: Vec<Complex64> = f.coeffs().iter().enumerate().map(|(k, a)| a * (nf / (nf + k as f64))).collect();
    let s = TaylorSeries::new(out).expect("scaled coefficients stay finite");
    match f.tail_hint() {
        // |a_k n/(n+k)| <= |a_k|, so any envelope of f is one of F_n
        Some(h) => s.with_tail_hint(h.clone()).unwrap_or_else(|_| unreachable!("coefficients only shrink")),
        None => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{realize, FunctionSpec};

    fn s(v: &[f64]) -> TaylorSeries {
        TaylorSeries::polynomial(v.iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn volterra_of_z_on_monomials() {
        let g = s(&[0.0, 1.0]);
        for n in 0..10 {
            let t = volterra(&g, &TaylorSeries::monomial(n, n));
            assert_eq!(t.order(), n + 1);
            assert_eq!(t.coeff(n + 1).re, 1.0 / (n + 1) as f64);
            assert!((0..=n).all(|k| t.coeff(k).norm() == 0.0));
        }
    }

    #[test]
    fn companion_trivial_cases() {
        let g = realize(&FunctionSpec::NegLogOneMinusZ, 20).unwrap();
        let c = companion(&g, &TaylorSeries::unit(0));
        assert!(c.coeffs().iter().all(|a| a.norm() == 0.0));
        let f = s(&[2.0, -1.0, 0.5]);
        let c = companion(&TaylorSeries::unit(0), &f);
        assert_eq!(c.coeffs().iter().map(|a| a.re).collect::<Vec<_>>(), vec![0.0, -1.0, 0.5]);
    }

    #[test]
    fn ibp_with_constant_symbol() {
        let g = s(&[3.0]);
        let f = realize(&FunctionSpec::binomial(-0.5), 50).unwrap();
        assert!(volterra(&g, &f).coeffs().iter().all(|a| a.norm() == 0.0));
        assert!(ibp_defect(&g, &f) < 1e-14);
    }

    #[test]
    fn volterra_on_unit_is_g_minus_g0() {
        let g = realize(&FunctionSpec::SingularInner, 64).unwrap();
        let t = volterra(&g, &TaylorSeries::unit(0));
        assert_eq!(t.order(), 64);
        for k in 1..=64 {
            assert!((t.coeff(k) - g.coeff(k)).norm() <= 1e-15 * g.coeff(k).norm().max(1.0));
        }
        assert!(ibp_defect(&g, &TaylorSeries::unit(0)) <= 1e-12);
    }

    #[test]
    fn cesaro_examples() {
        let c = cesaro(&TaylorSeries::unit(5));
        for n in 0..=5 {
            assert_eq!(c.coeff(n).re, 1.0 / (n + 1) as f64);
        }
        let c = cesaro(&TaylorSeries::monomial(3, 8));
        for m in 0..=8 {
            let want = if m >= 3 { 1.0 / (m + 1) as f64 } else { 0.0 };
            assert_eq!(c.coeff(m).re, want);
        }
    }

    #[test]
    fn f_n_examples() {
        let f = realize(&FunctionSpec::binomial(-0.25), 100).unwrap();
        for n in [1, 4, 64] {
            let fnn = companion_on_monomial(&f, n);
            assert_eq!(fnn.coeff(0), f.coeff(0));
        }
        let u = companion_on_monomial(&TaylorSeries::unit(4), 7);
        assert_eq!(u, TaylorSeries::unit(4).truncate(4).with_tail_hint(crate::series::TailHint::exact()).unwrap());
    }
}
