//! Catalog of explicit functions and their recurrence-based realization.

use super::{arith, circle_samples, TailHint, TaylorSeries};
use crate::error::{HvError, Result};
use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_ORDER: usize = 1 << 22;

/// Complex scalar that reads and writes as a JSON number when real and as
/// `[re, im]` otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalar(pub Complex64);

impl Scalar {
    pub fn real(v: f64) -> Self {
        Scalar(Complex64::new(v, 0.0))
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::real(v)
    }
}

impl From<Complex64> for Scalar {
    fn from(v: Complex64) -> Self {
        Scalar(v)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            s.serialize_f64(self.0.re)
        } else {
            [self.0.re, self.0.im].serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Real(f64),
            Pair([f64; 2]),
            Obj { re: f64, #[serde(default)] im: f64 },
        }
        match Repr::deserialize(d).map_err(|_| de::Error::custom("expected a number, [re, im] or {re, im}"))? {
            Repr::Real(v) => Ok(Scalar::real(v)),
            Repr::Pair([re, im]) | Repr::Obj { re, im } => Ok(Scalar(Complex64::new(re, im))),
        }
    }
}

/// Symbolic recipe for a catalog function.
///
/// JSON form mirrors the `kind` tag, e.g.
/// `{"kind":"power","base":{"kind":"binomial_power","alpha":-1.25},"alpha":1.0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `z^n`
    Monomial { n: usize },
    /// `-log(1 - z)`
    #[serde(alias = "neg_log")]
    NegLogOneMinusZ,
    /// `(1 - z)^alpha`
    BinomialPower { alpha: f64 },
    /// `(1 - z/a)^alpha`, `|a| >= 1`; `a = -1` gives `(1 + z)^alpha`.
    ShiftedBinomialPower { alpha: f64, a: Scalar },
    /// `exp((z + 1)/(z - 1))`
    SingularInner,
    /// `(a - z)/(1 - conj(a) z)`, `|a| < 1`
    BlaschkeFactor { a: Scalar },
    /// `1/(3 - log(1 - z))`
    OuterThreeMinusLog,
    /// Finite polynomial with the listed coefficients.
    Polynomial { coeffs: Vec<Scalar> },
    Product { factors: Vec<FunctionSpec> },
    Power { base: Box<FunctionSpec>, alpha: f64 },
    Reciprocal { base: Box<FunctionSpec> },
    Exp { base: Box<FunctionSpec> },
    LinearCombo { terms: Vec<(Scalar, FunctionSpec)> },
    /// Primitive vanishing at 0.
    Antiderivative { base: Box<FunctionSpec> },
    Derivative { base: Box<FunctionSpec> },
}

impl FunctionSpec {
    pub fn constant(c: f64) -> Self {
        FunctionSpec::Polynomial { coeffs: vec![Scalar::real(c)] }
    }

    pub fn poly(coeffs: &[f64]) -> Self {
        FunctionSpec::Polynomial { coeffs: coeffs.iter().map(|&c| Scalar::real(c)).collect() }
    }

    pub fn binomial(alpha: f64) -> Self {
        FunctionSpec::BinomialPower { alpha }
    }

    pub fn product(factors: Vec<FunctionSpec>) -> Self {
        FunctionSpec::Product { factors }
    }

    pub fn power(base: FunctionSpec, alpha: f64) -> Self {
        FunctionSpec::Power { base: Box::new(base), alpha }
    }

    pub fn antiderivative(base: FunctionSpec) -> Self {
        FunctionSpec::Antiderivative { base: Box::new(base) }
    }

    /// Parse either a JSON object or a bare kind name such as `neg_log`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            Ok(serde_json::from_str(t)?)
        } else {
            Ok(serde_json::from_value(serde_json::json!({ "kind": t }))?)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("function specs always serialize")
    }
}

pub fn realize(spec: &FunctionSpec, order: usize) -> Result<TaylorSeries> {
    realize_with_limit(spec, order, DEFAULT_MAX_ORDER)
}

pub fn realize_with_limit(spec: &FunctionSpec, order: usize, max_order: usize) -> Result<TaylorSeries> {
    if order > max_order {
        return Err(HvError::OrderOverflow { order, max: max_order });
    }
    build(spec, order)
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn binomial_coeffs(alpha: f64, order: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(order + 1);
    let mut a = 1.0;
    out.push(c(a));
    for k in 0..order {
        a *= (k as f64 - alpha) / (k as f64 + 1.0);
        out.push(c(a));
    }
    out
}

// Envelope |a_k| <= C k^{-alpha-1}: the ratio a_k k^{alpha+1} is monotone in k
// and tends to 1/Gamma(-alpha), so the stored maximum with a 1/N margin bounds it.
fn binomial_hint(coeffs: &[Complex64], alpha: f64) -> TailHint {
    let m = -alpha - 1.0;
    let n = coeffs.len().max(2) - 1;
    let cmax = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a.norm() / (k as f64).powf(m))
        .fold(coeffs[0].norm(), f64::max);
    TailHint::polynomial(cmax * (1.0 + 2.0 / n as f64), m)
}

fn is_nonneg_integer(x: f64) -> bool {
    x >= 0.0 && x.fract() == 0.0
}

/// Sample the realized truncation at a few interior radii and reject it if the
/// values wind across the negative real axis, where the principal branch of
/// `log`/`pow` would be discontinuous.
fn assert_principal_domain(base: &TaylorSeries, what: &str) -> Result<()> {
    let n = base.order();
    for &r in &[0.5, 0.9, 0.99] {
        // stay where the truncation is trustworthy
        if base.sup_tail(r) > 1e-6 {
            continue;
        }
        let m = (2 * (n + 1)).next_power_of_two().clamp(64, 1 << 14);
        let vals = circle_samples(base, r, m);
        let mut prev = vals[0].arg();
        let mut unwrapped = prev;
        for v in vals.iter().skip(1).chain(std::iter::once(&vals[0])) {
            if v.norm() == 0.0 {
                return Err(HvError::InvalidSpec(format!("{what}: base vanishes at radius {r}")));
            }
            let a = v.arg();
            let mut d = a - prev;
            if d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            } else if d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            unwrapped += d;
            prev = a;
            if unwrapped.abs() >= std::f64::consts::PI {
                return Err(HvError::InvalidSpec(format!(
                    "{what}: base crosses the principal branch cut at radius {r}"
                )));
            }
        }
    }
    Ok(())
}

fn build(spec: &FunctionSpec, order: usize) -> Result<TaylorSeries> {
    use FunctionSpec::*;
    Ok(match spec {
        Monomial { n } => {
            if *n <= order {
                TaylorSeries::monomial(*n, order)
            } else {
                TaylorSeries::from_parts(vec![c(0.0); order + 1], Some(TailHint::polynomial(1.0, 0.0)))
            }
        }
        NegLogOneMinusZ => {
            let mut v = vec![c(0.0); order + 1];
            for (k, a) in v.iter_mut().enumerate().skip(1) {
                *a = c(1.0 / k as f64);
            }
            TaylorSeries::new(v)?.with_tail_hint(TailHint::polynomial(1.0, -1.0))?
        }
        BinomialPower { alpha } => {
            let v = binomial_coeffs(*alpha, order);
            if is_nonneg_integer(*alpha) {
                TaylorSeries::polynomial(v)?
            } else {
                let h = binomial_hint(&v, *alpha);
                TaylorSeries::new(v)?.with_tail_hint(h)?
            }
        }
        ShiftedBinomialPower { alpha, a } => {
            let a = a.0;
            if a.norm() < 1.0 {
                return Err(HvError::InvalidSpec(format!(
                    "shifted binomial power needs |a| >= 1 to be analytic on the disk (a = {a})"
                )));
            }
            let base = binomial_coeffs(*alpha, order);
            let inv = 1.0 / a;
            let mut p = c(1.0);
            let v: Vec<Complex64> = base
                .iter()
                .map(|b| {
                    let out = b * p;
                    p *= inv;
                    out
                })
                .collect();
            if is_nonneg_integer(*alpha) {
                TaylorSeries::polynomial(v)?
            } else if (a.norm() - 1.0).abs() < 1e-15 {
                let h = binomial_hint(&v, *alpha);
                TaylorSeries::new(v)?.with_tail_hint(h)?
            } else {
                TaylorSeries::new(v)?
            }
        }
        SingularInner => {
            // (z-1)^2 S' = -2 S  =>  (n+1) s_{n+1} = (2n-2) s_n - (n-1) s_{n-1}
            let mut s = vec![c(0.0); order + 1];
            s[0] = c((-1.0f64).exp());
            if order >= 1 {
                s[1] = -2.0 * s[0];
            }
            for n in 1..order {
                let nf = n as f64;
                s[n + 1] = ((2.0 * nf - 2.0) * s[n] - (nf - 1.0) * s[n - 1]) / (nf + 1.0);
            }
            TaylorSeries::new(s)?
        }
        BlaschkeFactor { a } => {
            let a = a.0;
            let r = a.norm();
            if r >= 1.0 {
                return Err(HvError::InvalidSpec(format!("Blaschke factor needs |a| < 1 (a = {a})")));
            }
            let ac = a.conj();
            let mut v = vec![c(0.0); order + 1];
            v[0] = a;
            let mut p = c(1.0);
            for k in 1..=order {
                v[k] = p * (r * r - 1.0);
                p *= ac;
            }
            if r == 0.0 {
                TaylorSeries::polynomial(v)?
            } else {
                TaylorSeries::new(v)?.with_tail_hint(TailHint::geometric((1.0 - r * r) / r * (1.0 + 1e-12), 1.0 / r))?
            }
        }
        OuterThreeMinusLog => {
            let mut base = build(&NegLogOneMinusZ, order)?.into_coeffs();
            base[0] += 3.0;
            arith::reciprocal(&TaylorSeries::new(base)?, order)?
        }
        Polynomial { coeffs } => {
            let mut v: Vec<Complex64> = coeffs.iter().map(|s| s.0).collect();
            if v.is_empty() {
                v.push(c(0.0));
            }
            let exact = v.len() <= order + 1;
            v.resize(order + 1, c(0.0));
            let s = TaylorSeries::new(v)?;
            if exact {
                s.exact()
            } else {
                s
            }
        }
        Product { factors } => {
            let mut acc = TaylorSeries::unit(order);
            for f in factors {
                let g = build(f, order)?;
                acc = arith::cauchy_product(&acc, &g, order);
            }
            acc
        }
        Power { base, alpha } => {
            let b = build(base, order)?;
            if b.coeff(0).norm() == 0.0 {
                return Err(HvError::InvalidSpec("power of a function vanishing at 0".into()));
            }
            if is_nonneg_integer(*alpha) && *alpha <= 64.0 {
                let mut acc = TaylorSeries::unit(order);
                for _ in 0..(*alpha as usize) {
                    acc = arith::cauchy_product(&acc, &b, order);
                }
                acc
            } else {
                assert_principal_domain(&b, "power")?;
                arith::series_pow(&b, *alpha, order)?
            }
        }
        Reciprocal { base } => {
            let b = build(base, order)?;
            if b.coeff(0).norm() == 0.0 {
                return Err(HvError::InvalidSpec("reciprocal of a function vanishing at 0".into()));
            }
            arith::reciprocal(&b, order)?
        }
        Exp { base } => arith::series_exp(&build(base, order)?, order),
        LinearCombo { terms } => {
            let realized: Vec<(Complex64, TaylorSeries)> =
                terms.iter().map(|(s, f)| Ok((s.0, build(f, order)?))).collect::<Result<_>>()?;
            let refs: Vec<(Complex64, &TaylorSeries)> = realized.iter().map(|(s, f)| (*s, f)).collect();
            arith::linear_combine(&refs)
        }
        Antiderivative { base } => {
            if order == 0 {
                TaylorSeries::zero(0)
            } else {
                arith::antiderivative(&build(base, order - 1)?)
            }
        }
        Derivative { base } => arith::differentiate(&build(base, order + 1)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::cauchy_product;

    #[test]
    fn neg_log_coefficients() {
        let f = realize(&FunctionSpec::NegLogOneMinusZ, 3).unwrap();
        let want = [0.0, 1.0, 0.5, 1.0 / 3.0];
        for (a, b) in f.coeffs().iter().zip(want) {
            assert_eq!(a.re, b);
        }
    }

    #[test]
    fn singular_inner_at_origin() {
        let s = realize(&FunctionSpec::SingularInner, 0).unwrap();
        assert_eq!(s.coeffs(), &[c((-1.0f64).exp())]);
    }

    #[test]
    fn singular_inner_satisfies_its_ode() {
        let n = 256;
        let s = realize(&FunctionSpec::SingularInner, n).unwrap();
        let ds = crate::series::differentiate(&s);
        let q = TaylorSeries::from_real(&[1.0, -2.0, 1.0]).unwrap();
        let lhs = cauchy_product(&q, &ds, n - 2);
        for k in 0..=n - 2 {
            let res = lhs.coeff(k) + 2.0 * s.coeff(k);
            assert!(res.norm() <= 1e-12, "k={k}: {res}");
        }
    }

    #[test]
    fn blaschke_factor_vanishes_at_parameter() {
        let a = Complex64::new(0.3, -0.4);
        let b = realize(&FunctionSpec::BlaschkeFactor { a: Scalar(a) }, 200).unwrap();
        let v = crate::series::evaluate(&b, a).unwrap().value;
        assert!(v.norm() < 1e-14);
        let b0 = realize(&FunctionSpec::BlaschkeFactor { a: Scalar::real(0.0) }, 3).unwrap();
        assert_eq!(b0.coeff(1), c(-1.0));
        assert!(b0.is_exact());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let bad = FunctionSpec::Reciprocal { base: Box::new(FunctionSpec::NegLogOneMinusZ) };
        assert!(matches!(realize(&bad, 8), Err(HvError::InvalidSpec(_))));
        let bad = FunctionSpec::power(FunctionSpec::NegLogOneMinusZ, 0.75);
        assert!(matches!(realize(&bad, 8), Err(HvError::InvalidSpec(_))));
        let bad = FunctionSpec::BlaschkeFactor { a: Scalar::real(1.0) };
        assert!(realize(&bad, 8).is_err());
        assert!(matches!(realize_with_limit(&FunctionSpec::SingularInner, 100, 10), Err(HvError::OrderOverflow { .. })));
    }

    #[test]
    fn branch_cut_crossing_is_detected() {
        // base 1 + 3z takes negative real values inside the disk (z = -1/2)
        let bad = FunctionSpec::power(FunctionSpec::poly(&[1.0, 3.0]), 0.5);
        assert!(matches!(realize(&bad, 16), Err(HvError::InvalidSpec(_))));
        let good = FunctionSpec::power(FunctionSpec::poly(&[1.0, -1.0]), 0.5);
        assert!(realize(&good, 16).is_ok());
    }

    #[test]
    fn json_grammar_round_trip() {
        let text = r#"{"kind":"power","base":{"kind":"binomial_power","alpha":-1.25},"alpha":1.0}"#;
        let spec: FunctionSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec, FunctionSpec::power(FunctionSpec::binomial(-1.25), 1.0));
        assert_eq!(FunctionSpec::parse("neg_log").unwrap(), FunctionSpec::NegLogOneMinusZ);
        let z: FunctionSpec = serde_json::from_str(r#"{"kind":"blaschke_factor","a":[0.5,0.25]}"#).unwrap();
        assert_eq!(z, FunctionSpec::BlaschkeFactor { a: Scalar(Complex64::new(0.5, 0.25)) });
        let back: FunctionSpec = serde_json::from_str(&z.to_json()).unwrap();
        assert_eq!(back, z);
    }
}
