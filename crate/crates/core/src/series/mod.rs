//! Truncated Taylor series: the carrier for every function in the crate.

mod arith;
mod eval;
mod spec;
mod tail;

pub use arith::{
    antiderivative, cauchy_product, differentiate, divide, linear_combine, reciprocal, series_exp,
    series_log, series_pow, shift_up,
};
pub use eval::{circle_samples, evaluate, evaluate_on_circle, Evaluation};
pub use spec::{realize, realize_with_limit, FunctionSpec, Scalar, DEFAULT_MAX_ORDER};
pub use tail::{TailHint, TailKind};

use crate::error::{HvError, Result};
use num_complex::Complex64;

/// Degree-`order` truncation `sum_{k<=order} a_k z^k` of an analytic function.
///
/// The coefficient vector always has `order + 1` finite entries. A tail hint,
/// when present, bounds `|a_k|` for every `k` (stored or not) and is what the
/// norm estimators use to decide how close to the circle the truncation can
/// be trusted.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
    hint: Option<TailHint>,
}

impl TaylorSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(HvError::InvalidSpec("a series needs at least one coefficient".into()));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(HvError::NonFinite(k));
        }
        Ok(Self { coeffs, hint: None })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// A polynomial: the stored coefficients are the whole function.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        Ok(Self::new(coeffs)?.exact())
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1], hint: Some(TailHint::exact()) }
    }

    /// The constant function 1 stored to degree `order`.
    pub fn unit(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn monomial(n: usize, order: usize) -> Self {
        let mut s = Self::zero(order.max(n));
        s.coeffs[n] = Complex64::new(1.0, 0.0);
        s
    }

    /// Attach a tail hint, rejecting it if some stored coefficient violates it.
    pub fn with_tail_hint(mut self, hint: TailHint) -> Result<Self> {
        if let Some(k) = hint.first_violation(&self.coeffs) {
            return Err(HvError::InvalidSpec(format!(
                "tail hint {:?} is violated by coefficient {k} (|a_k| = {:e})",
                hint.kind,
                self.coeffs[k].norm()
            )));
        }
        self.hint = Some(hint);
        Ok(self)
    }

    pub(crate) fn exact(mut self) -> Self {
        self.hint = Some(TailHint::exact());
        self
    }

    pub(crate) fn from_parts(coeffs: Vec<Complex64>, hint: Option<TailHint>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs, hint }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Index of the last nonzero stored coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.re != 0.0 || c.im != 0.0)
    }

    pub fn tail_hint(&self) -> Option<&TailHint> {
        self.hint.as_ref()
    }

    /// The attached hint, or one fitted from the last quartile of coefficients.
    pub fn effective_tail(&self) -> TailHint {
        match &self.hint {
            Some(h) => h.clone(),
            None => TailHint::fit(&self.coeffs),
        }
    }

    /// True when the series is known to be a polynomial stored in full.
    pub fn is_exact(&self) -> bool {
        matches!(self.hint, Some(TailHint { kind: TailKind::Exact, heuristic: false }))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().take(order + 1).copied().collect();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        let hint = match &self.hint {
            Some(h) if h.kind == TailKind::Exact && self.degree().map_or(true, |d| d > order) => {
                None
            }
            other => other.clone(),
        };
        Self { coeffs, hint }
    }

    /// Bound on `sum_{k > N} |a_k| r^k`; infinite when the tail cannot be controlled.
    pub fn sup_tail(&self, r: f64) -> f64 {
        self.effective_tail().sup_tail(self.order(), r)
    }

    /// Bound on `sum_{k > N} |a_k|^2 r^{2k}`.
    pub fn l2_tail(&self, r: f64) -> f64 {
        self.effective_tail().l2_tail(self.order(), r)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
