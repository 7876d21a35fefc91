//! Decision rules that turn a sequence of estimates along a ladder into a
//! convergence status.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Converged,
    Diverging,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Diverging => "diverging",
            Status::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Last increment below `CAUCHY_REL * value`.
    Cauchy,
    /// Three increasing positive increments and a positive growth exponent.
    PowerGrowth,
    /// Three positive increments of `value^p` that do not shrink.
    LogGrowth,
    /// Three positive increments shrinking at least geometrically.
    GeometricTail,
    /// The function is a polynomial evaluated on the circle itself.
    ExactPolynomial,
    Undecided,
}

pub const CAUCHY_REL: f64 = 1e-6;
pub const GROWTH_MIN: f64 = 0.05;
/// Energy increments keeping at least this ratio count as logarithmic growth.
pub const LOG_RATIO_MIN: f64 = 0.9;
/// Increments shrinking by at least this ratio count as a summable tail.
pub const GEOMETRIC_RATIO_MAX: f64 = 0.85;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: Rule,
    pub growth_fit: Option<f64>,
    pub last_increment: Option<f64>,
    /// Geometric extrapolation of the limit when the increments shrink.
    pub limit: Option<f64>,
    /// Uncertainty attached to `limit`: the change of the extrapolated limit
    /// between the last two windows.
    pub limit_increment: Option<f64>,
}

/// Slope of `ln v` against `x` over the last `window` points with `v > 0`.
pub fn growth_fit(values: &[f64], xs: &[f64], window: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(values)
        .filter(|(x, v)| x.is_finite() && **v > 0.0)
        .map(|(x, v)| (x.ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let pts = &pts[pts.len().saturating_sub(window)..];
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn increments(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

fn geometric_limit(v: &[f64]) -> Option<(f64, f64)> {
    let d = increments(v);
    if d.len() < 2 {
        return None;
    }
    let n = d.len();
    let q = d[n - 1] / d[n - 2];
    if !(q > 0.0 && q < 1.0) {
        return None;
    }
    Some((v[v.len() - 1] + d[n - 1] * q / (1.0 - q), q))
}

/// Classify `values` sampled at abscissae `xs` (growth variable, e.g.
/// `1/(1-r)` or `1/|I|`). `energy_power` is the exponent `p` for which
/// `value^p` grows linearly in `ln xs` under logarithmic divergence.
pub fn judge(values: &[f64], xs: &[f64], energy_power: f64) -> Verdict {
    let fit = growth_fit(values, xs, 4);
    let mut out = Verdict { status: Status::Inconclusive, rule: Rule::Undecided, growth_fit: fit, last_increment: None, limit: None, limit_increment: None };
    if values.len() < 2 {
        return out;
    }
    let d = increments(values);
    let last = *d.last().unwrap();
    let v = *values.last().unwrap();
    out.last_increment = Some(last);
    if last.abs() <= CAUCHY_REL * v.abs() || (v == 0.0 && last == 0.0) {
        out.status = Status::Converged;
        out.rule = Rule::Cauchy;
        return out;
    }
    if d.len() < 3 {
        return out;
    }
    let t = &d[d.len() - 3..];
    if t.iter().all(|&x| x > 0.0) && t[0] < t[1] && t[1] < t[2] && fit.is_some_and(|g| g > GROWTH_MIN) {
        out.status = Status::Diverging;
        out.rule = Rule::PowerGrowth;
        return out;
    }
    let energy: Vec<f64> = values.iter().map(|x| x.abs().powf(energy_power)).collect();
    let de = increments(&energy);
    let te = &de[de.len() - 3..];
    if te.iter().all(|&x| x > 0.0) && te[1] / te[0] >= LOG_RATIO_MIN && te[2] / te[1] >= LOG_RATIO_MIN {
        out.status = Status::Diverging;
        out.rule = Rule::LogGrowth;
        return out;
    }
    if t.iter().all(|&x| x > 0.0) && t[1] / t[0] <= GEOMETRIC_RATIO_MAX && t[2] / t[1] <= GEOMETRIC_RATIO_MAX {
        if let Some((lim, _)) = geometric_limit(values) {
            out.status = Status::Converged;
            out.rule = Rule::GeometricTail;
            out.limit = Some(lim);
            out.limit_increment = geometric_limit(&values[..values.len() - 1]).map(|(prev, _)| (lim - prev).abs());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs(n: usize) -> Vec<f64> {
        (1..=n).map(|j| 2f64.powi(j as i32)).collect()
    }

    #[test]
    fn constant_sequence_converges() {
        let v = vec![1.0; 6];
        let o = judge(&v, &xs(6), 2.0);
        assert_eq!((o.status, o.rule), (Status::Converged, Rule::Cauchy));
    }

    #[test]
    fn power_growth_diverges() {
        let x = xs(10);
        let v: Vec<f64> = x.iter().map(|x| x.powf(0.75)).collect();
        let o = judge(&v, &x, 2.0);
        assert_eq!((o.status, o.rule), (Status::Diverging, Rule::PowerGrowth));
        assert!((o.growth_fit.unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn square_root_of_log_diverges_through_energy() {
        let x = xs(10);
        let v: Vec<f64> = x.iter().map(|x| x.ln().sqrt()).collect();
        let o = judge(&v, &x, 2.0);
        assert_eq!((o.status, o.rule), (Status::Diverging, Rule::LogGrowth));
    }

    #[test]
    fn geometric_tail_converges_with_limit() {
        let x = xs(10);
        let v: Vec<f64> = (1..=10).map(|j| 3.0 - 0.5f64.powi(j)).collect();
        let o = judge(&v, &x, 2.0);
        assert_eq!((o.status, o.rule), (Status::Converged, Rule::GeometricTail));
        assert!((o.limit.unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn oscillation_is_inconclusive() {
        let v = [1.0, 2.0, 1.5, 2.5, 1.2, 2.2];
        assert_eq!(judge(&v, &xs(6), 2.0).status, Status::Inconclusive);
    }
}
