use crate::verdict::{judge, Rule, Status};
use serde::Serialize;

/// A norm value together with the ladder history it was read from.
///
/// `value` is the limiting estimate (the geometric extrapolation when the
/// verdict came from a shrinking tail, else the last certified sample);
/// `lower_bound` is the last certified sample itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub status: Status,
    pub samples: Vec<f64>,
    /// Growth variable of each sample: `1/(1-r)` on radius ladders, `1/|I|` on depth ladders.
    pub abscissae: Vec<f64>,
    pub growth_fit: Option<f64>,
    pub safe_radius: Option<f64>,
    pub lower_bound: f64,
    pub rule: Rule,
    pub last_increment: Option<f64>,
    pub limit_increment: Option<f64>,
    /// Samples beyond the safe radius; reported, never used in the verdict.
    pub extrapolated: Vec<f64>,
    pub monotone: bool,
    /// Per-depth maxima for Carleson-type estimates, per-radius maxima for grid sups.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub profile: Vec<f64>,
    pub truncation_note: String,
}

impl NormEstimate {
    pub(crate) fn from_ladder(samples: Vec<f64>, abscissae: Vec<f64>, energy_power: f64) -> Self {
        let v = judge(&samples, &abscissae, energy_power);
        let last = samples.last().copied().unwrap_or(0.0);
        let monotone = samples.windows(2).all(|w| w[1] >= w[0] - 1e-12 * w[0].abs().max(1e-300));
        Self {
            value: v.limit.unwrap_or(last),
            status: v.status,
            growth_fit: v.growth_fit,
            lower_bound: last,
            rule: v.rule,
            last_increment: v.last_increment,
            limit_increment: v.limit_increment,
            samples,
            abscissae,
            safe_radius: None,
            extrapolated: Vec::new(),
            monotone,
            profile: Vec::new(),
            truncation_note: String::new(),
        }
    }

    /// A value computed in closed form from the stored coefficients.
    pub(crate) fn exact(value: f64, note: &str) -> Self {
        Self {
            value,
            status: Status::Converged,
            samples: vec![value],
            abscissae: vec![f64::INFINITY],
            growth_fit: None,
            safe_radius: Some(1.0),
            lower_bound: value,
            rule: Rule::ExactPolynomial,
            last_increment: Some(0.0),
            limit_increment: None,
            extrapolated: Vec::new(),
            monotone: true,
            profile: Vec::new(),
            truncation_note: note.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("estimates always serialize")
    }

    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }

    pub fn is_diverging(&self) -> bool {
        self.status == Status::Diverging
    }
}
