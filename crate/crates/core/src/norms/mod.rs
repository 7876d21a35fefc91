//! Norm and seminorm estimators. Every estimator returns a [`NormEstimate`]
//! carrying the ladder history and a convergence verdict.

mod bergman;
mod bmoa;
mod estimate;
mod growth;
mod hardy;

pub use bergman::{a21_inner, a21_weight, bergman_weighted_norm, bergman_weighted_norm_coeff, lp_functional, lp_functional_quadrature};
pub use bmoa::{bmoa_norm_mobius, carleson_seminorm, garsia_oscillation, mobius_oscillation, CarlesonEstimate, MobiusGrid};
pub use estimate::NormEstimate;
pub use growth::{circle_max, growth_sup};
pub use hardy::{h2_norm_exact, h2_prefix_ladder, hardy_norm, mean_p, mean_p_detailed, optimal_domain_norm};

pub use crate::verdict::{Rule, Status};

use crate::disk::RadiusLadder;
use crate::error::{HvError, Result};
use crate::series::TaylorSeries;
use serde::Serialize;

/// Target space of a norm computation. Spaces that depend on a symbol take it
/// separately in [`estimate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "space", content = "param")]
pub enum SpaceSpec {
    Hp(f64),
    Hinf,
    Bmoa,
    BmoaLog,
    Bloch,
    Korenblum(f64),
    Lipschitz(f64),
    BergmanWeighted,
    OptimalDomain(f64),
    A21,
}

impl SpaceSpec {
    pub fn validate(self) -> Result<Self> {
        let bad = |m: String| Err(HvError::InvalidSpec(m));
        match self {
            SpaceSpec::Hp(p) | SpaceSpec::OptimalDomain(p) if !(p >= 1.0) => bad(format!("p = {p} must be at least 1")),
            SpaceSpec::Korenblum(a) if !(0.0..1.0).contains(&a) => bad(format!("Korenblum index {a} must lie in [0, 1)")),
            SpaceSpec::Lipschitz(a) if !(a > 0.0 && a <= 1.0) => bad(format!("Lipschitz index {a} must lie in (0, 1]")),
            s => Ok(s),
        }
    }

    pub fn needs_symbol(self) -> bool {
        matches!(self, SpaceSpec::BergmanWeighted | SpaceSpec::OptimalDomain(_))
    }
}

impl std::str::FromStr for SpaceSpec {
    type Err = HvError;

    /// Accepts `H2`, `Hp:1.5`, `H1.5`, `Hinf`, `BMOA`, `BMOAlog`, `Bloch`,
    /// `K:0.5`, `Lambda:0.5`, `A2w`, `domain:2` and `A21` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, param) = match lower.split_once(':') {
            Some((n, v)) => (n.to_string(), Some(v.to_string())),
            None => (lower.clone(), None),
        };
        let num = |v: Option<String>, what: &str| -> Result<f64> {
            let v = v.ok_or_else(|| HvError::InvalidSpec(format!("space `{s}` needs a parameter, e.g. `{what}:0.5`")))?;
            v.parse().map_err(|_| HvError::InvalidSpec(format!("cannot read `{v}` as a number")))
        };
        let spec = match name.as_str() {
            "hinf" | "h^inf" | "h_inf" => SpaceSpec::Hinf,
            "hp" | "h" => SpaceSpec::Hp(num(param, "Hp")?),
            "bmoa" => SpaceSpec::Bmoa,
            "bmoalog" | "bmoa_log" => SpaceSpec::BmoaLog,
            "bloch" => SpaceSpec::Bloch,
            "k" | "korenblum" => SpaceSpec::Korenblum(num(param, "K")?),
            "lambda" | "lip" | "lipschitz" => SpaceSpec::Lipschitz(num(param, "Lambda")?),
            "a2w" | "bergmanweighted" | "bergman_weighted" => SpaceSpec::BergmanWeighted,
            "domain" | "optimaldomain" | "optimal_domain" => SpaceSpec::OptimalDomain(param.map_or(Ok(2.0), |v| num(Some(v), "domain"))?),
            "a21" => SpaceSpec::A21,
            n if n.starts_with('h') && param.is_none() => SpaceSpec::Hp(
                n[1..].parse().map_err(|_| HvError::InvalidSpec(format!("unknown space `{s}`")))?,
            ),
            _ => return Err(HvError::InvalidSpec(format!("unknown space `{s}`"))),
        };
        spec.validate()
    }
}

/// Grids shared by the estimators.
#[derive(Clone, Debug, PartialEq)]
pub struct NormContext {
    pub ladder: RadiusLadder,
    pub carleson_depth: usize,
    pub mobius_angles: usize,
}

impl Default for NormContext {
    fn default() -> Self {
        Self { ladder: RadiusLadder::default(), carleson_depth: 10, mobius_angles: 64 }
    }
}

/// Estimate the norm of `f` in `space`; `g` is the symbol for
/// [`SpaceSpec::BergmanWeighted`] and [`SpaceSpec::OptimalDomain`].
pub fn estimate(space: SpaceSpec, f: &TaylorSeries, g: Option<&TaylorSeries>, ctx: &NormContext) -> Result<NormEstimate> {
    let space = space.validate()?;
    let symbol = || g.ok_or_else(|| HvError::InvalidSpec("this space needs a symbol g".into()));
    let ladder = &ctx.ladder;
    match space {
        SpaceSpec::Hp(p) => hardy_norm(f, p, ladder),
        SpaceSpec::Hinf => hardy_norm(f, f64::INFINITY, ladder),
        SpaceSpec::Bmoa => bmoa_norm_mobius(f, &MobiusGrid::ladder(ladder.depth(), ctx.mobius_angles), ladder.tol),
        SpaceSpec::BmoaLog => Ok(carleson_seminorm(f, ctx.carleson_depth, true, ladder.tol).estimate),
        SpaceSpec::Bloch => growth_sup(f, 1.0, true, ladder),
        SpaceSpec::Korenblum(a) => growth_sup(f, a, false, ladder),
        SpaceSpec::Lipschitz(a) => growth_sup(f, 1.0 - a, true, ladder),
        SpaceSpec::BergmanWeighted => {
            let v = bergman_weighted_norm(f, symbol()?)?;
            Ok(NormEstimate::exact(v, "weighted Bergman norm of the truncated product f g'"))
        }
        SpaceSpec::OptimalDomain(p) => optimal_domain_norm(symbol()?, f, p, ladder),
        SpaceSpec::A21 => Ok(NormEstimate::exact(a21_inner(f, f).re.sqrt(), "A^2_1 norm of the stored coefficients")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_spaces() {
        let cases = [
            ("H2", SpaceSpec::Hp(2.0)),
            ("Hp:1.5", SpaceSpec::Hp(1.5)),
            ("Hinf", SpaceSpec::Hinf),
            ("BMOA", SpaceSpec::Bmoa),
            ("BMOAlog", SpaceSpec::BmoaLog),
            ("bloch", SpaceSpec::Bloch),
            ("K:0.5", SpaceSpec::Korenblum(0.5)),
            ("Lambda:1", SpaceSpec::Lipschitz(1.0)),
            ("A21", SpaceSpec::A21),
            ("domain", SpaceSpec::OptimalDomain(2.0)),
        ];
        for (s, want) in cases {
            assert_eq!(s.parse::<SpaceSpec>().unwrap(), want, "{s}");
        }
        for bad in ["H0.5", "K:1", "Lambda:0", "X", "K"] {
            assert!(bad.parse::<SpaceSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn dispatcher_requires_symbol() {
        let f = TaylorSeries::unit(0);
        assert!(estimate(SpaceSpec::OptimalDomain(2.0), &f, None, &NormContext::default()).is_err());
        let e = estimate(SpaceSpec::Hp(2.0), &TaylorSeries::monomial(5, 5), None, &NormContext::default()).unwrap();
        assert_eq!(e.value, 1.0);
    }
}
