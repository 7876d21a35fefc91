//! Run configuration shared by the experiments and the CLI.

use crate::disk::RadiusLadder;
use crate::error::{HvError, Result};
use crate::norms::NormContext;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    /// Truncation order `N` of realized series.
    pub order: usize,
    /// Radius ladder depth `J`: radii `1 - 2^{-j}`, `j = 1..=J`.
    pub ladder_depth: usize,
    /// Dyadic depth `L` of Carleson boxes.
    pub dyadic_depth: usize,
    /// Truncation order for Carleson-box experiments, which need radii close to 1.
    pub carleson_order: usize,
    /// Certified tail tolerance defining the safe radius.
    pub tol: f64,
    /// Tolerance for exact coefficient identities.
    pub identity_tol: f64,
    /// Angles per radius of the Möbius parameter grid.
    pub mobius_angles: usize,
    pub seed: u64,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            order: 4096,
            ladder_depth: 12,
            dyadic_depth: 10,
            carleson_order: 1 << 18,
            tol: 1e-8,
            identity_tol: 1e-12,
            mobius_angles: 64,
            seed: 20_240_601,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs always serialize")
    }

    pub fn validate(self) -> Result<Self> {
        let bad = |m: &str| Err(HvError::InvalidConfig(m.to_string()));
        if self.version != CONFIG_VERSION {
            return Err(HvError::InvalidConfig(format!("unsupported config version {} (expected {CONFIG_VERSION})", self.version)));
        }
        if self.order == 0 || self.carleson_order == 0 {
            return bad("truncation orders must be positive");
        }
        if !(1..=52).contains(&self.ladder_depth) {
            return bad("ladder_depth must lie in 1..=52");
        }
        if self.dyadic_depth == 0 || self.dyadic_depth > 20 {
            return bad("dyadic_depth must lie in 1..=20");
        }
        if self.mobius_angles == 0 {
            return bad("mobius_angles must be positive");
        }
        for (name, t) in [("tol", self.tol), ("identity_tol", self.identity_tol)] {
            if !(t > 0.0 && t < 1.0) {
                return Err(HvError::InvalidConfig(format!("{name} = {t} must lie in (0, 1)")));
            }
        }
        Ok(self)
    }

    pub fn ladder(&self) -> RadiusLadder {
        RadiusLadder::new(self.ladder_depth, self.tol).expect("validated config gives a valid ladder")
    }

    pub fn norm_context(&self) -> NormContext {
        NormContext { ladder: self.ladder(), carleson_depth: self.dyadic_depth, mobius_angles: self.mobius_angles }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
        let partial = RunConfig::from_json(r#"{"order": 512, "seed": 7}"#).unwrap();
        assert_eq!((partial.order, partial.seed, partial.ladder_depth), (512, 7, 12));
    }

    #[test]
    fn rejects_bad_values() {
        for text in [r#"{"tol": 0}"#, r#"{"tol": 1.5}"#, r#"{"order": 0}"#, r#"{"ladder_depth": 60}"#, r#"{"bogus": 1}"#, r#"{"version": 2}"#] {
            assert!(RunConfig::from_json(text).is_err(), "{text}");
        }
    }
}
