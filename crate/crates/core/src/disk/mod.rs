//! Quadrature on the disk, Möbius maps and Carleson boxes.

mod carleson;
mod quadrature;

pub use carleson::{box_integral, dyadic_box_integrals, dyadic_boxes, BoxIntegral, CarlesonBox, DyadicSweep};
pub use quadrature::{gauss_legendre, gauss_on};

use crate::error::{HvError, Result};
use crate::series::{circle_samples, TaylorSeries};
use num_complex::Complex64;
use serde::Serialize;

/// Disk automorphism `phi_a(z) = (a - z) / (1 - conj(a) z)`.
pub fn mobius(a: Complex64, z: Complex64) -> Result<Complex64> {
    if !(a.norm() < 1.0) {
        return Err(HvError::InvalidSpec(format!("Möbius parameter must lie in the open disk (|a| = {})", a.norm())));
    }
    let den = 1.0 - a.conj() * z;
    if den.norm() == 0.0 {
        return Err(HvError::PoleHit(z));
    }
    Ok((a - z) / den)
}

/// Radii `r_j = 1 - 2^{-j}`, `j = 1..=J`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusLadder {
    pub radii: Vec<f64>,
    pub tol: f64,
}

impl RadiusLadder {
    pub fn new(depth: usize, tol: f64) -> Result<Self> {
        if depth == 0 || depth > 52 {
            return Err(HvError::InvalidGrid(format!("ladder depth {depth} must be in 1..=52")));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(HvError::InvalidGrid(format!("ladder tolerance {tol} must be in (0, 1)")));
        }
        Ok(Self { radii: (1..=depth).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect(), tol })
    }

    pub fn depth(&self) -> usize {
        self.radii.len()
    }
}

impl Default for RadiusLadder {
    fn default() -> Self {
        Self::new(12, 1e-8).expect("default ladder is valid")
    }
}

/// Largest radius at which the certified sup tail of `f` is at most `tol`.
/// Returns 1 for exact polynomials and 0 when no positive radius qualifies.
pub fn safe_radius(f: &TaylorSeries, tol: f64) -> f64 {
    safe_radius_by(|r| f.sup_tail(r), f.is_exact(), tol)
}

/// As [`safe_radius`] but for the square-summed tail `sum |a_k|^2 r^{2k}`, which
/// controls `M_2` and hence every `M_p` with `p <= 2`.
pub fn safe_radius_l2(f: &TaylorSeries, tol: f64) -> f64 {
    safe_radius_by(|r| f.l2_tail(r).sqrt(), f.is_exact(), tol)
}

fn safe_radius_by(tail: impl Fn(f64) -> f64, exact: bool, tol: f64) -> f64 {
    if exact {
        return 1.0;
    }
    if !(tail(0.0) <= tol) {
        return 0.0;
    }
    // bisection on s = -log2(1 - r)
    let (mut lo, mut hi) = (0.0f64, 52.0f64);
    if tail(1.0 - 2f64.powf(-hi)) <= tol {
        return 1.0 - 2f64.powf(-hi);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail(1.0 - 2f64.powf(-mid)) <= tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    1.0 - 2f64.powf(-lo)
}

/// Tensor rule for `∫_D φ dA` with `dA` the normalized area measure: Gauss in
/// `u = r^2` times the periodic trapezoid rule in angle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarGrid {
    /// `(r_i, w_i)` with `sum_i w_i φ(r_i) ≈ ∫_0^1 φ(r) 2r dr`.
    pub radial_nodes: Vec<(f64, f64)>,
    pub angular_count: usize,
}

impl PolarGrid {
    pub fn disk(gauss_points: usize, angular_count: usize) -> Result<Self> {
        if gauss_points == 0 || angular_count == 0 {
            return Err(HvError::InvalidGrid("grid needs at least one radial and one angular node".into()));
        }
        let radial_nodes = gauss_on(0.0, 1.0, gauss_points).into_iter().map(|(u, w)| (u.sqrt(), w)).collect();
        Ok(Self { radial_nodes, angular_count })
    }

    pub fn total_weight(&self) -> f64 {
        self.radial_nodes.iter().map(|p| p.1).sum()
    }

    pub fn with_angles(&self, angular_count: usize) -> Self {
        Self { radial_nodes: self.radial_nodes.clone(), angular_count }
    }
}

/// `provider(r, M)` returns the integrand at `r e^{2πi m/M}`, `m = 0..M`.
pub fn area_integral(mut provider: impl FnMut(f64, usize) -> Vec<f64>, grid: &PolarGrid) -> f64 {
    let m = grid.angular_count;
    grid.radial_nodes
        .iter()
        .map(|&(r, w)| {
            let vals = provider(r, m);
            debug_assert_eq!(vals.len(), m);
            w * pairwise_sum(&vals) / m as f64
        })
        .sum()
}

/// Area integral with the angular count doubled until two successive values
/// agree to `tol` (relative to `max(1, |value|)`). Returns the value, the final
/// angular count and the last change.
pub fn area_integral_refined(
    mut provider: impl FnMut(f64, usize) -> Vec<f64>,
    grid: &PolarGrid,
    tol: f64,
    max_angles: usize,
) -> (f64, usize, f64) {
    let mut g = grid.clone();
    let mut prev = area_integral(&mut provider, &g);
    loop {
        let next_m = g.angular_count * 2;
        if next_m > max_angles {
            return (prev, g.angular_count, f64::INFINITY);
        }
        g = g.with_angles(next_m);
        let v = area_integral(&mut provider, &g);
        let change = (v - prev).abs();
        if change <= tol * v.abs().max(1.0) {
            return (v, next_m, change);
        }
        prev = v;
    }
}

/// Integrand `|f(z)|^2 · weight(|z|)` supplied through circle samples.
pub fn series_density<'a>(f: &'a TaylorSeries, weight: impl Fn(f64) -> f64 + 'a) -> impl FnMut(f64, usize) -> Vec<f64> + 'a {
    move |r, m| {
        let w = weight(r);
        circle_samples(f, r, m).iter().map(|v| v.norm_sqr() * w).collect()
    }
}

/// Fixed-order pairwise summation, so results do not depend on chunking.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_basics() {
        let a = Complex64::new(0.3, -0.5);
        assert!((mobius(a, Complex64::new(0.0, 0.0)).unwrap() - a).norm() < 1e-16);
        assert!(mobius(a, a).unwrap().norm() < 1e-16);
        let z = Complex64::new(-0.7, 0.2);
        let back = mobius(a, mobius(a, z).unwrap()).unwrap();
        assert!((back - z).norm() < 1e-14);
        assert!(mobius(Complex64::new(1.0, 0.0), z).is_err());
    }

    #[test]
    fn ladder_is_increasing() {
        let l = RadiusLadder::default();
        assert_eq!(l.depth(), 12);
        assert!(l.radii.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(l.radii[0], 0.5);
        assert!(RadiusLadder::new(0, 1e-8).is_err());
    }

    #[test]
    fn grid_has_unit_mass() {
        let g = PolarGrid::disk(128, 8).unwrap();
        assert!((g.total_weight() - 1.0).abs() < 1e-12);
        assert!(g.radial_nodes.iter().all(|p| p.0 < 1.0));
        let one = area_integral(|_, m| vec![1.0; m], &g);
        assert!((one - 1.0).abs() < 1e-12);
        let v = area_integral(|r, m| vec![1.0 - r * r; m], &g);
        assert!((v - 0.5).abs() < 1e-10);
    }

    #[test]
    fn beta_integrals_are_reproduced() {
        let g = PolarGrid::disk(128, 4).unwrap();
        for k in 0..=50 {
            let w0 = area_integral(|r, m| vec![r.powi(2 * k); m], &g);
            let w1 = area_integral(|r, m| vec![r.powi(2 * k) * (1.0 - r * r); m], &g);
            let kf = k as f64;
            assert!((w0 - 1.0 / (kf + 1.0)).abs() < 1e-10);
            assert!((w1 - 1.0 / ((kf + 1.0) * (kf + 2.0))).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn safe_radius_respects_tail() {
        let f = crate::series::realize(&crate::FunctionSpec::NegLogOneMinusZ, 1024).unwrap();
        let r = safe_radius(&f, 1e-8);
        assert!(r > 0.9 && r < 1.0);
        assert!(f.sup_tail(r) <= 1e-8);
        assert!(f.sup_tail(1.0 - 0.5 * (1.0 - r)) > 1e-8);
        assert_eq!(safe_radius(&TaylorSeries::unit(3), 1e-8), 1.0);
    }
}
