use super::NormEstimate;
use crate::dd;
use crate::disk::{dyadic_box_integrals, mobius, pairwise_sum, safe_radius};
use crate::error::{HvError, Result};
use crate::series::{circle_samples, differentiate, TaylorSeries};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Grid of Möbius parameters `a = ρ e^{iθ}`: the origin plus every radius
/// times `angles` equispaced angles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MobiusGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
}

impl MobiusGrid {
    pub fn ladder(depth: usize, angles: usize) -> Self {
        Self { radii: (1..=depth).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect(), angles }
    }

    /// Same radii, twice the angles and the midpoints between radii.
    pub fn refined(&self) -> Self {
        let mut radii = Vec::with_capacity(2 * self.radii.len());
        let mut prev = 0.0;
        for &r in &self.radii {
            radii.push(1.0 - ((1.0 - prev) * (1.0 - r)).sqrt());
            radii.push(r);
            prev = r;
        }
        Self { radii, angles: 2 * self.angles }
    }
}

const OSC_TOL: f64 = 1e-10;
const MAX_OSC_POINTS: usize = 1 << 16;

/// `‖g∘φ_a - g(a)‖_2^2` read on the circle of radius `rho`:
/// `mean_θ |g(φ_a(ρ e^{iθ})) - g(a)|^2`, with the point count doubled until
/// the mean is stable. Errors if some image point leaves the closed disk.
pub fn mobius_oscillation(g: &TaylorSeries, a: Complex64, rho: f64) -> Result<f64> {
    // trailing zeros add nothing to Horner's value
    let c = &g.coeffs()[..=g.degree().unwrap_or(0)];
    let ga = dd::horner(c, a);
    let mean = |m: usize| -> Result<f64> {
        let mut v = Vec::with_capacity(m);
        for k in 0..m {
            let z = mobius(a, Complex64::from_polar(rho, 2.0 * PI * k as f64 / m as f64))?;
            if z.norm() > 1.0 + 1e-12 {
                return Err(HvError::RadiusOutOfRange(z.norm()));
            }
            v.push((dd::horner(c, z) - ga).norm_sqr());
        }
        Ok(pairwise_sum(&v) / m as f64)
    };
    let mut m = 64;
    let mut prev = mean(m)?;
    loop {
        m *= 2;
        let v = mean(m)?;
        if (v - prev).abs() <= OSC_TOL * v.max(1e-300) || m >= MAX_OSC_POINTS {
            return Ok(v);
        }
        prev = v;
    }
}

/// Garsia form of the same quantity for the dilation `g_R(z) = g(Rz)`:
/// `∫ |g_R|^2 P_a dm - |g_R(a)|^2`, with FFT samples on the circle of radius
/// `R` weighted by the Poisson kernel. Used as the second route.
pub fn garsia_oscillation(g: &TaylorSeries, a: Complex64, big_r: f64, m: usize) -> f64 {
    let vals = circle_samples(g, big_r, m);
    let pk: Vec<f64> = vals
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
            v.norm_sqr() * (1.0 - a.norm_sqr()) / (z - a).norm_sqr()
        })
        .collect();
    let ga = dd::horner(g.coeffs(), a * big_r);
    pairwise_sum(&pk) / m as f64 - ga.norm_sqr()
}

/// `‖g‖_* = |g(0)| + sup_a ‖g∘φ_a - g(a)‖_2` over the grid.
///
/// For each `a` the circle radius is the largest `ρ` whose Möbius image stays
/// inside the safe radius of the truncation, so every evaluation is
/// certified; by subharmonicity the value at that `ρ` is a lower bound for
/// the limit `ρ → 1`. Samples are the running sup over grid radii; the grid
/// sup is a lower bound for the true supremum.
pub fn bmoa_norm_mobius(g: &TaylorSeries, grid: &MobiusGrid, tol: f64) -> Result<NormEstimate> {
    let scale = g.max_abs_coeff().max(1.0);
    let big_r = safe_radius(g, tol * scale);
    let mut radii = vec![0.0];
    radii.extend(grid.radii.iter().copied().filter(|&r| r < big_r));
    let mut samples = Vec::new();
    let mut xs = Vec::new();
    let mut profile = Vec::new();
    let mut running: f64 = 0.0;
    for &ra in &radii {
        let rho = if big_r >= 1.0 { 1.0 } else { (big_r - ra) / (1.0 - ra * big_r) };
        let n_ang = if ra == 0.0 { 1 } else { grid.angles.max(1) };
        let mut best: f64 = 0.0;
        for k in 0..n_ang {
            let a = Complex64::from_polar(ra, 2.0 * PI * k as f64 / n_ang as f64);
            best = best.max(mobius_oscillation(g, a, rho)?.max(0.0).sqrt());
        }
        running = running.max(best);
        profile.push(best);
        samples.push(running);
        xs.push(1.0 / (1.0 - ra));
    }
    let mut est = NormEstimate::from_ladder(samples, xs, 2.0);
    let g0 = g.coeff(0).norm();
    est.value += g0;
    est.lower_bound += g0;
    est.safe_radius = Some(big_r);
    est.profile = profile;
    est.truncation_note = format!(
        "grid sup over {} radii x {} angles: lower bound; circle radius capped by the safe radius {big_r}",
        radii.len(),
        grid.angles
    );
    Ok(est)
}

/// Carleson-box seminorm estimate:
/// `sup_I w(|I|)/|I| ∫_{S(I)} |g'|^2 (1 - |z|^2) dA` over dyadic arcs, with
/// `w = log^2(e/|I|)` when `log_weight` is set and `w = 1` otherwise.
///
/// `profile[l]` is the maximum over arcs of depth `l`; samples are the running
/// sup over depths, so a converged verdict means bounded in depth.
pub fn carleson_seminorm(g: &TaylorSeries, depth: usize, log_weight: bool, tol: f64) -> CarlesonEstimate {
    let h = differentiate(g);
    let scale = h.max_abs_coeff().max(1.0);
    let r_cut = safe_radius(&h, tol * scale);
    let sweep = dyadic_box_integrals(&h, depth, r_cut);
    let mut profile = Vec::with_capacity(depth + 1);
    let mut argmax = Vec::with_capacity(depth + 1);
    for (l, row) in sweep.integrals.iter().enumerate() {
        let len = 0.5f64.powi(l as i32);
        let w = if log_weight { (1.0 + (1.0 / len).ln()).powi(2) } else { 1.0 };
        let (i, v) = row.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        profile.push(w * v / len);
        argmax.push(2.0 * PI * i as f64 / row.len() as f64);
    }
    let mut running: f64 = 0.0;
    let samples: Vec<f64> = profile.iter().map(|&v| {
        running = running.max(v);
        running
    }).collect();
    let xs: Vec<f64> = (0..=depth).map(|l| 2f64.powi(l as i32)).collect();
    let mut est = NormEstimate::from_ladder(samples, xs, 1.0);
    est.safe_radius = Some(r_cut);
    est.profile = profile.clone();
    est.truncation_note = format!("dyadic arcs to depth {depth} (lower bound for the sup over all arcs); radial integrals cut at r = {r_cut}");
    CarlesonEstimate { estimate: est, per_depth_max: profile, argmax_angle: argmax, r_cut, log_weight }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CarlesonEstimate {
    pub estimate: NormEstimate,
    pub per_depth_max: Vec<f64>,
    /// Center angle of the maximizing arc at each depth.
    pub argmax_angle: Vec<f64>,
    pub r_cut: f64,
    pub log_weight: bool,
}
