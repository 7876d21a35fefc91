use super::gauss_on;
use crate::dd;
use crate::error::{HvError, Result};
use crate::series::{circle_samples, TaylorSeries};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Arc `I` of normalized length `length` centered at `center_angle`, and the
/// box `S(I) = {z : z/|z| ∈ I, 1 - |I| < |z| < 1}` over it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CarlesonBox {
    pub center_angle: f64,
    pub length: f64,
}

impl CarlesonBox {
    pub fn new(center_angle: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= 1.0) {
            return Err(HvError::InvalidGrid(format!("arc length {length} must lie in (0, 1]")));
        }
        Ok(Self { center_angle, length })
    }

    /// Angular extent `(start, end)` in radians.
    pub fn arc(&self) -> (f64, f64) {
        let half = PI * self.length;
        (self.center_angle - half, self.center_angle + half)
    }

    pub fn inner_radius(&self) -> f64 {
        1.0 - self.length
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if !(r > self.inner_radius() && r < 1.0) {
            return false;
        }
        if self.length >= 1.0 {
            return true;
        }
        let d = (z.arg() - self.center_angle).rem_euclid(2.0 * PI);
        let d = if d > PI { d - 2.0 * PI } else { d };
        d.abs() < PI * self.length
    }
}

/// Arcs of length `2^{-l}` centered at `2πi/2^l`, for `l = 0..=max_depth`.
pub fn dyadic_boxes(max_depth: usize) -> Vec<CarlesonBox> {
    let mut out = Vec::with_capacity((1 << (max_depth + 1)) - 1);
    for l in 0..=max_depth {
        let n = 1usize << l;
        for i in 0..n {
            out.push(CarlesonBox { center_angle: 2.0 * PI * i as f64 / n as f64, length: 1.0 / n as f64 });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxIntegral {
    pub value: f64,
    /// Outer radius actually reached; below 1 when the series could not be trusted further.
    pub r_cut: f64,
    pub truncated: bool,
}

const SHELL_NODES: usize = 8;
// Shells past this index carry weight below 4^{-28} relative to the density.
const MAX_SHELL: usize = 28;

// Radial pieces of (r0, r_cut) whose width equals half the distance to the circle.
fn dyadic_shells(r0: f64, r_cut: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut a = r0.max(0.0);
    while a < r_cut {
        let b = if a < 0.5 { 0.5 } else { 1.0 - 0.5 * (1.0 - a) }.min(r_cut);
        out.push((a, b));
        if b >= r_cut || out.len() > MAX_SHELL {
            break;
        }
        a = b;
    }
    out
}

/// `∫_{S(I)} |m(z) h(z)|^2 (1 - |z|^2) dA(z)` for the normalized area measure,
/// with the radial range cut at `r_cut`.
///
/// Direct route: dyadic radial shells with Gauss nodes, composite Gauss in
/// angle with `panels` panels, pointwise Horner evaluation.
pub fn box_integral(h: &TaylorSeries, multiplier: Option<&TaylorSeries>, bx: &CarlesonBox, r_cut: f64, panels: usize) -> BoxIntegral {
    let r_cut = r_cut.min(1.0);
    let (t0, t1) = bx.arc();
    let panels = panels.max(1);
    let dt = (t1 - t0) / panels as f64;
    let mut ang = Vec::with_capacity(panels * SHELL_NODES);
    for p in 0..panels {
        let a = t0 + p as f64 * dt;
        ang.extend(gauss_on(a, a + dt, SHELL_NODES));
    }
    let mut total = 0.0;
    for (a, b) in dyadic_shells(bx.inner_radius(), r_cut) {
        for (r, wr) in gauss_on(a, b, SHELL_NODES) {
            let mut s = 0.0;
            for &(t, wt) in &ang {
                let z = Complex64::from_polar(r, t);
                let mut v = dd::horner(h.coeffs(), z);
                if let Some(m) = multiplier {
                    v *= dd::horner(m.coeffs(), z);
                }
                s += wt * v.norm_sqr();
            }
            total += wr * r * (1.0 - r * r) * s / PI;
        }
    }
    BoxIntegral { value: total, r_cut, truncated: r_cut < 1.0 }
}

/// Box integrals of `|h|^2 (1 - |z|^2)` over every dyadic box to `depth`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicSweep {
    /// `integrals[l][i]` belongs to the `i`-th arc of depth `l`.
    pub integrals: Vec<Vec<f64>>,
    pub r_cut: f64,
    pub truncated: bool,
}

/// Fast route for all dyadic boxes at once. Each radial shell
/// `(1 - 2^{-j}, 1 - 2^{-j-1})` is sampled on a full circle by FFT; arcs are
/// integrated by composite Simpson through prefix sums, and every shell is
/// shared by all boxes of depth `<= j`.
pub fn dyadic_box_integrals(h: &TaylorSeries, depth: usize, r_cut: f64) -> DyadicSweep {
    let r_cut = r_cut.min(1.0);
    let mut integrals: Vec<Vec<f64>> = (0..=depth).map(|l| vec![0.0; 1 << l]).collect();
    let mut j = 0usize;
    loop {
        let lo = 1.0 - 0.5f64.powi(j as i32);
        if lo >= r_cut || j > MAX_SHELL {
            break;
        }
        let hi = (1.0 - 0.5f64.powi(j as i32 + 1)).min(r_cut);
        // local scale near the circle is 1 - r, but never finer than the bandwidth
        let band = (16 * (h.order() + 1)).next_power_of_two();
        let m = (1usize << (depth + 2)).max((1usize << (j + 6).min(22)).min(band)).max(16);
        let hstep = 2.0 * PI / m as f64;
        for (r, wr) in gauss_on(lo, hi, SHELL_NODES) {
            let vals = circle_samples(h, r, m);
            let s: Vec<f64> = vals.iter().map(|v| v.norm_sqr()).collect();
            // Simpson pair sums and their prefix sums
            let half = m / 2;
            let mut prefix = vec![0.0; half + 1];
            for k in 0..half {
                let pair = (s[2 * k] + 4.0 * s[2 * k + 1] + s[(2 * k + 2) % m]) * hstep / 3.0;
                prefix[k + 1] = prefix[k] + pair;
            }
            let radial = wr * r * (1.0 - r * r) / PI;
            for (l, row) in integrals.iter_mut().enumerate().take(j.min(depth) + 1) {
                let count = half >> l;
                let n_arcs = 1usize << l;
                for (i, slot) in row.iter_mut().enumerate() {
                    // arc i spans pair indices [i*count - count/2, i*count + count/2)
                    let start = (i * count + half - count / 2) % half;
                    let end = start + count;
                    let arc = if end <= half {
                        prefix[end] - prefix[start]
                    } else {
                        prefix[half] - prefix[start] + prefix[end - half]
                    };
                    debug_assert!(n_arcs * count == half);
                    *slot += radial * arc;
                }
            }
        }
        if hi >= r_cut {
            break;
        }
        j += 1;
    }
    DyadicSweep { integrals, r_cut, truncated: r_cut < 1.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_counts_and_partition() {
        assert_eq!(dyadic_boxes(0).len(), 1);
        assert_eq!(dyadic_boxes(0)[0].length, 1.0);
        assert_eq!(dyadic_boxes(2).len(), 7);
        let boxes = dyadic_boxes(4);
        for l in 0..=4 {
            let len = 0.5f64.powi(l);
            for k in 0..97 {
                let z = Complex64::from_polar(1.0 - 0.01 * len, 2.0 * PI * (k as f64 + 0.37) / 97.0);
                let hits = boxes.iter().filter(|b| b.length == len && b.contains(z)).count();
                assert_eq!(hits, 1, "depth {l}, sample {k}");
            }
        }
    }

    #[test]
    fn zero_density_and_full_box() {
        let zero = TaylorSeries::zero(3);
        let full = CarlesonBox::new(0.0, 1.0).unwrap();
        assert_eq!(box_integral(&zero, None, &full, 1.0, 4).value, 0.0);
        let one = TaylorSeries::unit(0);
        let v = box_integral(&one, None, &full, 1.0, 4).value;
        assert!((v - 0.5).abs() < 1e-8);
        let sweep = dyadic_box_integrals(&one, 3, 1.0);
        assert!((sweep.integrals[0][0] - 0.5).abs() < 1e-8);
        // depth-1 boxes are annuli halves over (1/2, 1)
        let half: f64 = sweep.integrals[1].iter().sum();
        let exact = 0.5 - (0.25 - 0.0625 / 2.0);
        assert!((half - exact).abs() < 1e-10, "{half} vs {exact}");
    }

    #[test]
    fn sweep_matches_direct_route() {
        let f = TaylorSeries::from_real(&[1.0, -0.5, 0.25, 0.3, -0.1]).unwrap();
        let sweep = dyadic_box_integrals(&f, 3, 1.0);
        for (l, row) in sweep.integrals.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                let n = 1usize << l;
                let bx = CarlesonBox::new(2.0 * PI * i as f64 / n as f64, 1.0 / n as f64).unwrap();
                let d = box_integral(&f, None, &bx, 1.0, 8).value;
                assert!((v - d).abs() < 1e-6 * d.max(1e-3), "l={l} i={i}: {v} vs {d}");
            }
        }
    }

    #[test]
    fn box_away_from_singularity_matches_riemann_sum() {
        // |1/(1-z)|^2 (1-|z|^2) over the depth-2 box centred at angle pi
        let h = crate::series::realize(&crate::FunctionSpec::binomial(-1.0), 4000).unwrap();
        let bx = CarlesonBox::new(PI, 0.25).unwrap();
        let quad = box_integral(&h, None, &bx, 0.999, 6).value;
        let (t0, t1) = bx.arc();
        let (nr, nt) = (800, 800);
        let mut riemann = 0.0;
        for a in 0..nr {
            let r = 0.75 + (0.999 - 0.75) * (a as f64 + 0.5) / nr as f64;
            for b in 0..nt {
                let t = t0 + (t1 - t0) * (b as f64 + 0.5) / nt as f64;
                let z = Complex64::from_polar(r, t);
                let v = 1.0 / (1.0 - z).norm_sqr();
                riemann += v * (1.0 - r * r) * r;
            }
        }
        riemann *= (0.999 - 0.75) / nr as f64 * (t1 - t0) / nt as f64 / PI;
        assert!((quad - riemann).abs() < 0.01 * riemann, "{quad} vs {riemann}");
    }
}
