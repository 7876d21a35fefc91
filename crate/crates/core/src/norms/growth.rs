use super::NormEstimate;
use crate::dd;
use crate::disk::{safe_radius, RadiusLadder};
use crate::error::Result;
use crate::series::{circle_samples, differentiate, TaylorSeries};
use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_ANGLES: usize = 1 << 20;

/// `sup_z (1 - |z|^2)^beta |h(z)|` with `h = f'` or `f`, as a certified lower
/// bound read along the ladder (plus the origin).
///
/// Per radius: angular maximum over FFT samples with the count doubled until
/// stable, then golden-section refinement at the running argmax. The samples
/// are the running sup over radii. Bloch is `(f, 1, true)`, `K_α` is
/// `(f, α, false)` and the `Λ_α` seminorm is `(f, 1 - α, true)`.
pub fn growth_sup(f: &TaylorSeries, beta: f64, on_derivative: bool, ladder: &RadiusLadder) -> Result<NormEstimate> {
    let h = if on_derivative { differentiate(f) } else { f.clone() };
    let scale = h.max_abs_coeff().max(1.0);
    let safe = safe_radius(&h, ladder.tol * scale);
    let mut radii = vec![0.0];
    radii.extend(ladder.radii.iter().copied());
    let mut samples = Vec::new();
    let mut xs = Vec::new();
    let mut profile = Vec::new();
    let mut extrapolated = Vec::new();
    let mut running: f64 = 0.0;
    for &r in &radii {
        let w = (1.0 - r * r).powf(beta);
        let v = w * circle_max(&h, r);
        if r <= safe {
            running = running.max(v);
            profile.push(v);
            samples.push(running);
            xs.push(1.0 / (1.0 - r));
        } else {
            extrapolated.push(v);
        }
    }
    let mut est = NormEstimate::from_ladder(samples, xs, 1.0);
    est.safe_radius = Some(safe);
    est.extrapolated = extrapolated;
    est.profile = profile;
    est.truncation_note = "grid sup: lower bound for the supremum over the disk".into();
    Ok(est)
}

/// `max_θ |h(r e^{iθ})|`.
pub fn circle_max(h: &TaylorSeries, r: f64) -> f64 {
    if r == 0.0 {
        return h.coeff(0).norm();
    }
    let mut m = ((16.0 / (1.0 - r).max(1e-300)) as usize).clamp(64, MAX_ANGLES).next_power_of_two();
    let (mut best, mut idx) = argmax(&circle_samples(h, r, m));
    loop {
        let next = m * 2;
        if next > MAX_ANGLES {
            break;
        }
        let (b, i) = argmax(&circle_samples(h, r, next));
        let change = (b - best).abs();
        best = b;
        idx = i;
        m = next;
        if change <= 1e-9 * best.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let center = 2.0 * PI * idx as f64 / m as f64;
    let step = 2.0 * PI / m as f64;
    let refined = golden_max(|t| dd::horner(h.coeffs(), Complex64::from_polar(r, t)).norm(), center - step, center + step);
    best.max(refined)
}

fn argmax(v: &[Complex64]) -> (f64, usize) {
    v.iter().enumerate().map(|(i, z)| (z.norm(), i)).fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a })
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    fc.max(fd)
}
