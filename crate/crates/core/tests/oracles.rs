//! Realized coefficients and evaluations against closed forms computed
//! directly with complex arithmetic.

use hvlab_core::lab::{catalog, trigamma};
use hvlab_core::norms::h2_norm_exact;
use hvlab_core::series::{evaluate, realize};
use hvlab_core::{Complex64, FunctionSpec};
use std::f64::consts::PI;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn closed_form(name: &str, z: Complex64) -> Option<Complex64> {
    let neg_log = -(one() - z).ln();
    Some(match name {
        "z^3" => z * z * z,
        "poly" => 1.0 - 2.0 * z + 3.0 * z * z,
        "neg_log" => neg_log,
        "binomial(-1/4)" => (one() - z).powf(-0.25),
        "binomial(-1/2)" => (one() - z).powf(-0.5),
        "binomial(-2/3)" => (one() - z).powf(-2.0 / 3.0),
        "binomial(-5/4)" => (one() - z).powf(-1.25),
        "binomial(1/2)" => (one() - z).sqrt(),
        "shifted(-5/4, -1)" => (one() + z).powf(-1.25),
        "singular_inner" => ((z + 1.0) / (z - 1.0)).exp(),
        "blaschke(1/2)" => (0.5 - z) / (1.0 - 0.5 * z),
        "blaschke(0.3+0.4i)" => {
            let a = Complex64::new(0.3, 0.4);
            (a - z) / (one() - a.conj() * z)
        }
        "outer_psi" => (3.0 + neg_log).inv(),
        "log_power_witness" => (one() - z).powf(-0.5) * (one() + neg_log).powf(0.75),
        "exp(z)" => z.exp(),
        _ => return None,
    })
}

fn points() -> Vec<Complex64> {
    let mut v = Vec::new();
    for &r in &[0.0, 0.2, 0.45, 0.7] {
        for j in 0..7 {
            v.push(Complex64::from_polar(r, 2.0 * PI * j as f64 / 7.0 + 0.3));
        }
    }
    v
}

#[test]
fn catalog_evaluates_to_closed_forms() {
    for (name, spec) in catalog() {
        let f = realize(&spec, 512).unwrap();
        for z in points() {
            let want = closed_form(name, z).unwrap_or_else(|| panic!("no closed form for {name}"));
            let got = evaluate(&f, z).unwrap().value;
            assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0), "{name} at {z}: {got} vs {want}");
        }
    }
}

// a_k = (1/M) sum_j F(r w^j) w^{-jk} / r^k, summed directly; aliasing from
// index k + M is below r^M.
fn contour_coefficients(name: &str, r: f64, m: usize, count: usize) -> Vec<Complex64> {
    let samples: Vec<Complex64> =
        (0..m).map(|j| closed_form(name, Complex64::from_polar(r, 2.0 * PI * j as f64 / m as f64)).unwrap()).collect();
    (0..count)
        .map(|k| {
            let s: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((j * k) % m) as f64 / m as f64))
                .sum();
            s / (m as f64 * r.powi(k as i32))
        })
        .collect()
}

#[test]
fn catalog_coefficients_match_contour_integrals() {
    for (name, spec) in catalog() {
        let f = realize(&spec, 64).unwrap();
        let want = contour_coefficients(name, 0.5, 256, 20);
        for (k, w) in want.iter().enumerate() {
            let got = f.coeff(k);
            assert!((got - w).norm() <= 1e-9 * w.norm().max(1.0), "{name} a_{k}: {got} vs {w}");
        }
    }
}

#[test]
fn binomial_coefficients_by_gamma_ratio() {
    // (1 - z)^{-5/4}: a_k = Gamma(k + 5/4) / (Gamma(5/4) k!), by the recurrence on k
    let f = realize(&FunctionSpec::binomial(-1.25), 4096).unwrap();
    let mut a = 1.0f64;
    for k in 0..=4096usize {
        assert!((f.coeff(k).re - a).abs() <= 1e-12 * a, "k = {k}");
        assert_eq!(f.coeff(k).im, 0.0);
        a *= (k as f64 + 1.25) / (k as f64 + 1.0);
    }
}

#[test]
fn neg_log_h2_norm_is_basel() {
    let f = realize(&FunctionSpec::NegLogOneMinusZ, 1 << 14).unwrap();
    let n = f.order();
    // sum_{k<=N} 1/k^2 = pi^2/6 - psi'(N + 1)
    let want = (PI * PI / 6.0 - trigamma(n as f64 + 1.0)).sqrt();
    assert!((h2_norm_exact(&f) - want).abs() < 1e-13);
}

#[test]
fn trigamma_against_series() {
    // psi'(x) = sum_{k>=0} 1/(x + k)^2, with the tail by Euler-Maclaurin
    for &x in &[0.5, 1.0, 2.5, 17.0, 1000.0] {
        let k_max = 200_000usize;
        let head: f64 = (0..k_max).rev().map(|k| 1.0 / (x + k as f64).powi(2)).sum();
        let y = x + k_max as f64;
        let tail = 1.0 / y + 0.5 / (y * y) + 1.0 / (6.0 * y * y * y);
        let want = head + tail;
        assert!((trigamma(x) - want).abs() <= 1e-13 * want, "x = {x}");
    }
    assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-14);
}
