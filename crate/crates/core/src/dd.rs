//! Error-free transformations for compensated Horner evaluation.

use num_complex::Complex64;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// A double-double real: `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    #[inline]
    fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let lo = e + self.lo;
        let (hi, lo) = two_sum(s, lo);
        Dd { hi, lo }
    }

    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let lo = e + self.lo + b.lo;
        let (hi, lo) = two_sum(s, lo);
        Dd { hi, lo }
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let lo = e + self.lo * b;
        let (hi, lo) = two_sum(p, lo);
        Dd { hi, lo }
    }

    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

/// Horner evaluation carried in double-double complex arithmetic.
///
/// Returns the rounded value and a running bound on `sum |a_k| |z|^k`, which
/// callers use to scale the rounding error estimate.
pub(crate) fn compensated_horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let mut re = Dd::default();
    let mut im = Dd::default();
    let mut abs_acc = 0.0;
    let r = z.norm();
    for a in coeffs.iter().rev() {
        // (re + i im) * (x + i y)
        let nre = re.mul_f64(z.re).add(im.mul_f64(z.im).neg());
        let nim = re.mul_f64(z.im).add(im.mul_f64(z.re));
        re = nre.add_f64(a.re);
        im = nim.add_f64(a.im);
        abs_acc = abs_acc * r + a.norm();
    }
    (Complex64::new(re.hi + re.lo, im.hi + im.lo), abs_acc)
}

/// Plain Horner for bulk evaluation.
#[inline]
pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_cancellation() {
        // (1 - z)^8 expanded, evaluated near its root where plain Horner loses digits.
        let binom = [1.0, -8.0, 28.0, -56.0, 70.0, -56.0, 28.0, -8.0, 1.0];
        let coeffs: Vec<Complex64> = binom.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let z = Complex64::new(0.999, 0.0);
        let exact = 0.001f64.powi(8);
        let (v, _) = compensated_horner(&coeffs, z);
        assert!((v.re - exact).abs() < 1e-28, "{} vs {}", v.re, exact);
        let plain = horner(&coeffs, z);
        assert!((plain.re - exact).abs() > (v.re - exact).abs());
    }
}
