//! Small dense Hermitian solvers for Gram systems.

use num_complex::Complex64;

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Gram {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl Gram {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(f(i, j));
            }
        }
        Self { n, a }
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }
}

/// Lower factor `L` of `G = L L^H`, stored row-major.
#[derive(Clone, Debug)]
pub(crate) struct Cholesky {
    n: usize,
    l: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Breakdown {
    /// Index of the first pivot that was not safely positive.
    pub index: usize,
    pub pivot: f64,
}

impl Cholesky {
    pub fn factor(g: &Gram) -> Result<Self, Breakdown> {
        let n = g.n;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        let scale = (0..n).map(|i| g.at(i, i).re).fold(0.0, f64::max);
        for j in 0..n {
            let mut d = g.at(j, j).re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if !(d > scale * 1e-30) || !d.is_finite() {
                return Err(Breakdown { index: j, pivot: d });
            }
            let djj = d.sqrt();
            l[j * n + j] = Complex64::new(djj, 0.0);
            for i in j + 1..n {
                let mut s = g.at(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / djj;
            }
        }
        Ok(Self { n, l })
    }

    /// `y = L^{-1} b`.
    pub fn forward(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i].re;
        }
        y
    }

    /// Solve `G x = b` by forward and back substitution.
    #[cfg(test)]
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x = self.forward(b);
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.l[k * n + i].conj() * x[k];
            }
            x[i] = s / self.l[i * n + i].re;
        }
        x
    }

    /// Square of the diagonal spread of `L`: a cheap lower estimate of the
    /// 2-norm condition number of `G`.
    pub fn condition_estimate(&self) -> f64 {
        let d: Vec<f64> = (0..self.n).map(|i| self.l[i * self.n + i].re).collect();
        let hi = d.iter().copied().fold(0.0, f64::max);
        let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
        (hi / lo).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_hermitian_system() {
        let g = Gram { n: 3, a: vec![c(4.0, 0.0), c(1.0, 1.0), c(0.0, 0.5), c(1.0, -1.0), c(3.0, 0.0), c(0.2, 0.0), c(0.0, -0.5), c(0.2, 0.0), c(2.0, 0.0)] };
        let ch = Cholesky::factor(&g).unwrap();
        let b = vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)];
        let x = ch.solve(&b);
        for i in 0..3 {
            let mut s = c(0.0, 0.0);
            for j in 0..3 {
                s += g.at(i, j) * x[j];
            }
            assert!((s - b[i]).norm() < 1e-14);
        }
        assert!(ch.condition_estimate() >= 1.0);
    }

    #[test]
    fn singular_matrix_breaks_down() {
        let g = Gram::from_fn(2, |_, _| c(1.0, 0.0));
        assert_eq!(Cholesky::factor(&g).unwrap_err().index, 1);
    }
}
