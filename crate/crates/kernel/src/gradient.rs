use num_complex::Complex;

use crate::Scalar;

/// A 2×2 real gradient written in complex form, `xi = f_z` and `zeta = f_zbar`.
///
/// The real matrix `[[a, b], [c, d]]` corresponds to
/// `xi = ((a+d) + i(c-b))/2` and `zeta = ((a-d) + i(c+b))/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanarGradient<T> {
    pub xi: Complex<T>,
    pub zeta: Complex<T>,
}

impl<T: Scalar> PlanarGradient<T> {
    pub fn new(xi: Complex<T>, zeta: Complex<T>) -> Self {
        Self { xi, zeta }
    }

    /// Gradient with real, non-negative entries `(x, y)`.
    pub fn from_moduli(x: T, y: T) -> Self {
        Self {
            xi: Complex::new(x, T::zero()),
            zeta: Complex::new(y, T::zero()),
        }
    }

    pub fn from_matrix(m: [[T; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        let half = T::lit(0.5);
        Self {
            xi: Complex::new((a + d) * half, (c - b) * half),
            zeta: Complex::new((a - d) * half, (c + b) * half),
        }
    }

    pub fn to_matrix(&self) -> [[T; 2]; 2] {
        let s = self.xi + self.zeta;
        let d = self.xi - self.zeta;
        [[s.re, -d.im], [s.im, d.re]]
    }

    #[inline]
    pub fn moduli(&self) -> (T, T) {
        (self.xi.norm(), self.zeta.norm())
    }

    /// Largest singular value, `|xi| + |zeta|`.
    #[inline]
    pub fn op_norm(&self) -> T {
        self.xi.norm() + self.zeta.norm()
    }

    /// `|xi|^2 - |zeta|^2`.
    #[inline]
    pub fn det(&self) -> T {
        self.xi.norm_sqr() - self.zeta.norm_sqr()
    }

    /// True when the matrix has rank one up to `tol` relative to its size.
    pub fn is_rank_one(&self, tol: T) -> bool {
        let (x, y) = self.moduli();
        x + y > T::zero() && (x - y).abs() <= tol * (x + y)
    }

    pub fn scale(&self, t: T) -> Self {
        Self {
            xi: self.xi * t,
            zeta: self.zeta * t,
        }
    }

    /// `self + t * dir`.
    pub fn along(&self, dir: &Self, t: T) -> Self {
        Self {
            xi: self.xi + dir.xi * t,
            zeta: self.zeta + dir.zeta * t,
        }
    }

    /// Multiplies each entry by its own unit phase.
    pub fn rotate(&self, theta_xi: T, theta_zeta: T) -> Self {
        Self {
            xi: self.xi * Complex::from_polar(T::one(), theta_xi),
            zeta: self.zeta * Complex::from_polar(T::one(), theta_zeta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = [[1.5, -0.25], [2.0, 0.75]];
        let g = PlanarGradient::<f64>::from_matrix(m);
        let back = g.to_matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!((back[i][j] - m[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn det_and_norm_match_real_matrix() {
        let m = [[2.0, 1.0], [-0.5, 3.0]];
        let g = PlanarGradient::<f64>::from_matrix(m);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!((g.det() - det).abs() < 1e-14);
        // largest singular value from the eigenvalues of M^T M
        let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        let fro = a * a + b * b + c * c + d * d;
        let smax = ((fro + (fro * fro - 4.0 * det * det).sqrt()) / 2.0).sqrt();
        assert!((g.op_norm() - smax).abs() < 1e-13);
    }

    #[test]
    fn rank_one_detection() {
        let g = PlanarGradient::<f64>::from_matrix([[1.0, 2.0], [0.5, 1.0]]);
        assert!(g.is_rank_one(1e-12));
        assert!(!PlanarGradient::<f64>::from_moduli(1.0, 0.0).is_rank_one(1e-12));
        assert!(!PlanarGradient::<f64>::default().is_rank_one(1e-12));
    }
}
