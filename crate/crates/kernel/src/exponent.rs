use crate::{KernelError, Scalar};

/// Largest accepted exponent. `(p*-1)^p` stays comfortably inside `f64` below this.
pub const P_MAX: f64 = 64.0;

/// The integrability exponent `p` together with the constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent<T> {
    p: T,
    p_star: T,
    c_p: T,
}

impl<T: Scalar> Exponent<T> {
    pub fn new(p: T) -> Result<Self, KernelError> {
        if !(p > T::one() && p <= T::lit(P_MAX)) {
            return Err(KernelError::InvalidExponent(p.to_f64_lossy()));
        }
        let conj = p / (p - T::one());
        let p_star = if p >= conj { p } else { conj };
        let c_p = p * (T::one() - p_star.recip()).powf(p - T::one());
        Ok(Self { p, p_star, c_p })
    }

    #[inline]
    pub fn p(&self) -> T {
        self.p
    }

    /// `max(p, p/(p-1))`.
    #[inline]
    pub fn p_star(&self) -> T {
        self.p_star
    }

    /// `p* - 1`, the conjectured norm of the Beurling transform on `L^p`.
    #[inline]
    pub fn burkholder_norm(&self) -> T {
        self.p_star - T::one()
    }

    /// `p (1 - 1/p*)^(p-1)`.
    #[inline]
    pub fn c_p(&self) -> T {
        self.c_p
    }

    /// Hölder conjugate `p/(p-1)`.
    #[inline]
    pub fn conjugate(&self) -> T {
        self.p / (self.p - T::one())
    }

    /// `p (M/(1+M))^(p-1)`, which equals [`Self::c_p`] at `M = p* - 1`.
    pub fn pointwise_constant(&self, m: T) -> T {
        self.p * (m / (T::one() + m)).powf(self.p - T::one())
    }
}
