use std::fmt;

use crate::{Exponent, KernelError, MatrixN, PlanarGradient, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply<T: Scalar>(self, x: T) -> T {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }
}

/// Names one of the integrands evaluated by this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrandId<T> {
    /// `[|xi| - (p*-1)|zeta|] (|xi|+|zeta|)^(p-1)`.
    Burkholder,
    /// Burkholder with `p*-1` replaced by `M`.
    BurkholderM(T),
    /// `|xi|^p - M^p |zeta|^p`.
    BeurlingM(T),
    /// `(|xi|^2 - M^2|zeta|^2)(|xi|^2 + |zeta|^2)`, homogeneous of degree 4.
    Aubert(T),
    /// `[±det A - λ|A|^n] |A|^(p-n)` on `n×n` matrices.
    HigherDim { n: usize, lambda: T, sign: Sign },
    /// The rank-one concave envelope of `|xi|^p - (p*-1)^p |zeta|^p`.
    EnvelopeClosedForm,
}

impl<T: Scalar> IntegrandId<T> {
    pub fn validate(&self, e: &Exponent<T>) -> Result<(), KernelError> {
        let positive = |name, m: T| {
            if m > T::zero() && m.is_finite() {
                Ok(())
            } else {
                Err(KernelError::param(name, m.to_f64_lossy(), "M > 0"))
            }
        };
        match *self {
            IntegrandId::BurkholderM(m) | IntegrandId::BeurlingM(m) | IntegrandId::Aubert(m) => {
                positive("M", m)
            }
            IntegrandId::HigherDim { n, lambda, .. } => {
                if n < 2 {
                    return Err(KernelError::DimensionTooSmall(n));
                }
                if !(lambda >= T::zero()) {
                    return Err(KernelError::param("lambda", lambda.to_f64_lossy(), "lambda >= 0"));
                }
                if e.p() < T::from_usize_lossy(n) * T::lit(0.5) {
                    return Err(KernelError::param("p", e.p().to_f64_lossy(), "p >= n/2"));
                }
                Ok(())
            }
            IntegrandId::Burkholder | IntegrandId::EnvelopeClosedForm => Ok(()),
        }
    }

    /// Degree of homogeneity.
    pub fn degree(&self, e: &Exponent<T>) -> T {
        match self {
            IntegrandId::Aubert(_) => T::lit(4.0),
            _ => e.p(),
        }
    }

    /// Value at moduli `(x, y) = (|xi|, |zeta|)`.
    ///
    /// `HigherDim` is only defined here for `n = 2`; larger `n` go through
    /// [`eval_higher_dim`]. For `n > 2` this returns NaN.
    pub fn eval_moduli(&self, e: &Exponent<T>, x: T, y: T) -> T {
        match *self {
            IntegrandId::Burkholder => burkholder_moduli(e.p(), e.burkholder_norm(), x, y),
            IntegrandId::BurkholderM(m) => burkholder_moduli(e.p(), m, x, y),
            IntegrandId::BeurlingM(m) => beurling_moduli(e.p(), m, x, y),
            IntegrandId::Aubert(m) => aubert_moduli(m, x, y),
            IntegrandId::HigherDim { n: 2, lambda, sign } => {
                let norm = x + y;
                if norm == T::zero() {
                    return T::zero();
                }
                let det = x * x - y * y;
                (sign.apply(det) - lambda * norm * norm) * norm.powf(e.p() - T::lit(2.0))
            }
            IntegrandId::HigherDim { .. } => T::nan(),
            IntegrandId::EnvelopeClosedForm => envelope_moduli(e, x, y),
        }
    }

    pub fn eval(&self, e: &Exponent<T>, g: &PlanarGradient<T>) -> T {
        let (x, y) = g.moduli();
        self.eval_moduli(e, x, y)
    }

    pub fn name(&self) -> &'static str {
        match self {
            IntegrandId::Burkholder => "burkholder",
            IntegrandId::BurkholderM(_) => "burkholder-m",
            IntegrandId::BeurlingM(_) => "beurling-m",
            IntegrandId::Aubert(_) => "aubert",
            IntegrandId::HigherDim { .. } => "higher-dim",
            IntegrandId::EnvelopeClosedForm => "envelope",
        }
    }
}

impl<T: Scalar> fmt::Display for IntegrandId<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegrandId::BurkholderM(m) | IntegrandId::BeurlingM(m) | IntegrandId::Aubert(m) => {
                write!(f, "{}(M={})", self.name(), m)
            }
            IntegrandId::HigherDim { n, lambda, sign } => {
                let s = if *sign == Sign::Plus { '+' } else { '-' };
                write!(f, "higher-dim(n={n}, lambda={lambda}, sign={s})")
            }
            _ => f.write_str(self.name()),
        }
    }
}

#[inline]
fn burkholder_moduli<T: Scalar>(p: T, m: T, x: T, y: T) -> T {
    let s = x + y;
    if s == T::zero() {
        return T::zero();
    }
    (x - m * y) * s.powf(p - T::one())
}

#[inline]
fn beurling_moduli<T: Scalar>(p: T, m: T, x: T, y: T) -> T {
    x.powf(p) - (m * y).powf(p)
}

#[inline]
fn aubert_moduli<T: Scalar>(m: T, x: T, y: T) -> T {
    let (x2, y2) = (x * x, y * y);
    (x2 - m * m * y2) * (x2 + y2)
}

fn envelope_moduli<T: Scalar>(e: &Exponent<T>, x: T, y: T) -> T {
    let m = e.burkholder_norm();
    let beurling = || beurling_moduli(e.p(), m, x, y);
    let scaled = || e.c_p() * burkholder_moduli(e.p(), m, x, y);
    let zeta_side = m * y >= x;
    match (e.p() >= T::lit(2.0), zeta_side) {
        (true, true) | (false, false) => beurling(),
        (true, false) | (false, true) => scaled(),
    }
}

pub fn eval_burkholder<T: Scalar>(e: &Exponent<T>, g: &PlanarGradient<T>) -> T {
    IntegrandId::Burkholder.eval(e, g)
}

/// `(p*/2) [det - |1-2/p| |A|^2] |A|^(p-2)`.
pub fn eval_burkholder_real_form<T: Scalar>(e: &Exponent<T>, g: &PlanarGradient<T>) -> T {
    let norm = g.op_norm();
    if norm == T::zero() {
        return T::zero();
    }
    let two = T::lit(2.0);
    let gap = (T::one() - two / e.p()).abs();
    e.p_star() / two * (g.det() - gap * norm * norm) * norm.powf(e.p() - two)
}

pub fn eval_burkholder_m<T: Scalar>(
    e: &Exponent<T>,
    m: T,
    g: &PlanarGradient<T>,
) -> Result<T, KernelError> {
    let id = IntegrandId::BurkholderM(m);
    id.validate(e)?;
    Ok(id.eval(e, g))
}

pub fn eval_beurling_m<T: Scalar>(
    e: &Exponent<T>,
    m: T,
    g: &PlanarGradient<T>,
) -> Result<T, KernelError> {
    let id = IntegrandId::BeurlingM(m);
    id.validate(e)?;
    Ok(id.eval(e, g))
}

pub fn eval_aubert<T: Scalar>(m: T, g: &PlanarGradient<T>) -> Result<T, KernelError> {
    if !(m > T::zero()) {
        return Err(KernelError::param("M", m.to_f64_lossy(), "M > 0"));
    }
    let (x, y) = g.moduli();
    Ok(aubert_moduli(m, x, y))
}

pub fn eval_envelope_closed_form<T: Scalar>(e: &Exponent<T>, g: &PlanarGradient<T>) -> T {
    IntegrandId::EnvelopeClosedForm.eval(e, g)
}

/// `[±det A - λ|A|^n] |A|^(p-n)` with `|A|` the operator norm.
pub fn eval_higher_dim<T: Scalar>(
    n: usize,
    p: T,
    lambda: T,
    sign: Sign,
    a: &MatrixN<T>,
) -> Result<T, KernelError> {
    if n < 2 {
        return Err(KernelError::DimensionTooSmall(n));
    }
    if a.n() != n {
        return Err(KernelError::ShapeMismatch {
            expected: n * n,
            got: a.n() * a.n(),
        });
    }
    let e = Exponent::new(p)?;
    IntegrandId::HigherDim { n, lambda, sign }.validate(&e)?;
    let norm = a.op_norm();
    if norm == T::zero() {
        return Ok(T::zero());
    }
    let nn = T::from_usize_lossy(n);
    Ok((sign.apply(a.det()) - lambda * norm.powf(nn)) * norm.powf(p - nn))
}

/// `(|xi|+|zeta|)/(|xi|-|zeta|)`, defined for orientation-preserving gradients.
pub fn distortion<T: Scalar>(g: &PlanarGradient<T>) -> Result<T, KernelError> {
    let (x, y) = g.moduli();
    if x <= y {
        return Err(KernelError::NotOrientationPreserving {
            xi: x.to_f64_lossy(),
            zeta: y.to_f64_lossy(),
        });
    }
    Ok((x + y) / (x - y))
}
