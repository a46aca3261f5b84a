use bvlab_kernel::Scalar;
use serde::{Deserialize, Serialize};

use crate::RadialError;

/// `f₊ = ρ(|z|) z/|z|` or `f₋ = ρ(|z|) z̄/|z|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Plus,
    Minus,
}

impl Orientation {
    /// The orientation whose energy has a closed form at exponent `p`.
    pub fn for_exponent<T: Scalar>(p: T) -> Self {
        if p >= T::lit(2.0) {
            Orientation::Plus
        } else {
            Orientation::Minus
        }
    }

    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Orientation::Plus => T::one(),
            Orientation::Minus => -T::one(),
        }
    }
}

/// `c r^α` on `[start, next start)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPiece<T> {
    pub start: T,
    pub c: T,
    pub alpha: T,
}

/// Radial profiles with exact derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum RhoFamily<T> {
    /// `c r^α`.
    Power { c: T, alpha: T },
    /// `Σ c_k r^(α_k)`.
    PowerSum { terms: Vec<(T, T)> },
    /// `c_k r^(α_k)` on consecutive pieces; the first piece starts at 0.
    PiecewisePower { pieces: Vec<PowerPiece<T>> },
    /// Linear interpolation of `(r_k, ρ_k)` knots starting at `(0, 0)`,
    /// extended past the last knot with the last slope.
    PiecewiseLinear { knots: Vec<(T, T)> },
}

impl<T: Scalar> RhoFamily<T> {
    pub fn power(c: T, alpha: T) -> Self {
        RhoFamily::Power { c, alpha }
    }

    pub fn identity() -> Self {
        Self::power(T::one(), T::one())
    }

    fn validate(&self) -> Result<(), RadialError> {
        let bad = |what: &str| Err(RadialError::BadProfile(what.to_string()));
        match self {
            RhoFamily::Power { c, alpha } => {
                if !(c.is_finite() && alpha.is_finite()) {
                    return bad("non-finite power parameters");
                }
            }
            RhoFamily::PowerSum { terms } => {
                if terms.is_empty() || terms.iter().any(|(c, a)| !(c.is_finite() && a.is_finite())) {
                    return bad("power sum needs finite terms");
                }
            }
            RhoFamily::PiecewisePower { pieces } => {
                if pieces.first().map(|p| p.start) != Some(T::zero()) {
                    return bad("first piece must start at 0");
                }
                for w in pieces.windows(2) {
                    if !(w[1].start > w[0].start) {
                        return bad("piece starts must increase");
                    }
                    let r = w[1].start;
                    let (l, rt) = (w[0].c * r.powf(w[0].alpha), w[1].c * r.powf(w[1].alpha));
                    if (l - rt).abs() > T::lit(1e-9) * l.abs().max(T::one()) {
                        return bad("pieces must join continuously");
                    }
                }
            }
            RhoFamily::PiecewiseLinear { knots } => {
                if knots.len() < 2 || knots[0] != (T::zero(), T::zero()) {
                    return bad("knots must start at (0, 0) and have a second point");
                }
                if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return bad("knot radii must increase");
                }
            }
        }
        Ok(())
    }

    /// `(ρ(r), ρ'(r))`; at breakpoints the right derivative.
    pub fn eval(&self, r: T) -> (T, T) {
        match self {
            RhoFamily::Power { c, alpha } => power(*c, *alpha, r),
            RhoFamily::PowerSum { terms } => terms.iter().fold((T::zero(), T::zero()), |acc, (c, a)| {
                let (v, d) = power(*c, *a, r);
                (acc.0 + v, acc.1 + d)
            }),
            RhoFamily::PiecewisePower { pieces } => {
                let k = pieces.iter().rposition(|p| p.start <= r).unwrap_or(0);
                power(pieces[k].c, pieces[k].alpha, r)
            }
            RhoFamily::PiecewiseLinear { knots } => {
                let k = knots[..knots.len() - 1].iter().rposition(|kn| kn.0 <= r).unwrap_or(0);
                let ((r0, v0), (r1, v1)) = (knots[k], knots[k + 1]);
                let slope = (v1 - v0) / (r1 - r0);
                (v0 + slope * (r - r0), slope)
            }
        }
    }

    /// `(ρ, ρ', ρ'')`; at breakpoints the right derivatives.
    pub fn eval2(&self, r: T) -> (T, T, T) {
        let (v, d) = self.eval(r);
        let dd = match self {
            RhoFamily::Power { c, alpha } => power2(*c, *alpha, r),
            RhoFamily::PowerSum { terms } => {
                terms.iter().fold(T::zero(), |acc, (c, a)| acc + power2(*c, *a, r))
            }
            RhoFamily::PiecewisePower { pieces } => {
                let k = pieces.iter().rposition(|p| p.start <= r).unwrap_or(0);
                power2(pieces[k].c, pieces[k].alpha, r)
            }
            RhoFamily::PiecewiseLinear { .. } => T::zero(),
        };
        (v, d, dd)
    }

    /// Whether `ρ` is `C²` on `(0, ∞)`.
    pub fn is_c2(&self) -> bool {
        self.breakpoints().is_empty()
    }

    pub fn rho(&self, r: T) -> T {
        self.eval(r).0
    }

    /// Interior points where `ρ'` may jump.
    pub fn breakpoints(&self) -> Vec<T> {
        match self {
            RhoFamily::PiecewisePower { pieces } => pieces.iter().skip(1).map(|p| p.start).collect(),
            RhoFamily::PiecewiseLinear { knots } => {
                knots[1..knots.len() - 1].iter().map(|k| k.0).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Exponent `α₀` with `ρ(r) ~ c r^(α₀)` as `r → 0`, or `None` if `ρ ≡ 0` there.
    pub fn leading_exponent(&self) -> Option<T> {
        match self {
            RhoFamily::Power { c, alpha } => (*c != T::zero()).then_some(*alpha),
            RhoFamily::PowerSum { terms } => terms
                .iter()
                .filter(|(c, _)| *c != T::zero())
                .map(|(_, a)| *a)
                .fold(None, |m: Option<T>, a| Some(m.map_or(a, |m| m.min(a)))),
            RhoFamily::PiecewisePower { pieces } => {
                (pieces[0].c != T::zero()).then_some(pieces[0].alpha)
            }
            RhoFamily::PiecewiseLinear { knots } => (knots[1].1 != T::zero()).then_some(T::one()),
        }
    }
}

fn power<T: Scalar>(c: T, alpha: T, r: T) -> (T, T) {
    if r == T::zero() {
        return (T::zero(), T::zero());
    }
    let v = c * r.powf(alpha);
    (v, alpha * v / r)
}

fn power2<T: Scalar>(c: T, alpha: T, r: T) -> T {
    if r == T::zero() {
        return T::zero();
    }
    c * alpha * (alpha - T::one()) * r.powf(alpha - T::lit(2.0))
}

/// A radial stretching on the disc of radius `radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile<T> {
    pub rho: RhoFamily<T>,
    pub radius: T,
    pub orientation: Orientation,
}

/// Number of log-spaced radii used by the pointwise admissibility checks,
/// on top of the breakpoints and their neighbours.
pub const ADMISSIBILITY_SAMPLES: usize = 4001;

impl<T: Scalar> RadialProfile<T> {
    pub fn new(rho: RhoFamily<T>, radius: T, orientation: Orientation) -> Result<Self, RadialError> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(RadialError::BadProfile(format!("radius {radius} must be positive")));
        }
        rho.validate()?;
        Ok(Self { rho, radius, orientation })
    }

    pub fn from_json(text: &str) -> Result<Self, RadialError>
    where
        T: for<'de> Deserialize<'de>,
    {
        let p: Self = serde_json::from_str(text).map_err(|e| RadialError::BadProfile(e.to_string()))?;
        Self::new(p.rho, p.radius, p.orientation)
    }

    /// Radii where pointwise conditions are checked: log-spaced over
    /// `[R·1e-6, R]` plus both sides of every breakpoint.
    pub fn sample_radii(&self) -> Vec<T> {
        let n = ADMISSIBILITY_SAMPLES;
        let lo = T::lit(1e-6).ln();
        let mut rs: Vec<T> = (0..n)
            .map(|k| self.radius * (lo * (T::one() - T::from_usize_lossy(k) / T::from_usize_lossy(n - 1))).exp())
            .collect();
        let nudge = T::lit(1e-9);
        for b in self.rho.breakpoints() {
            if b < self.radius {
                rs.push(b * (T::one() - nudge));
                rs.push(b * (T::one() + nudge));
            }
        }
        rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        rs
    }

    /// `-ρ ≤ rρ' ≤ ρ` on the sample radii and, for `p > 2`, `r^(-1+2/p) ρ(r) → 0`.
    pub fn check_energy_admissible(&self, p: T) -> Result<(), RadialError> {
        let tol = T::lit(1e-12);
        for r in self.sample_radii() {
            let (v, d) = self.rho.eval(r);
            let slack = tol * v.abs().max(T::min_positive_value());
            if !(r * d <= v + slack && -v <= r * d + slack) {
                return Err(RadialError::NotAdmissible(format!(
                    "-rho <= r rho' <= rho fails at r = {r}"
                )));
            }
        }
        let critical = T::one() - T::lit(2.0) / p;
        if let Some(a) = self.rho.leading_exponent() {
            // p > 2 needs decay of r^(-1+2/p) ρ; p ≤ 2 needs it for the energy to be finite
            if !(a > critical) {
                return Err(RadialError::NotAdmissible(format!(
                    "leading exponent {a} must exceed 1 - 2/p = {critical}"
                )));
            }
        }
        Ok(())
    }

    /// `ρ(1) = 1` and `ρ ≥ rρ' ≥ (1 - 2/s) ρ` on `[0, 1]`, with `s > p`.
    pub fn check_local_max_admissible(&self, s: T, p: T) -> Result<(), RadialError> {
        if !(s > p) {
            return Err(RadialError::NotAdmissible(format!("s = {s} must exceed p = {p}")));
        }
        if self.radius < T::one() {
            return Err(RadialError::NotAdmissible("profile must cover [0, 1]".into()));
        }
        let one = self.rho.rho(T::one());
        if (one - T::one()).abs() > T::lit(1e-12) {
            return Err(RadialError::NotAdmissible(format!("rho(1) = {one}, expected 1")));
        }
        let lower = T::one() - T::lit(2.0) / s;
        let tol = T::lit(1e-12);
        for r in self.sample_radii().into_iter().filter(|&r| r <= T::one()) {
            let (v, d) = self.rho.eval(r);
            let slack = tol * v.abs();
            if !(r * d <= v + slack && lower * v <= r * d + slack) {
                return Err(RadialError::NotAdmissible(format!(
                    "rho >= r rho' >= (1-2/s) rho fails at r = {r}"
                )));
            }
        }
        Ok(())
    }
}
