use bvlab_kernel::Scalar;

/// Value, gradient and Hessian of an integrand at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivs<T> {
    pub e: T,
    pub eu: T,
    pub ev: T,
    pub euu: T,
    pub euv: T,
    pub evv: T,
}

/// A scalar integrand `E(u, v)` on the open positive quadrant.
pub trait IntegrandUV<T: Scalar>: Sync {
    fn derivs(&self, u: T, v: T) -> Derivs<T>;

    fn value(&self, u: T, v: T) -> T {
        self.derivs(u, v).e
    }

    fn name(&self) -> String;
}

/// `[u − M v](u + v)^(p−1)`.
#[derive(Clone, Copy, Debug)]
pub struct Burkholder<T> {
    pub p: T,
    pub m: T,
}

impl<T: Scalar> Burkholder<T> {
    /// The member with `M = p − 1`, the one the variational equations single out.
    pub fn critical(p: T) -> Self {
        Self { p, m: p - T::one() }
    }
}

impl<T: Scalar> IntegrandUV<T> for Burkholder<T> {
    fn derivs(&self, u: T, v: T) -> Derivs<T> {
        let (p, m) = (self.p, self.m);
        let one = T::one();
        let two = T::lit(2.0);
        let s = u + v;
        let w = u - m * v;
        let s1 = s.powf(p - one);
        let s2 = s.powf(p - two);
        let s3 = s.powf(p - T::lit(3.0));
        let a = (p - one) * w * s2;
        let b = (p - one) * (p - two) * w * s3;
        Derivs {
            e: w * s1,
            eu: s1 + a,
            ev: -m * s1 + a,
            euu: two * (p - one) * s2 + b,
            euv: (one - m) * (p - one) * s2 + b,
            evv: -two * m * (p - one) * s2 + b,
        }
    }

    fn name(&self) -> String {
        format!("burkholder(p={}, M={})", self.p, self.m)
    }
}

/// `u^p`.
#[derive(Clone, Copy, Debug)]
pub struct PowerU<T> {
    pub p: T,
}

impl<T: Scalar> IntegrandUV<T> for PowerU<T> {
    fn derivs(&self, u: T, _v: T) -> Derivs<T> {
        let p = self.p;
        let one = T::one();
        Derivs {
            e: u.powf(p),
            eu: p * u.powf(p - one),
            ev: T::zero(),
            euu: p * (p - one) * u.powf(p - T::lit(2.0)),
            euv: T::zero(),
            evv: T::zero(),
        }
    }

    fn name(&self) -> String {
        format!("u^{}", self.p)
    }
}

/// `u² + v²`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SumSquares;

impl<T: Scalar> IntegrandUV<T> for SumSquares {
    fn derivs(&self, u: T, v: T) -> Derivs<T> {
        let two = T::lit(2.0);
        Derivs { e: u * u + v * v, eu: two * u, ev: two * v, euu: two, euv: T::zero(), evv: two }
    }

    fn name(&self) -> String {
        "u^2+v^2".into()
    }
}

/// `(u + v)^p P(v / (u + v))` with a cubic `P(t) = c₀ + c₁t + c₂t² + c₃t³`.
///
/// Every isotropic `p`-homogeneous integrand has this shape for some `P`; the
/// Burkholder one with `M = p − 1` is `P(t) = 1 − p t`.
#[derive(Clone, Copy, Debug)]
pub struct HomogeneousCubic<T> {
    pub p: T,
    pub coeffs: [T; 4],
}

impl<T: Scalar> HomogeneousCubic<T> {
    fn poly(&self, t: T) -> (T, T, T) {
        let [c0, c1, c2, c3] = self.coeffs;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        (
            c0 + t * (c1 + t * (c2 + t * c3)),
            c1 + t * (two * c2 + three * c3 * t),
            two * c2 + T::lit(6.0) * c3 * t,
        )
    }

    /// `E_uu − 2E_uv + E_vv`, which in these coordinates is `s^(p−2) P''(t)`.
    pub fn first_residual_exact(&self, u: T, v: T) -> T {
        let s = u + v;
        s.powf(self.p - T::lit(2.0)) * self.poly(v / s).2
    }
}

impl<T: Scalar> IntegrandUV<T> for HomogeneousCubic<T> {
    fn derivs(&self, u: T, v: T) -> Derivs<T> {
        let p = self.p;
        let one = T::one();
        let two = T::lit(2.0);
        let s = u + v;
        let t = v / s;
        let (pv, pd, pdd) = self.poly(t);
        let sp = s.powf(p);
        let g_s = p * s.powf(p - one) * pv;
        let g_t = sp * pd;
        let g_ss = p * (p - one) * s.powf(p - two) * pv;
        let g_st = p * s.powf(p - one) * pd;
        let g_tt = sp * pdd;
        let s2 = s * s;
        let (tu, tv) = (-t / s, (one - t) / s);
        let (tuu, tuv, tvv) = (two * t / s2, (two * t - one) / s2, -two * (one - t) / s2);
        Derivs {
            e: sp * pv,
            eu: g_s + g_t * tu,
            ev: g_s + g_t * tv,
            euu: g_ss + two * g_st * tu + g_tt * tu * tu + g_t * tuu,
            euv: g_ss + g_st * (tu + tv) + g_tt * tu * tv + g_t * tuv,
            evv: g_ss + two * g_st * tv + g_tt * tv * tv + g_t * tvv,
        }
    }

    fn name(&self) -> String {
        let [a, b, c, d] = self.coeffs;
        format!("cubic(p={}, [{a}, {b}, {c}, {d}])", self.p)
    }
}

pub const FD_STEP: f64 = 1e-5;

/// Central differences of a plain function, step `h · max(u, v)`.
#[derive(Clone, Copy, Debug)]
pub struct FiniteDifference<F> {
    pub f: F,
    pub h: f64,
    pub label: &'static str,
}

impl<F> FiniteDifference<F> {
    pub fn new(f: F, label: &'static str) -> Self {
        Self { f, h: FD_STEP, label }
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.h = h;
        self
    }
}

impl<T: Scalar, F: Fn(T, T) -> T + Sync> IntegrandUV<T> for FiniteDifference<F> {
    fn derivs(&self, u: T, v: T) -> Derivs<T> {
        let f = &self.f;
        let h = T::lit(self.h) * u.abs().max(v.abs());
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        let e = f(u, v);
        let (fu_p, fu_m) = (f(u + h, v), f(u - h, v));
        let (fv_p, fv_m) = (f(u, v + h), f(u, v - h));
        let h2 = h * h;
        Derivs {
            e,
            eu: (fu_p - fu_m) / (two * h),
            ev: (fv_p - fv_m) / (two * h),
            euu: (fu_p - two * e + fu_m) / h2,
            euv: (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (four * h2),
            evv: (fv_p - two * e + fv_m) / h2,
        }
    }

    fn name(&self) -> String {
        format!("fd({})", self.label)
    }
}
