use crate::{Exponent, IntegrandId, Scalar};

pub const VNORM_SCAN_POINTS: usize = 4097;
const GOLDEN_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VnormResult<T> {
    pub value: T,
    /// Point `x` on the segment `(x, 1-x)` where the maximum is attained.
    pub argmax: T,
}

/// `sup |E(x, 1-x)|` over `x ∈ [0, 1]`, by a uniform scan followed by
/// golden-section refinement around the best sample.
pub fn vnorm<T: Scalar, F: Fn(T, T) -> T>(f: F, scan_points: usize) -> VnormResult<T> {
    let m = scan_points.max(3);
    let h = T::one() / T::from_usize_lossy(m - 1);
    let g = |x: T| f(x, T::one() - x).abs();
    let mut best = (T::neg_infinity(), 0usize);
    for k in 0..m {
        let v = g(T::from_usize_lossy(k) * h);
        if v > best.0 {
            best = (v, k);
        }
    }
    let k = best.1;
    let mut lo = T::from_usize_lossy(k.saturating_sub(1)) * h;
    let mut hi = (T::from_usize_lossy(k + 1) * h).min(T::one());
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (g(a), g(b));
    for _ in 0..GOLDEN_ITERS {
        if hi - lo <= T::epsilon() {
            break;
        }
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = g(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = g(b);
        }
    }
    let mut out = VnormResult {
        value: best.0,
        argmax: T::from_usize_lossy(k) * h,
    };
    for x in [a, b, lo, hi] {
        let v = g(x);
        if v > out.value {
            out = VnormResult { value: v, argmax: x };
        }
    }
    out
}

pub fn vnorm_integrand<T: Scalar>(id: &IntegrandId<T>, e: &Exponent<T>) -> VnormResult<T> {
    vnorm(|x, y| id.eval_moduli(e, x, y), VNORM_SCAN_POINTS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_maximum_is_refined() {
        // x(1-x) peaks at 1/2, between the samples of a 4-point scan
        let r = vnorm(|x: f64, y: f64| x * y, 4);
        assert!((r.value - 0.25).abs() < 1e-12);
        assert!((r.argmax - 0.5).abs() < 1e-6);
    }

    #[test]
    fn endpoint_maximum() {
        let e = Exponent::new(3.0_f64).unwrap();
        let r = vnorm_integrand(&IntegrandId::Burkholder, &e);
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.argmax < 1e-9);
    }
}
