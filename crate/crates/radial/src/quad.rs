//! One-dimensional quadrature rules.

use bvlab_kernel::Scalar;

use crate::RadialError;

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod estimate and its difference to the embedded 7-point Gauss rule.
pub fn gk15<T: Scalar>(f: &impl Fn(T) -> T, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut k = fc * T::lit(GK_WK[7]);
    let mut g = fc * T::lit(GK_WG[3]);
    for i in 0..7 {
        let dx = half * T::lit(GK_X[i]);
        let s = f(mid - dx) + f(mid + dx);
        k += s * T::lit(GK_WK[i]);
        if i % 2 == 1 {
            g += s * T::lit(GK_WG[i / 2]);
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive Gauss–Kronrod on `[a, b]` to `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<T: Scalar>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    rel_tol: T,
    abs_tol: T,
    max_intervals: usize,
) -> Result<(T, T), RadialError> {
    let first = gk15(f, a, b);
    let mut estimate = first.0;
    let mut done: Vec<(T, T)> = Vec::new();
    let mut todo = vec![(a, b, first)];
    let mut intervals = 1;
    while let Some((lo, hi, (val, err))) = todo.pop() {
        let budget = abs_tol.max(rel_tol * estimate.abs()) * (hi - lo) / (b - a);
        if err <= budget || hi - lo <= (b - a).abs() * T::epsilon() * T::lit(64.0) {
            done.push((val, err));
            continue;
        }
        if intervals >= max_intervals {
            let achieved = done.iter().map(|d| d.1).chain(todo.iter().map(|t| t.2 .1)).fold(err, |s, e| s + e);
            return Err(RadialError::Quadrature {
                achieved: (achieved / estimate.abs().max(T::min_positive_value())).to_f64_lossy(),
                requested: rel_tol.to_f64_lossy(),
            });
        }
        let m = (lo + hi) * T::lit(0.5);
        let (left, right) = (gk15(f, lo, m), gk15(f, m, hi));
        estimate += left.0 + right.0 - val;
        todo.push((lo, m, left));
        todo.push((m, hi, right));
        intervals += 1;
    }
    let vals: Vec<T> = done.iter().map(|d| d.0).collect();
    let err = done.iter().fold(T::zero(), |s, d| s + d.1);
    Ok((pairwise_sum(&vals), err))
}

/// Tree summation; the order depends only on the length.
pub fn pairwise_sum<T: Scalar>(v: &[T]) -> T {
    match v.len() {
        0 => T::zero(),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = T::lit(-z);
        x[n - 1 - i] = T::lit(z);
        w[i] = T::lit(wi);
        w[n - 1 - i] = T::lit(wi);
    }
    (x, w)
}
