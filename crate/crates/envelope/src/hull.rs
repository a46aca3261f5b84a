use bvlab_kernel::Scalar;

/// Replaces `v` by its least concave majorant over the abscissae `t`.
///
/// `t` must be strictly increasing. Runs the monotone-chain upper hull and
/// then interpolates the hull at every abscissa. `stack` is scratch space.
pub fn upper_hull_in_place<T: Scalar>(t: &[T], v: &mut [T], stack: &mut Vec<usize>) {
    let n = t.len();
    debug_assert_eq!(n, v.len());
    if n < 3 {
        return;
    }
    stack.clear();
    for i in 0..n {
        while stack.len() >= 2 {
            let a = stack[stack.len() - 2];
            let b = stack[stack.len() - 1];
            // drop b when it lies on or below the chord a -> i
            if (v[b] - v[a]) * (t[i] - t[a]) <= (v[i] - v[a]) * (t[b] - t[a]) {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(i);
    }
    for w in stack.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ta, tb, va, vb) = (t[a], t[b], v[a], v[b]);
        for k in a + 1..b {
            let s = (t[k] - ta) / (tb - ta);
            v[k] = va + (vb - va) * s;
        }
    }
}

/// Convenience wrapper for unit-spaced samples.
pub fn upper_hull_uniform<T: Scalar>(v: &mut [T]) {
    let t: Vec<T> = (0..v.len()).map(T::from_usize_lossy).collect();
    upper_hull_in_place(&t, v, &mut Vec::with_capacity(v.len()));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concave_data_is_unchanged() {
        let mut v: Vec<f64> = (0..9).map(|i| -((i as f64) - 4.0).powi(2)).collect();
        let before = v.clone();
        upper_hull_uniform(&mut v);
        assert_eq!(v, before);
    }

    #[test]
    fn convex_data_becomes_the_chord() {
        let mut v: Vec<f64> = (0..5).map(|i| (i as f64).powi(2)).collect();
        upper_hull_uniform(&mut v);
        for (i, x) in v.iter().enumerate() {
            assert!((x - 4.0 * i as f64).abs() < 1e-12);
        }
    }
}
