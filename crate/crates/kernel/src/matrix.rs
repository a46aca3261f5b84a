use crate::{KernelError, PlanarGradient, Scalar};

/// Dense real `n×n` matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixN<T> {
    n: usize,
    entries: Vec<T>,
}

const JACOBI_SWEEPS: usize = 60;

impl<T: Scalar> MatrixN<T> {
    pub fn new(n: usize, entries: Vec<T>) -> Result<Self, KernelError> {
        if n < 2 {
            return Err(KernelError::DimensionTooSmall(n));
        }
        if entries.len() != n * n {
            return Err(KernelError::ShapeMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Result<Self, KernelError> {
        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = T::one();
        }
        Self::new(n, entries)
    }

    pub fn diag(d: &[T]) -> Result<Self, KernelError> {
        let n = d.len();
        let mut entries = vec![T::zero(); n * n];
        for (i, &v) in d.iter().enumerate() {
            entries[i * n + i] = v;
        }
        Self::new(n, entries)
    }

    pub fn from_gradient(g: &PlanarGradient<T>) -> Self {
        let [[a, b], [c, d]] = g.to_matrix();
        Self {
            n: 2,
            entries: vec![a, b, c, d],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn to_gradient(&self) -> Option<PlanarGradient<T>> {
        (self.n == 2).then(|| {
            let e = &self.entries;
            PlanarGradient::from_matrix([[e[0], e[1]], [e[2], e[3]]])
        })
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> T {
        if let Some(g) = self.to_gradient() {
            return g.op_norm();
        }
        self.singular_values()
            .into_iter()
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Singular values by one-sided (Hestenes) Jacobi rotations on the columns.
    pub fn singular_values(&self) -> Vec<T> {
        let n = self.n;
        // column-major working copy
        let mut cols: Vec<Vec<T>> = (0..n)
            .map(|j| (0..n).map(|i| self.get(i, j)).collect())
            .collect();
        let eps = T::epsilon();
        for _ in 0..JACOBI_SWEEPS {
            let mut rotated = false;
            for j in 0..n {
                for k in (j + 1)..n {
                    let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                    for (&a, &b) in cols[j].iter().zip(&cols[k]) {
                        alpha += a * a;
                        beta += b * b;
                        gamma += a * b;
                    }
                    if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == T::zero() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = (T::one() + t * t).sqrt().recip();
                    let s = c * t;
                    let (left, right) = cols.split_at_mut(k);
                    for (x, y) in left[j].iter_mut().zip(right[0].iter_mut()) {
                        let (a, b) = (*x, *y);
                        *x = c * a - s * b;
                        *y = s * a + c * b;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        cols.iter()
            .map(|c| c.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt())
            .collect()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> T {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = T::one();
        for col in 0..n {
            let mut piv = col;
            for row in (col + 1)..n {
                if a[row * n + col].abs() > a[piv * n + col].abs() {
                    piv = row;
                }
            }
            let pv = a[piv * n + col];
            if pv == T::zero() {
                return T::zero();
            }
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            det *= pv;
            for row in (col + 1)..n {
                let f = a[row * n + col] / pv;
                for j in col..n {
                    let v = a[col * n + j];
                    a[row * n + j] -= f * v;
                }
            }
        }
        det
    }
}
