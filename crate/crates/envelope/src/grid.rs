use std::io::Write;

use bvlab_kernel::{Exponent, IntegrandId, Scalar};

use crate::EnvelopeError;

/// Smallest admissible number of nodes per axis.
pub const MIN_NODES: usize = 33;

/// Dimensions of a moduli grid, without values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridShape<T> {
    pub nx: usize,
    pub ny: usize,
    pub x_max: T,
    pub y_max: T,
}

impl<T: Scalar> GridShape<T> {
    pub fn new(nx: usize, ny: usize, x_max: T, y_max: T) -> Result<Self, EnvelopeError> {
        if nx < MIN_NODES || ny < MIN_NODES {
            return Err(EnvelopeError::TooFewNodes { nx, ny });
        }
        if !(x_max > T::zero() && x_max.is_finite() && y_max > T::zero() && y_max.is_finite()) {
            return Err(EnvelopeError::BadExtent {
                x_max: x_max.to_f64_lossy(),
                y_max: y_max.to_f64_lossy(),
            });
        }
        Ok(Self { nx, ny, x_max, y_max })
    }

    /// `n × n` nodes on `[0, len]²`.
    pub fn square(n: usize, len: T) -> Result<Self, EnvelopeError> {
        Self::new(n, n, len, len)
    }

    pub fn hx(&self) -> T {
        self.x_max / T::from_usize_lossy(self.nx - 1)
    }

    pub fn hy(&self) -> T {
        self.y_max / T::from_usize_lossy(self.ny - 1)
    }

    pub fn x(&self, i: usize) -> T {
        self.hx() * T::from_usize_lossy(i)
    }

    pub fn y(&self, j: usize) -> T {
        self.hy() * T::from_usize_lossy(j)
    }

    /// Whether diagonal lattice lines pass exactly through grid nodes.
    pub fn has_square_cells(&self) -> bool {
        let (hx, hy) = (self.hx(), self.hy());
        (hx - hy).abs() <= T::epsilon() * T::lit(16.0) * hx.max(hy)
    }
}

/// Samples of an isotropic function at moduli `(x_i, y_j) = (|xi|, |zeta|)`.
///
/// Values are stored row by row: `values[j * nx + i]` is the sample at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuliGrid<T> {
    pub nx: usize,
    pub ny: usize,
    pub x_max: T,
    pub y_max: T,
    pub values: Vec<T>,
}

impl<T: Scalar> ModuliGrid<T> {
    pub fn from_values(shape: GridShape<T>, values: Vec<T>) -> Result<Self, EnvelopeError> {
        let shape = GridShape::new(shape.nx, shape.ny, shape.x_max, shape.y_max)?;
        if values.len() != shape.nx * shape.ny {
            return Err(EnvelopeError::ValueCount {
                expected: shape.nx * shape.ny,
                got: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(EnvelopeError::NonFinite { i: k % shape.nx, j: k / shape.nx });
        }
        Ok(Self { nx: shape.nx, ny: shape.ny, x_max: shape.x_max, y_max: shape.y_max, values })
    }

    pub fn sample(shape: GridShape<T>, f: impl Fn(T, T) -> T) -> Result<Self, EnvelopeError> {
        let mut values = Vec::with_capacity(shape.nx * shape.ny);
        for j in 0..shape.ny {
            for i in 0..shape.nx {
                values.push(f(shape.x(i), shape.y(j)));
            }
        }
        Self::from_values(shape, values)
    }

    pub fn sample_integrand(
        shape: GridShape<T>,
        id: &IntegrandId<T>,
        e: &Exponent<T>,
    ) -> Result<Self, EnvelopeError> {
        id.validate(e)?;
        Self::sample(shape, |x, y| id.eval_moduli(e, x, y))
    }

    pub fn shape(&self) -> GridShape<T> {
        GridShape { nx: self.nx, ny: self.ny, x_max: self.x_max, y_max: self.y_max }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[j * self.nx + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.values[j * self.nx + i] = v;
    }

    pub fn x(&self, i: usize) -> T {
        self.shape().x(i)
    }

    pub fn y(&self, j: usize) -> T {
        self.shape().y(j)
    }

    /// `max |self - other|` over all nodes.
    pub fn sup_distance(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }

    /// `max |self - f|` over nodes with `x ≤ x_max/2` and `y ≤ y_max/2`.
    pub fn inner_half_distance(&self, f: impl Fn(T, T) -> T) -> T {
        let half = T::lit(0.5);
        let mut worst = T::zero();
        for j in 0..self.ny {
            let y = self.y(j);
            if y > self.y_max * half * (T::one() + T::epsilon()) {
                break;
            }
            for i in 0..self.nx {
                let x = self.x(i);
                if x > self.x_max * half * (T::one() + T::epsilon()) {
                    break;
                }
                worst = worst.max((self.get(i, j) - f(x, y)).abs());
            }
        }
        worst
    }

    /// Whether `self ≥ other - tol` at every node.
    pub fn dominates(&self, other: &Self, tol: T) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| *a >= *b - tol)
    }

    /// Writes the grid as CSV: a header row of `x` coordinates, then one
    /// row per `y` with the coordinate in the first column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), EnvelopeError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["y\\x".to_string()];
        header.extend((0..self.nx).map(|i| format!("{:e}", self.x(i).to_f64_lossy())));
        w.write_record(&header)?;
        for j in 0..self.ny {
            let mut row = vec![format!("{:e}", self.y(j).to_f64_lossy())];
            row.extend((0..self.nx).map(|i| format!("{:e}", self.get(i, j).to_f64_lossy())));
            w.write_record(&row)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}
