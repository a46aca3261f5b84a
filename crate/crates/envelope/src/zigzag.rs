use bvlab_kernel::Scalar;
use rayon::prelude::*;

use crate::hull::upper_hull_in_place;
use crate::{EnvelopeError, ModuliGrid};

/// How diagonal lines are treated where they meet the coordinate axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Lines are reflected across the axes (the moduli function is even in
    /// each argument), so axis values can rise. Needs square cells.
    #[default]
    Folded,
    /// Lines stop at the window edge; their endpoints are held fixed.
    Windowed,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Folded => "folded",
            Boundary::Windowed => "windowed",
        }
    }
}

/// One zig-zag pass with the default boundary treatment.
///
/// Uses [`Boundary::Folded`] when the cells are square and
/// [`Boundary::Windowed`] otherwise.
pub fn zigzag_concavify_step<T: Scalar>(g: &ModuliGrid<T>) -> ModuliGrid<T> {
    let b = if g.shape().has_square_cells() { Boundary::Folded } else { Boundary::Windowed };
    zigzag_step_with(g, b).expect("boundary chosen to match the grid")
}

/// One pass of 1-D concave-hull replacement along every `±π/4` lattice line.
pub fn zigzag_step_with<T: Scalar>(
    g: &ModuliGrid<T>,
    boundary: Boundary,
) -> Result<ModuliGrid<T>, EnvelopeError> {
    if !g.shape().has_square_cells() {
        return Err(EnvelopeError::NonSquareCells {
            hx: g.shape().hx().to_f64_lossy(),
            hy: g.shape().hy().to_f64_lossy(),
        });
    }
    Ok(match boundary {
        Boundary::Folded => folded_step(g),
        Boundary::Windowed => {
            let half = windowed_family(g, Family::Plus);
            windowed_family(&half, Family::Minus)
        }
    })
}

#[derive(Clone, Copy)]
enum Family {
    /// `x - y` constant.
    Plus,
    /// `x + y` constant.
    Minus,
}

fn line_nodes(nx: usize, ny: usize, family: Family, k: usize) -> Vec<(usize, usize)> {
    match family {
        Family::Plus => {
            // k indexes i - j + (ny - 1)
            let d = k as isize - (ny as isize - 1);
            let i0 = d.max(0) as usize;
            (i0..nx)
                .map(|i| (i, (i as isize - d) as usize))
                .take_while(|&(_, j)| j < ny)
                .collect()
        }
        Family::Minus => {
            let i0 = k.saturating_sub(ny - 1);
            (i0..=k.min(nx - 1)).map(|i| (i, k - i)).collect()
        }
    }
}

/// Node indices of one diagonal with their hull values.
type Line<T> = (Vec<(usize, usize)>, Vec<T>);

fn windowed_family<T: Scalar>(g: &ModuliGrid<T>, family: Family) -> ModuliGrid<T> {
    let (nx, ny) = (g.nx, g.ny);
    let lines: Vec<Line<T>> = (0..nx + ny - 1)
        .into_par_iter()
        .map(|k| {
            let nodes = line_nodes(nx, ny, family, k);
            let mut v: Vec<T> = nodes.iter().map(|&(i, j)| g.get(i, j)).collect();
            let t: Vec<T> = (0..v.len()).map(T::from_usize_lossy).collect();
            upper_hull_in_place(&t, &mut v, &mut Vec::with_capacity(t.len()));
            (nodes, v)
        })
        .collect();
    let mut out = g.clone();
    for (nodes, v) in lines {
        for (&(i, j), x) in nodes.iter().zip(v) {
            out.set(i, j, x);
        }
    }
    out
}

fn folded_step<T: Scalar>(g: &ModuliGrid<T>) -> ModuliGrid<T> {
    let (nx, ny) = (g.nx as isize, g.ny as isize);
    // Lines I - J = k on the reflected lattice; k < 0 and the other family
    // are mirror images of these.
    let lines: Vec<Vec<(usize, usize, T)>> = (0..(nx + ny - 1))
        .into_par_iter()
        .map(|k| {
            let lo = (-(nx - 1)).max(k - (ny - 1));
            let hi = (nx - 1).min(k + ny - 1);
            let nodes: Vec<(usize, usize)> =
                (lo..=hi).map(|i| (i.unsigned_abs(), (i - k).unsigned_abs())).collect();
            let mut v: Vec<T> = nodes.iter().map(|&(i, j)| g.get(i, j)).collect();
            let t: Vec<T> = (0..v.len()).map(T::from_usize_lossy).collect();
            upper_hull_in_place(&t, &mut v, &mut Vec::with_capacity(t.len()));
            nodes.into_iter().zip(v).map(|((i, j), x)| (i, j, x)).collect()
        })
        .collect();
    let mut out = g.clone();
    for line in lines {
        for (i, j, x) in line {
            if x > out.get(i, j) {
                out.set(i, j, x);
            }
        }
    }
    out
}
