//! Zig-zag concave envelope of a homogeneous isotropic function.
//!
//! For `E` homogeneous of degree `q` write `s = x + y`, `d = x - y` and
//! `E(x, y) = s^q g(d/s)`. Concavity along `x + y = const` is concavity of `g`
//! on `[-1, 1]`. Concavity along `x - y = const` is concavity of the
//! reflected profile `|τ|^q g(1/τ)` for `|τ| ≥ 1`. On the node set
//! `σ_i = -1 + i/N` and its reciprocals both conditions are three-point
//! stencils in `i`, so the least solution of
//! `g_i = max(g0_i, inner_i(g), outer_i(g))` is an optimal stopping problem.
//! It is solved exactly by policy iteration with tridiagonal solves,
//! warm-started from the solution on the next coarser level.

use bvlab_kernel::{Exponent, IntegrandId, Scalar};

use crate::EnvelopeError;

const COARSEST: usize = 16;

/// Discrete least zig-zag concave majorant of a homogeneous profile.
#[derive(Debug, Clone)]
pub struct HomogeneousProfile<T> {
    degree: T,
    half_nodes: usize,
    values: Vec<T>,
    obstacle: Vec<T>,
    pub policy_updates: usize,
}

struct Stencils<T> {
    // g_i >= lower[a][i] * g_{i-1} + upper[a][i] * g_{i+1}, a = inner/outer
    lower: [Vec<T>; 2],
    upper: [Vec<T>; 2],
    active: [Vec<bool>; 2],
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Action {
    Stop,
    Inner,
    Outer,
}

impl<T: Scalar> HomogeneousProfile<T> {
    /// Solves on `2N + 1` nodes; `N` is rounded up to `16·2^k` and capped at
    /// [`max_half_nodes`](Self::max_half_nodes) for the scalar type.
    pub fn solve(
        id: &IntegrandId<T>,
        e: &Exponent<T>,
        half_nodes: usize,
    ) -> Result<Self, EnvelopeError> {
        id.validate(e)?;
        let q = id.degree(e);
        Self::solve_fn(q, half_nodes, |x, y| id.eval_moduli(e, x, y))
    }

    /// Same as [`solve`](Self::solve) for any function homogeneous of degree `q`.
    pub fn solve_fn(
        q: T,
        half_nodes: usize,
        f: impl Fn(T, T) -> T,
    ) -> Result<Self, EnvelopeError> {
        let mut n = COARSEST;
        while n < half_nodes.min(Self::max_half_nodes()) {
            n *= 2;
        }
        let mut level = Self::solve_level(q, COARSEST, &f, None)?;
        let mut m = COARSEST;
        while m < n {
            m *= 2;
            let warm = refine(&level.values);
            let updates = level.policy_updates;
            level = Self::solve_level(q, m, &f, Some(warm))?;
            level.policy_updates += updates;
        }
        Ok(level)
    }

    fn solve_level(
        q: T,
        n: usize,
        f: &impl Fn(T, T) -> T,
        warm: Option<Vec<T>>,
    ) -> Result<Self, EnvelopeError> {
        let len = 2 * n + 1;
        let half = T::lit(0.5);
        let obstacle: Vec<T> = (0..len)
            .map(|i| {
                let s = sigma::<T>(i, n);
                f((T::one() + s).abs() * half, (T::one() - s).abs() * half)
            })
            .collect();
        if let Some(i) = obstacle.iter().position(|v| !v.is_finite()) {
            return Err(EnvelopeError::NonFinite { i, j: 0 });
        }
        let st = stencils(q, n);
        let eps = T::epsilon() * T::lit(512.0);
        let start = warm.unwrap_or_else(|| obstacle.clone());
        let mut policy = vec![Action::Stop; len];
        improve(&st, &obstacle, &start, &mut policy, eps);
        let max_updates = 4 * len + 16;
        for update in 0..max_updates {
            let g = solve_policy(&st, &obstacle, &policy).ok_or(EnvelopeError::SingularPolicy { n })?;
            if !improve(&st, &obstacle, &g, &mut policy, eps) {
                return Ok(Self {
                    degree: q,
                    half_nodes: n,
                    values: g,
                    obstacle,
                    policy_updates: update,
                });
            }
        }
        Err(EnvelopeError::PolicyIterationStalled { n, updates: max_updates })
    }

    /// Finest resolution the policy systems stay well conditioned at:
    /// about `ε^(-1/2) / 4`, i.e. 512 for `f32`.
    pub fn max_half_nodes() -> usize {
        let cap = (T::one() / T::epsilon()).sqrt().to_f64_lossy() / 4.0;
        let mut n = COARSEST;
        while ((2 * n) as f64) <= cap {
            n *= 2;
        }
        n
    }

    pub fn half_nodes(&self) -> usize {
        self.half_nodes
    }

    pub fn degree(&self) -> T {
        self.degree
    }

    /// Profile values at `σ_i = -1 + i/N`.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn obstacle(&self) -> &[T] {
        &self.obstacle
    }

    pub fn sigma(&self, i: usize) -> T {
        sigma(i, self.half_nodes)
    }

    /// Piecewise-linear profile at `τ ∈ [-1, 1]`.
    pub fn profile_at(&self, tau: T) -> T {
        let n = self.half_nodes;
        let u = ((tau + T::one()) * T::from_usize_lossy(n)).max(T::zero());
        let k = u.floor().to_usize().unwrap_or(0).min(2 * n - 1);
        let w = u - T::from_usize_lossy(k);
        self.values[k] * (T::one() - w) + self.values[k + 1] * w
    }

    /// Envelope value at moduli `(x, y)` with `x, y ≥ 0`.
    pub fn eval(&self, x: T, y: T) -> T {
        let s = x + y;
        if s == T::zero() {
            return T::zero();
        }
        s.powf(self.degree) * self.profile_at((x - y) / s)
    }

    /// Largest violation of the discrete fixed-point equation.
    pub fn residual(&self) -> T {
        let st = stencils(self.degree, self.half_nodes);
        let g = &self.values;
        (0..g.len()).fold(T::zero(), |m, i| {
            let best = candidates(&st, &self.obstacle, g, i)
                .into_iter()
                .flatten()
                .fold(T::neg_infinity(), T::max);
            m.max((g[i] - best).abs())
        })
    }
}

fn sigma<T: Scalar>(i: usize, n: usize) -> T {
    T::from_usize_lossy(i) / T::from_usize_lossy(n) - T::one()
}

/// `1/σ_i` computed as `N / (i - N)`.
fn recip<T: Scalar>(i: usize, n: usize) -> T {
    let nn = T::from_usize_lossy(n);
    if i >= n {
        nn / T::from_usize_lossy(i - n)
    } else {
        -nn / T::from_usize_lossy(n - i)
    }
}

fn stencils<T: Scalar>(q: T, n: usize) -> Stencils<T> {
    let len = 2 * n + 1;
    let half = T::lit(0.5);
    let mut lower = [vec![T::zero(); len], vec![T::zero(); len]];
    let mut upper = [vec![T::zero(); len], vec![T::zero(); len]];
    let mut active = [vec![true; len], vec![false; len]];
    let pw = |t: T| t.abs().powf(q);
    for i in 1..len - 1 {
        lower[0][i] = half;
        upper[0][i] = half;
    }
    // τ = -1: left neighbour is the reflection of σ_1.
    {
        let (tl, t, tr) = (recip::<T>(1, n), -T::one(), sigma::<T>(1, n));
        let wl = (tr - t) / (tr - tl);
        upper[0][0] = wl * pw(tl) + (T::one() - wl);
    }
    {
        let last = len - 1;
        let (tl, t, tr) = (sigma::<T>(last - 1, n), T::one(), recip::<T>(last - 1, n));
        let wl = (tr - t) / (tr - tl);
        lower[0][last] = wl + (T::one() - wl) * pw(tr);
    }
    for i in 1..len - 1 {
        if i.abs_diff(n) <= 1 {
            continue;
        }
        let (ta, t, tb) = (recip::<T>(i - 1, n), recip::<T>(i, n), recip::<T>(i + 1, n));
        let wa = (tb - t) / (tb - ta);
        let scale = pw(t);
        lower[1][i] = wa * pw(ta) / scale;
        upper[1][i] = (T::one() - wa) * pw(tb) / scale;
        active[1][i] = true;
    }
    Stencils { lower, upper, active }
}

fn candidates<T: Scalar>(st: &Stencils<T>, g0: &[T], g: &[T], i: usize) -> [Option<T>; 3] {
    let len = g.len();
    let left = if i > 0 { g[i - 1] } else { T::zero() };
    let right = if i + 1 < len { g[i + 1] } else { T::zero() };
    let stencil = |a: usize| {
        st.active[a][i].then(|| st.lower[a][i] * left + st.upper[a][i] * right)
    };
    [Some(g0[i]), stencil(0), stencil(1)]
}

/// Greedy policy improvement; returns whether any action changed.
fn improve<T: Scalar>(
    st: &Stencils<T>,
    g0: &[T],
    g: &[T],
    policy: &mut [Action],
    eps: T,
) -> bool {
    const ACTIONS: [Action; 3] = [Action::Stop, Action::Inner, Action::Outer];
    let mut changed = false;
    for (i, slot) in policy.iter_mut().enumerate().take(g.len()) {
        let c = candidates(st, g0, g, i);
        let current = ACTIONS.iter().position(|&a| a == *slot).unwrap();
        let cur = c[current].unwrap_or(T::neg_infinity());
        let (best_k, best) = c
            .iter()
            .enumerate()
            .filter_map(|(k, v)| v.map(|v| (k, v)))
            .fold((current, cur), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
        if best > cur + eps * best.abs().max(T::one()) {
            *slot = ACTIONS[best_k];
            changed = true;
        }
    }
    changed
}

fn solve_policy<T: Scalar>(st: &Stencils<T>, g0: &[T], policy: &[Action]) -> Option<Vec<T>> {
    let len = g0.len();
    let mut sub = vec![T::zero(); len];
    let diag = vec![T::one(); len];
    let mut sup = vec![T::zero(); len];
    let mut rhs = vec![T::zero(); len];
    for i in 0..len {
        match policy[i] {
            Action::Stop => rhs[i] = g0[i],
            Action::Inner | Action::Outer => {
                let a = (policy[i] == Action::Outer) as usize;
                sub[i] = -st.lower[a][i];
                sup[i] = -st.upper[a][i];
            }
        }
    }
    solve_tridiagonal(sub, diag, sup, rhs)
}

/// Gaussian elimination with partial pivoting on a tridiagonal system.
/// `sub[0]` and `sup[n-1]` are ignored.
pub(crate) fn solve_tridiagonal<T: Scalar>(
    mut sub: Vec<T>,
    mut diag: Vec<T>,
    mut sup: Vec<T>,
    mut rhs: Vec<T>,
) -> Option<Vec<T>> {
    let n = diag.len();
    // second superdiagonal created by row swaps
    let mut sup2 = vec![T::zero(); n];
    for k in 0..n.saturating_sub(1) {
        if sub[k + 1].abs() > diag[k].abs() {
            let (a0, a1, a2) = (sub[k + 1], diag[k + 1], sup[k + 1]);
            let (b0, b1) = (diag[k], sup[k]);
            diag[k] = a0;
            sup[k] = a1;
            sup2[k] = a2;
            sub[k + 1] = b0;
            diag[k + 1] = b1;
            sup[k + 1] = T::zero();
            rhs.swap(k, k + 1);
        }
        if diag[k] == T::zero() {
            return None;
        }
        let m = sub[k + 1] / diag[k];
        diag[k + 1] -= m * sup[k];
        if k + 2 < n {
            sup[k + 1] -= m * sup2[k];
        }
        let r = rhs[k];
        rhs[k + 1] -= m * r;
    }
    if diag[n - 1] == T::zero() {
        return None;
    }
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k];
        if k + 1 < n {
            acc -= sup[k] * x[k + 1];
        }
        if k + 2 < n {
            acc -= sup2[k] * x[k + 2];
        }
        x[k] = acc / diag[k];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Linear interpolation from `2N + 1` to `4N + 1` nodes.
fn refine<T: Scalar>(coarse: &[T]) -> Vec<T> {
    let mut fine = Vec::with_capacity(2 * coarse.len() - 1);
    for w in coarse.windows(2) {
        fine.push(w[0]);
        fine.push((w[0] + w[1]) * T::lit(0.5));
    }
    fine.push(*coarse.last().unwrap());
    fine
}
