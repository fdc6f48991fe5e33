//! Discretised Brownian bundles and functionals of them: the multi-path
//! percolation suprema `Omega_k` and the `⊗`/`⊙` path transformation `Gamma`.
//!
//! Paths live on the uniform grid `t_j = j / steps` of `[0, 1]` and every
//! supremum or infimum over time is taken over grid points.

use crate::error::{invalid, Error, Result};
use crate::lpp_rsk::{staircase_last_passage, IncrementGrid};
use crate::rng::StreamRng;
use crate::scalar::Real;

/// Largest number of subdivision families [`omega_k_exhaustive`] will visit.
pub const MAX_EXHAUSTIVE_FAMILIES: f64 = 5e7;

/// `n_paths` real paths sampled at `steps + 1` grid points, each starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePathBundle<T> {
    n_paths: usize,
    steps: usize,
    /// Path-major: path `i` occupies `values[i * (steps + 1)..(i + 1) * (steps + 1)]`.
    values: Vec<T>,
}

impl<T: Real> DiscretePathBundle<T> {
    /// `f(i, j)` is the value of path `i` at grid index `j`.
    pub fn from_fn(n_paths: usize, steps: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        if n_paths == 0 || steps == 0 {
            return invalid("bundle needs n_paths >= 1 and steps >= 1");
        }
        let mut values = Vec::with_capacity(n_paths * (steps + 1));
        for i in 0..n_paths {
            for j in 0..=steps {
                values.push(f(i, j));
            }
        }
        Self::checked(n_paths, steps, values)
    }

    pub fn from_paths(paths: &[Vec<T>]) -> Result<Self> {
        let len = paths.first().map_or(0, Vec::len);
        if len < 2 || paths.iter().any(|p| p.len() != len) {
            return invalid("paths must share a length of at least two points");
        }
        Self::checked(paths.len(), len - 1, paths.concat())
    }

    fn checked(n_paths: usize, steps: usize, values: Vec<T>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("path values must be finite");
        }
        let b = Self { n_paths, steps, values };
        if (0..n_paths).any(|i| b.path(i)[0] != T::zero()) {
            return invalid("every path must start at 0");
        }
        Ok(b)
    }

    /// Bundle of linear paths `c_i t`.
    pub fn linear(slopes: &[T], steps: usize) -> Result<Self> {
        let s = T::lit(steps as f64);
        Self::from_fn(slopes.len(), steps, |i, j| slopes[i] * T::lit(j as f64) / s)
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn path(&self, i: usize) -> &[T] {
        let w = self.steps + 1;
        &self.values[i * w..(i + 1) * w]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks(self.steps + 1)
    }

    /// Values of every path at the final grid point.
    pub fn terminal(&self) -> Vec<T> {
        self.paths().map(|p| p[self.steps]).collect()
    }

    /// Same paths in the opposite order.
    pub fn reversed(&self) -> Self {
        let values = self.values.chunks(self.steps + 1).rev().flatten().copied().collect();
        Self { values, ..*self }
    }

    pub fn scaled(&self, c: T) -> Self {
        Self { values: self.values.iter().map(|&v| v * c).collect(), ..*self }
    }

    /// Per-step increments `B_r(t_{j+1}) - B_r(t_j)`.
    pub fn increments(&self) -> IncrementGrid<T> {
        IncrementGrid::from_fn(self.steps, self.n_paths, |t, r| {
            let p = self.path(r);
            p[t + 1] - p[t]
        })
        .expect("bundle is nonempty")
    }
}

/// `n_paths` independent standard Brownian motions on `[0, 1]` sampled at
/// `steps + 1` points. Draws are taken path by path.
pub fn sample_bm_bundle(n_paths: usize, steps: usize, rng: &mut StreamRng) -> Result<DiscretePathBundle<f64>> {
    if n_paths == 0 || steps == 0 {
        return invalid("bundle needs n_paths >= 1 and steps >= 1");
    }
    let sd = (1.0 / steps as f64).sqrt();
    let mut values = Vec::with_capacity(n_paths * (steps + 1));
    for _ in 0..n_paths {
        let mut x = 0.0;
        values.push(x);
        for _ in 0..steps {
            x += sd * rng.standard_normal();
            values.push(x);
        }
    }
    Ok(DiscretePathBundle { n_paths, steps, values })
}

/// `sup_{0 = t_0 <= ... <= t_N = 1} sum_i (B_i(t_i) - B_i(t_{i-1}))` over
/// grid subdivisions.
///
/// `F(r, j)` is the best value using paths `1..=r` up to grid index `j`:
/// either path `r` is left immediately (`F(r-1, j)`) or it carries the last
/// step (`F(r, j-1) + increment`).
pub fn omega_1<T: Real>(b: &DiscretePathBundle<T>) -> T {
    // F(0, 0) = 0; no time can elapse before the first path is entered
    let mut f = vec![T::neg_infinity(); b.steps + 1];
    f[0] = T::zero();
    for p in b.paths() {
        // f holds F(r-1, .) on entry
        for j in 1..=b.steps {
            let carry = f[j - 1] + (p[j] - p[j - 1]);
            if carry > f[j] {
                f[j] = carry;
            }
        }
    }
    f[b.steps]
}

/// Supremum over `k` nested subdivision families: path `p` walks through
/// rows `p..=p + N - k`, and at every time the `k` walkers occupy distinct
/// rows in increasing order. Solved as a staircase last-passage problem on
/// the increment grid.
pub fn omega_k<T: Real>(b: &DiscretePathBundle<T>, k: usize) -> Result<T> {
    if k == 0 || k > b.n_paths {
        return invalid(format!("k = {k} outside 1..={}", b.n_paths));
    }
    staircase_last_passage(&b.increments(), k)
}

/// Direct enumeration of the nested subdivisions `s_i^p` (grid indices),
/// with `s_i^{p+1} <= s_i^p <= s_{i+1}^p`, `s_i^p = 0` for `i <= 0` and
/// `s_i^p = steps` for `i >= N - k + 1`, maximising
/// `sum_j sum_p B_j(s_{j-p+1}^p) - B_j(s_{j-p}^p)`.
pub fn omega_k_exhaustive<T: Real>(b: &DiscretePathBundle<T>, k: usize) -> Result<T> {
    let n = b.n_paths;
    if k == 0 || k > n {
        return invalid(format!("k = {k} outside 1..={n}"));
    }
    let free = n - k;
    let families = ((b.steps + 1) as f64).powi((k * free) as i32);
    if families > MAX_EXHAUSTIVE_FAMILIES {
        return Err(Error::Capacity(format!("{families:.3e} subdivision families")));
    }
    // s[p][i] for i in 0..=free+1 holds s_i^{p+1}; the ends are pinned.
    let mut s = vec![vec![0usize; free + 2]; k];
    for row in &mut s {
        row[free + 1] = b.steps;
    }
    let mut best: Option<T> = None;
    enumerate(b, &mut s, 0, 1, free, &mut best);
    Ok(best.expect("at least one family"))
}

fn enumerate<T: Real>(
    b: &DiscretePathBundle<T>,
    s: &mut Vec<Vec<usize>>,
    p: usize,
    i: usize,
    free: usize,
    best: &mut Option<T>,
) {
    let k = s.len();
    if p == k {
        let v = subdivision_value(b, s, free);
        if best.map_or(true, |b| v > b) {
            *best = Some(v);
        }
        return;
    }
    if i > free {
        enumerate(b, s, p + 1, 1, free, best);
        return;
    }
    let lo = s[p][i - 1];
    let hi = if p == 0 { b.steps } else { s[p - 1][i] };
    for v in lo..=hi {
        s[p][i] = v;
        enumerate(b, s, p, i + 1, free, best);
    }
}

fn subdivision_value<T: Real>(b: &DiscretePathBundle<T>, s: &[Vec<usize>], free: usize) -> T {
    let at = |p: usize, i: isize| -> usize {
        if i <= 0 {
            0
        } else if i as usize > free {
            b.steps
        } else {
            s[p][i as usize]
        }
    };
    let mut total = T::zero();
    for j in 1..=b.n_paths as isize {
        let path = b.path(j as usize - 1);
        for p in 1..=s.len() as isize {
            total = total + path[at(p as usize - 1, j - p + 1)] - path[at(p as usize - 1, j - p)];
        }
    }
    total
}

fn same_grid<T>(f: &[T], g: &[T]) -> Result<()> {
    if f.len() != g.len() || f.is_empty() {
        return invalid(format!("paths on different grids ({} vs {} points)", f.len(), g.len()));
    }
    Ok(())
}

/// `(f ⊗ g)(t) = min_{s <= t} (f(s) + g(t) - g(s))`.
pub fn otimes<T: Real>(f: &[T], g: &[T]) -> Result<Vec<T>> {
    same_grid(f, g)?;
    let mut low = T::infinity();
    Ok(f.iter()
        .zip(g)
        .map(|(&a, &b)| {
            low = low.min(a - b);
            b + low
        })
        .collect())
}

/// `(f ⊙ g)(t) = max_{s <= t} (f(s) + g(t) - g(s))`.
pub fn odot<T: Real>(f: &[T], g: &[T]) -> Result<Vec<T>> {
    same_grid(f, g)?;
    let mut high = T::neg_infinity();
    Ok(f.iter()
        .zip(g)
        .map(|(&a, &b)| {
            high = high.max(a - b);
            b + high
        })
        .collect())
}

/// The recursive transformation
/// `Gamma(f) = (f_1 ⊗ ... ⊗ f_N, Gamma(f_2 ⊙ f_1, f_3 ⊙ (f_1 ⊗ f_2), ..., f_N ⊙ (f_1 ⊗ ... ⊗ f_{N-1})))`
/// with `Gamma(f, g) = (f ⊗ g, g ⊙ f)`. Chains of `⊗` associate left to right.
pub fn gamma<T: Real>(b: &DiscretePathBundle<T>) -> Result<DiscretePathBundle<T>> {
    if b.n_paths < 2 {
        return invalid("gamma needs at least two paths");
    }
    let mut out: Vec<Vec<T>> = Vec::with_capacity(b.n_paths);
    let mut current: Vec<Vec<T>> = b.paths().map(<[T]>::to_vec).collect();
    while current.len() > 1 {
        let mut acc = current[0].clone();
        let mut next = Vec::with_capacity(current.len() - 1);
        for f in &current[1..] {
            next.push(odot(f, &acc)?);
            acc = otimes(&acc, f)?;
        }
        out.push(acc);
        current = next;
    }
    out.push(current.pop().expect("one path left"));
    DiscretePathBundle::from_paths(&out)
}

/// Sum of the last `k` components of [`gamma`] at the final time.
pub fn gamma_top_sum<T: Real>(b: &DiscretePathBundle<T>, k: usize) -> Result<T> {
    if k == 0 || k > b.n_paths {
        return invalid(format!("k = {k} outside 1..={}", b.n_paths));
    }
    let terminal = gamma(b)?.terminal();
    Ok(terminal[b.n_paths - k..].iter().copied().sum())
}
