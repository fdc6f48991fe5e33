use std::fmt::Debug;
use std::iter::Sum;
use std::ops::Add;

use num_traits::Zero;

use crate::error::{invalid, Result};

/// Path weights: integer or real, ordered, closed under addition.
pub trait Weight: Copy + PartialOrd + Add<Output = Self> + Zero + Sum + Debug + Send + Sync {}

impl<T> Weight for T where T: Copy + PartialOrd + Add<Output = T> + Zero + Sum + Debug + Send + Sync {}

/// `m x n` array of nonnegative weights, column `i` in `0..m`, row `j` in
/// `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightGrid<T> {
    m: usize,
    n: usize,
    w: Vec<T>,
}

impl<T: Weight> WeightGrid<T> {
    /// Builds the grid by calling `f(i, j)` column by column.
    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        if m == 0 || n == 0 {
            return invalid("weight grid must be nonempty");
        }
        let mut w = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                w.push(f(i, j));
            }
        }
        Self::check(&w)?;
        Ok(Self { m, n, w })
    }

    /// `rows[j][i]` is the weight at column `i` of row `j`; row 0 is the
    /// bottom row.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return invalid("ragged weight rows");
        }
        Self::from_fn(m, n, |i, j| rows[j][i])
    }

    fn check(w: &[T]) -> Result<()> {
        // `>=` also rejects NaN.
        if w.iter().any(|x| !(*x >= T::zero())) {
            return invalid("weights must be nonnegative");
        }
        Ok(())
    }

    pub fn columns(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.w[i * self.n + j]
    }

    /// Column-major values.
    pub fn values(&self) -> &[T] {
        &self.w
    }

    pub fn total(&self) -> T {
        self.w.iter().copied().sum()
    }

    /// Swaps the roles of columns and rows.
    pub fn transpose(&self) -> Self {
        let mut w = Vec::with_capacity(self.w.len());
        for j in 0..self.n {
            for i in 0..self.m {
                w.push(self.get(i, j));
            }
        }
        Self { m: self.n, n: self.m, w }
    }

    /// The sub-rectangle of the first `m` columns and `n` rows.
    pub fn corner(&self, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 || m > self.m || n > self.n {
            return invalid("corner outside grid");
        }
        Self::from_fn(m, n, |i, j| self.get(i, j))
    }

    pub fn map<U: Weight>(&self, f: impl Fn(T) -> U) -> Result<WeightGrid<U>> {
        WeightGrid::from_fn(self.m, self.n, |i, j| f(self.get(i, j)))
    }
}

impl WeightGrid<f64> {
    /// Checks that every weight is a nonnegative integer.
    pub fn to_integer_grid(&self) -> Result<WeightGrid<u64>> {
        if self.w.iter().any(|&x| x.fract() != 0.0 || x > u64::MAX as f64) {
            return invalid("integer grid expected");
        }
        self.map(|x| x as u64)
    }
}

impl WeightGrid<u64> {
    pub fn to_real_grid(&self) -> WeightGrid<f64> {
        self.map(|x| x as f64).expect("nonnegative")
    }
}

/// Unrestricted-sign grid of increments: `steps` time columns by `rows`
/// paths. Input of the staircase path problem.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementGrid<T> {
    steps: usize,
    rows: usize,
    w: Vec<T>,
}

impl<T: Weight> IncrementGrid<T> {
    /// `f(t, r)` for time column `t` in `0..steps` and row `r` in `0..rows`.
    pub fn from_fn(steps: usize, rows: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        if steps == 0 || rows == 0 {
            return invalid("increment grid must be nonempty");
        }
        let mut w = Vec::with_capacity(steps * rows);
        for t in 0..steps {
            for r in 0..rows {
                w.push(f(t, r));
            }
        }
        Ok(Self { steps, rows, w })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn get(&self, t: usize, r: usize) -> T {
        self.w[t * self.rows + r]
    }

    pub(crate) fn column(&self, t: usize) -> &[T] {
        &self.w[t * self.rows..(t + 1) * self.rows]
    }
}
