//! Exhaustive oracle for disjoint-path last passage on small grids.
//!
//! Every nonempty monotone path is enumerated as a bitmask of sites. The
//! unions of `k` pairwise disjoint paths are then built layer by layer; they
//! depend only on the grid shape, so one oracle serves many weightings.

use super::grid::{Weight, WeightGrid};
use crate::error::{invalid, Error, Result};

/// Largest number of sites the oracle enumerates.
pub const MAX_ORACLE_SITES: usize = 16;

#[derive(Debug, Clone)]
pub struct DisjointPathOracle {
    m: usize,
    n: usize,
    /// `unions[k-1]`: every site set that is a union of `k` disjoint paths.
    unions: Vec<Vec<u32>>,
}

impl DisjointPathOracle {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return invalid("grid must be nonempty");
        }
        if m * n > MAX_ORACLE_SITES {
            return Err(Error::Capacity(format!(
                "{m}x{n} grid exceeds {MAX_ORACLE_SITES} enumerable sites"
            )));
        }
        let bit = |i: usize, j: usize| 1u32 << (i * n + j);
        let mut paths = Vec::new();
        for i0 in 0..m {
            for j0 in 0..n {
                let mut stack = vec![(i0, j0, bit(i0, j0))];
                while let Some((i, j, mask)) = stack.pop() {
                    paths.push(mask);
                    if i + 1 < m {
                        stack.push((i + 1, j, mask | bit(i + 1, j)));
                    }
                    if j + 1 < n {
                        stack.push((i, j + 1, mask | bit(i, j + 1)));
                    }
                }
            }
        }
        paths.sort_unstable();
        paths.dedup();

        let size = 1usize << (m * n);
        let mut unions = vec![paths.clone()];
        for _ in 1..n {
            let mut seen = vec![false; size];
            let mut layer = Vec::new();
            for &u in unions.last().expect("nonempty") {
                for &p in &paths {
                    if u & p == 0 {
                        let v = (u | p) as usize;
                        if !seen[v] {
                            seen[v] = true;
                            layer.push(v as u32);
                        }
                    }
                }
            }
            layer.sort_unstable();
            unions.push(layer);
        }
        Ok(Self { m, n, unions })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// Number of distinct monotone paths on the grid.
    pub fn path_count(&self) -> usize {
        self.unions[0].len()
    }

    /// Maximal weight over families of `k` disjoint paths.
    pub fn max_weight<T: Weight>(&self, g: &WeightGrid<T>, k: usize) -> Result<T> {
        if (g.columns(), g.rows()) != (self.m, self.n) {
            return invalid("grid shape does not match oracle");
        }
        if k == 0 || k > self.n {
            return invalid(format!("k = {k} outside 1..={}", self.n));
        }
        let sites = self.m * self.n;
        let mut sums = vec![T::zero(); 1 << sites];
        for mask in 1usize..sums.len() {
            let low = mask.trailing_zeros() as usize;
            let (i, j) = (low / self.n, low % self.n);
            sums[mask] = sums[mask & (mask - 1)] + g.get(i, j);
        }
        let mut best: Option<T> = None;
        for &u in &self.unions[k - 1] {
            let v = sums[u as usize];
            best = Some(match best {
                Some(b) if b >= v => b,
                _ => v,
            });
        }
        best.ok_or_else(|| Error::Inconsistent(format!("no family of {k} disjoint paths")))
    }
}

/// Exhaustive maximum over all families of `k` pairwise vertex-disjoint
/// monotone paths. Builds a fresh [`DisjointPathOracle`]; reuse one directly
/// when scanning many grids of the same shape.
pub fn brute_force_disjoint<T: Weight>(g: &WeightGrid<T>, k: usize) -> Result<T> {
    DisjointPathOracle::new(g.columns(), g.rows())?.max_weight(g, k)
}
