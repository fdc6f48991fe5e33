//! Robinson–Schensted–Knuth row insertion on nonnegative integer matrices.

use std::fmt;

use super::grid::WeightGrid;
use crate::error::{invalid, Result};

/// Weakly decreasing sequence of nonnegative integers; trailing zeros are
/// dropped on construction so equal shapes compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[1] > w[0]) {
            return invalid(format!("{parts:?} is not weakly decreasing"));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// `lambda_i`, zero past the last row.
    pub fn part(&self, i: usize) -> u64 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `lambda_1 + ... + lambda_k`.
    pub fn partial_sum(&self, k: usize) -> u64 {
        self.parts.iter().take(k).sum()
    }

    /// Shifted coordinates `h_i = lambda_i + n - i` for `i = 1..=n`, strictly
    /// decreasing and nonnegative.
    pub fn shifted(&self, n: usize) -> Result<Vec<u64>> {
        if self.rows() > n {
            return invalid(format!("shape with {} rows does not fit in {n}", self.rows()));
        }
        Ok((0..n).map(|i| self.part(i) + (n - 1 - i) as u64).collect())
    }

    /// Inverse of [`Partition::shifted`].
    pub fn from_shifted(h: &[u64]) -> Result<Self> {
        let n = h.len();
        if h.windows(2).any(|w| w[0] <= w[1]) {
            return invalid("shifted coordinates must be strictly decreasing");
        }
        Self::new(h.iter().enumerate().map(|(i, &x)| x - (n - 1 - i) as u64).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Pair of semi-standard tableaux of a common shape. `p` holds row labels
/// (`1..=n`), `q` holds column labels (`1..=m`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableauPair {
    pub p: Vec<Vec<u32>>,
    pub q: Vec<Vec<u32>>,
    pub shape: Partition,
}

impl TableauPair {
    /// Rows weakly increase, columns strictly increase, shapes agree.
    pub fn is_valid(&self) -> bool {
        fn ssyt(t: &[Vec<u32>]) -> bool {
            t.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]))
                && t.windows(2).all(|w| w[1].len() <= w[0].len() && w[1].iter().zip(&w[0]).all(|(lo, up)| up < lo))
        }
        let shape_of = |t: &[Vec<u32>]| t.iter().map(|r| r.len() as u64).collect::<Vec<_>>();
        ssyt(&self.p)
            && ssyt(&self.q)
            && shape_of(&self.p) == self.shape.parts()
            && shape_of(&self.q) == self.shape.parts()
    }
}

/// RSK image of the biword of `a`: the pairs `(i, j)` with multiplicity
/// `a(i, j)`, in lexicographic order, insert `j` into `P` and record `i` in
/// `Q`.
pub fn rsk(a: &WeightGrid<u64>) -> TableauPair {
    let mut p: Vec<Vec<u32>> = Vec::new();
    let mut q: Vec<Vec<u32>> = Vec::new();
    for i in 0..a.columns() {
        for j in 0..a.rows() {
            for _ in 0..a.get(i, j) {
                let row = insert(&mut p, j as u32 + 1);
                if row == q.len() {
                    q.push(Vec::new());
                }
                q[row].push(i as u32 + 1);
            }
        }
    }
    let shape = Partition::new(p.iter().map(|r| r.len() as u64).collect()).expect("RSK shapes are partitions");
    TableauPair { p, q, shape }
}

/// Row-inserts `x`; returns the index of the row that grew.
fn insert(p: &mut Vec<Vec<u32>>, mut x: u32) -> usize {
    for (r, row) in p.iter_mut().enumerate() {
        // first entry strictly greater than x
        let pos = row.partition_point(|&y| y <= x);
        if pos == row.len() {
            row.push(x);
            return r;
        }
        std::mem::swap(&mut row[pos], &mut x);
    }
    p.push(vec![x]);
    p.len() - 1
}

/// Shape of the RSK image, computed by insertion without recording `Q`.
pub fn rsk_shape(a: &WeightGrid<u64>) -> Partition {
    let n = a.rows();
    // P has entries in 1..=n, so each row is a multiset; store counts.
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for i in 0..a.columns() {
        for j in 0..n {
            let mult = a.get(i, j);
            if mult > 0 {
                insert_counts(&mut rows, j, mult, n);
            }
        }
    }
    Partition::new(rows.iter().map(|r| r.iter().sum()).collect()).expect("RSK shapes are partitions")
}

/// Inserts `mult` copies of letter `x` into a tableau whose rows are stored
/// as letter counts. Equal letters bump a block of larger letters row by
/// row.
fn insert_counts(rows: &mut Vec<Vec<u64>>, x: usize, mult: u64, n: usize) {
    // (letter, copies) arriving at the current row
    let mut carry: Vec<(usize, u64)> = vec![(x, mult)];
    let mut r = 0;
    while !carry.is_empty() {
        if r == rows.len() {
            rows.push(vec![0; n]);
        }
        let row = &mut rows[r];
        let mut next: Vec<(usize, u64)> = Vec::new();
        // Insert incoming letters in increasing order; a block of `c` copies
        // of letter `y` bumps the `c` smallest entries greater than `y`.
        carry.sort_unstable();
        for (y, c) in carry {
            let mut need = c;
            let mut bumped: Vec<(usize, u64)> = Vec::new();
            for z in y + 1..n {
                if need == 0 {
                    break;
                }
                let take = row[z].min(need);
                if take > 0 {
                    row[z] -= take;
                    need -= take;
                    bumped.push((z, take));
                }
            }
            row[y] += c;
            next.extend(bumped);
        }
        carry = merge_counts(next);
        r += 1;
    }
}

fn merge_counts(mut v: Vec<(usize, u64)>) -> Vec<(usize, u64)> {
    v.sort_unstable();
    let mut out: Vec<(usize, u64)> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc += c,
            _ => out.push((k, c)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp_rsk::paths::last_passage;
    use std::collections::HashSet;

    fn grid(m: usize, n: usize, v: &[u64]) -> WeightGrid<u64> {
        WeightGrid::from_fn(m, n, |i, j| v[i * n + j]).unwrap()
    }

    #[test]
    fn partition_validation_and_shift() {
        assert!(Partition::new(vec![1, 2]).is_err());
        let p = Partition::new(vec![3, 1, 0, 0]).unwrap();
        assert_eq!(p.parts(), &[3, 1]);
        assert_eq!(p.shifted(3).unwrap(), vec![5, 2, 0]);
        assert_eq!(Partition::from_shifted(&[5, 2, 0]).unwrap(), p);
        assert!(p.shifted(1).is_err());
        assert!(Partition::from_shifted(&[2, 2]).is_err());
        assert_eq!(p.to_string(), "(3,1)");
    }

    #[test]
    fn zero_and_scalar_matrices() {
        let z = grid(2, 2, &[0, 0, 0, 0]);
        assert!(rsk(&z).shape.is_empty());
        assert!(rsk_shape(&z).is_empty());
        let s = grid(1, 1, &[4]);
        let t = rsk(&s);
        assert_eq!(t.shape.parts(), &[4]);
        assert_eq!(t.p, vec![vec![1, 1, 1, 1]]);
        assert_eq!(t.q, vec![vec![1, 1, 1, 1]]);
    }

    #[test]
    fn identity_shape_matches_last_passage() {
        let id = grid(2, 2, &[1, 0, 0, 1]);
        let shape = rsk_shape(&id);
        assert_eq!(shape.partial_sum(2), 2);
        assert_eq!(shape.part(0), last_passage(&id));
    }

    #[test]
    fn injective_on_small_matrices() {
        let mut seen = HashSet::new();
        for code in 0..81u64 {
            let v: Vec<u64> = (0..4).map(|d| (code / 3u64.pow(d)) % 3).collect();
            let t = rsk(&grid(2, 2, &v));
            assert!(t.is_valid());
            assert!(seen.insert((t.p, t.q)), "collision at {v:?}");
        }
        assert_eq!(seen.len(), 81);
    }

    #[test]
    fn count_insertion_agrees_with_plain_insertion() {
        for code in 0..4u64.pow(6) {
            let v: Vec<u64> = (0..6).map(|d| (code / 4u64.pow(d)) % 4).collect();
            for (m, n) in [(2, 3), (3, 2), (6, 1), (1, 6)] {
                let g = grid(m, n, &v);
                assert_eq!(rsk_shape(&g), rsk(&g).shape, "{m}x{n} {v:?}");
            }
        }
    }
}
