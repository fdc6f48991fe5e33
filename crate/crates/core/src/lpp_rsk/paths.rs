//! Dynamic programs for maximal-weight families of monotone paths.

use std::collections::HashMap;

use super::grid::{IncrementGrid, Weight, WeightGrid};
use crate::error::{invalid, Error, Result};

/// Rows beyond which the free-endpoint DP refuses to build its state space.
const MAX_PROFILE_ROWS: usize = 16;

fn max_of<T: Weight>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

/// Corner-to-corner last-passage value
/// `T(i, j) = w(i, j) + max(T(i-1, j), T(i, j-1))`.
pub fn last_passage<T: Weight>(g: &WeightGrid<T>) -> T {
    let n = g.rows();
    let mut row = vec![T::zero(); n];
    for i in 0..g.columns() {
        let mut below = T::zero();
        for (j, cell) in row.iter_mut().enumerate() {
            let best = if i == 0 {
                below
            } else if j == 0 {
                *cell
            } else {
                max_of(*cell, below)
            };
            *cell = best + g.get(i, j);
            below = *cell;
        }
    }
    row[n - 1]
}

/// Maximal total weight of `k` pairwise vertex-disjoint monotone paths with
/// free endpoints. `k = 1` uses the corner-to-corner program, which is
/// equivalent for nonnegative weights.
pub fn last_passage_disjoint<T: Weight>(g: &WeightGrid<T>, k: usize) -> Result<T> {
    if k == 0 || k > g.rows() {
        return invalid(format!("k = {k} outside 1..={}", g.rows()));
    }
    if k == 1 {
        return Ok(last_passage(g));
    }
    last_passage_disjoint_free(g, k)
}

/// Column-profile DP over `k` vertex-disjoint paths with arbitrary start and
/// end sites.
///
/// A path occupies a contiguous run of rows in each column it visits and
/// enters the next column at the top of that run. The DP state after a
/// column is the set of rows where active paths exit together with the
/// number of paths started so far.
pub fn last_passage_disjoint_free<T: Weight>(g: &WeightGrid<T>, k: usize) -> Result<T> {
    if k == 0 || k > g.rows() {
        return invalid(format!("k = {k} outside 1..={}", g.rows()));
    }
    // Path families are invariant under transposition; keep the short side
    // as the profile.
    let transposed;
    let g = if g.rows() > g.columns() {
        transposed = g.transpose();
        &transposed
    } else {
        g
    };
    let rows = g.rows();
    if rows > MAX_PROFILE_ROWS {
        return Err(Error::Capacity(format!("profile DP limited to {MAX_PROFILE_ROWS} rows")));
    }
    let mut dp: HashMap<(u32, usize), T> = HashMap::new();
    dp.insert((0, 0), T::zero());
    let mut column = vec![T::zero(); rows];
    for i in 0..g.columns() {
        for (j, c) in column.iter_mut().enumerate() {
            *c = g.get(i, j);
        }
        let mut next: HashMap<(u32, usize), T> = HashMap::new();
        for (&(exits, started), &value) in &dp {
            let mut emit = |mask: u32, fresh: usize, gain: T| {
                let key = (mask, started + fresh);
                let v = value + gain;
                next.entry(key).and_modify(|old| *old = max_of(*old, v)).or_insert(v);
            };
            let mut walk = ColumnWalk { weights: &column, exits, budget: k - started, emit: &mut emit };
            walk.free(0, 0, 0, T::zero());
        }
        dp = next;
    }
    dp.into_iter()
        .filter(|&((_, started), _)| started == k)
        .map(|(_, v)| v)
        .reduce(max_of)
        .ok_or_else(|| Error::Inconsistent(format!("no family of {k} disjoint paths")))
}

/// Enumerates the placements of disjoint segments in one column.
struct ColumnWalk<'a, T, F> {
    weights: &'a [T],
    exits: u32,
    budget: usize,
    emit: &'a mut F,
}

impl<T: Weight, F: FnMut(u32, usize, T)> ColumnWalk<'_, T, F> {
    /// Row `r` is not covered by any segment yet.
    fn free(&mut self, r: usize, mask: u32, fresh: usize, gain: T) {
        if r == self.weights.len() {
            (self.emit)(mask, fresh, gain);
            return;
        }
        self.free(r + 1, mask, fresh, gain);
        let w = self.weights[r];
        if self.exits & (1 << r) != 0 {
            self.open(r + 1, mask, fresh, gain + w);
        }
        if fresh < self.budget {
            self.open(r + 1, mask, fresh + 1, gain + w);
        }
    }

    /// A segment covers row `r - 1` and may extend to row `r`.
    fn open(&mut self, r: usize, mask: u32, fresh: usize, gain: T) {
        let closed = mask | (1 << (r - 1));
        if r == self.weights.len() {
            (self.emit)(closed, fresh, gain);
            return;
        }
        self.open(r + 1, mask, fresh, gain + self.weights[r]);
        self.free(r, closed, fresh, gain);
    }
}

/// Maximal total weight of `k` staircase paths on an increment grid.
///
/// A staircase path picks exactly one site per time column and its row is
/// nondecreasing in time; the `k` paths must occupy strictly increasing rows
/// in every column. This is the grid form of the nested-subdivision
/// supremum over `k` interlaced paths, where path `p` is confined to rows
/// `p..=p + rows - k`.
pub fn staircase_last_passage<T: Weight>(g: &IncrementGrid<T>, k: usize) -> Result<T> {
    let rows = g.rows();
    if k == 0 || k > rows {
        return invalid(format!("k = {k} outside 1..={rows}"));
    }
    let states = increasing_tuples(rows, k);
    let index: HashMap<&[usize], usize> = states.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    // lower[s][p]: the state with coordinate p lowered by one, if valid.
    let lower: Vec<Vec<Option<usize>>> = states
        .iter()
        .map(|s| {
            (0..k)
                .map(|p| {
                    let floor = if p == 0 { 0 } else { s[p - 1] + 1 };
                    (s[p] > floor).then(|| {
                        let mut t = s.clone();
                        t[p] -= 1;
                        index[t.as_slice()]
                    })
                })
                .collect()
        })
        .collect();

    let gain = |t: usize, s: &[usize]| -> T { s.iter().map(|&r| g.column(t)[r]).sum() };
    let mut dp: Vec<T> = states.iter().map(|s| gain(0, s)).collect();
    let mut best = dp.clone();
    for t in 1..g.steps() {
        best.copy_from_slice(&dp);
        // States are sorted by coordinate sum, so lowered states come first.
        for p in (0..k).rev() {
            for si in 0..states.len() {
                if let Some(li) = lower[si][p] {
                    best[si] = max_of(best[si], best[li]);
                }
            }
        }
        for (si, s) in states.iter().enumerate() {
            dp[si] = best[si] + gain(t, s);
        }
    }
    Ok(dp.into_iter().reduce(max_of).expect("at least one state"))
}

/// All strictly increasing `k`-tuples from `0..rows`, sorted by sum.
fn increasing_tuples(rows: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, rows: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for r in start..rows {
            cur.push(r);
            rec(r + 1, rows, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, rows, k, &mut Vec::with_capacity(k), &mut out);
    out.sort_by_key(|s| s.iter().sum::<usize>());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: &[Vec<u64>]) -> WeightGrid<u64> {
        WeightGrid::from_rows(rows).unwrap()
    }

    #[test]
    fn single_cell_and_single_row() {
        assert_eq!(last_passage(&grid(&[vec![7]])), 7);
        assert_eq!(last_passage(&grid(&[vec![1, 2, 3, 4]])), 10);
        assert_eq!(last_passage(&grid(&[vec![1], vec![2], vec![3]])), 6);
    }

    #[test]
    fn two_by_two_example() {
        // w(1,1)=1, w(2,1)=2, w(1,2)=5, w(2,2)=1
        let g = grid(&[vec![1, 2], vec![5, 1]]);
        assert_eq!(last_passage(&g), 7);
    }

    #[test]
    fn disjoint_examples() {
        let g = grid(&[vec![1, 2], vec![0, 1]]);
        assert_eq!(last_passage_disjoint(&g, 2).unwrap(), 4);
        assert_eq!(last_passage_disjoint(&g, 1).unwrap(), last_passage(&g));
        assert!(last_passage_disjoint(&g, 0).is_err());
        assert!(last_passage_disjoint(&g, 3).is_err());
    }

    #[test]
    fn free_dp_handles_more_paths_than_short_side() {
        // one column, three rows: three single-cell paths cover everything
        let g = grid(&[vec![4], vec![1], vec![9]]);
        assert_eq!(last_passage_disjoint_free(&g, 3).unwrap(), 14);
        assert_eq!(last_passage_disjoint_free(&g, 1).unwrap(), 14);
    }

    #[test]
    fn k_equals_rows_is_total() {
        let g = grid(&[vec![3, 0, 2], vec![1, 5, 1], vec![2, 2, 8]]);
        assert_eq!(last_passage_disjoint(&g, 3).unwrap(), g.total());
    }

    #[test]
    fn staircase_single_path_prefers_best_slope() {
        // three linear paths with slopes (1, 3, 2) on 4 steps
        let steps = 4;
        let slopes = [1.0, 3.0, 2.0];
        let g = IncrementGrid::from_fn(steps, 3, |_, r| slopes[r] / steps as f64).unwrap();
        assert!((staircase_last_passage(&g, 1).unwrap() - 3.0).abs() < 1e-12);
        assert!((staircase_last_passage(&g, 2).unwrap() - 5.0).abs() < 1e-12);
        assert!((staircase_last_passage(&g, 3).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn staircase_handles_negative_increments() {
        let g = IncrementGrid::from_fn(1, 2, |_, r| if r == 0 { -1.0 } else { -3.0 }).unwrap();
        assert_eq!(staircase_last_passage(&g, 1).unwrap(), -1.0);
        assert_eq!(staircase_last_passage(&g, 2).unwrap(), -4.0);
    }

    #[test]
    fn tuples_sorted_by_sum() {
        let t = increasing_tuples(4, 2);
        assert_eq!(t.len(), 6);
        assert!(t.windows(2).all(|w| w[0].iter().sum::<usize>() <= w[1].iter().sum::<usize>()));
    }
}
