//! Exact counting of semi-standard tableaux and of matrices with a given
//! RSK shape.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::rsk::Partition;
use crate::error::{invalid, Error, Result};

/// Number of semi-standard Young tableaux of `shape` with entries in
/// `1..=alphabet`.
///
/// Counted by peeling the cells labelled with the largest letter: they form
/// a horizontal strip, so `Y(lambda, K) = sum Y(mu, K - 1)` over the shapes
/// `mu` interlacing `lambda` (`lambda_{i+1} <= mu_i <= lambda_i`).
pub fn ssyt_count(shape: &Partition, alphabet: usize) -> BigUint {
    let mut memo = HashMap::new();
    count_rec(shape.parts().to_vec(), alphabet, &mut memo)
}

fn count_rec(shape: Vec<u64>, k: usize, memo: &mut HashMap<(Vec<u64>, usize), BigUint>) -> BigUint {
    if shape.is_empty() {
        return BigUint::one();
    }
    if shape.len() > k {
        return BigUint::zero();
    }
    if let Some(v) = memo.get(&(shape.clone(), k)) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    let mut mu = vec![0u64; shape.len()];
    interlacing(&shape, 0, &mut mu, &mut |mu| {
        let mut trimmed = mu.to_vec();
        while trimmed.last() == Some(&0) {
            trimmed.pop();
        }
        total += count_rec(trimmed, k - 1, memo);
    });
    memo.insert((shape, k), total.clone());
    total
}

fn interlacing(lambda: &[u64], i: usize, mu: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    if i == lambda.len() {
        f(mu);
        return;
    }
    let lo = lambda.get(i + 1).copied().unwrap_or(0);
    for v in lo..=lambda[i] {
        mu[i] = v;
        interlacing(lambda, i + 1, mu, f);
    }
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of `m x n` nonnegative integer matrices whose RSK shape is `shape`:
///
/// `L = c^{-1} prod_{i<j} (h_i - h_j)^2 prod_i (h_i + M - N)! / h_i!`,
/// `c = prod_{j=0}^{N-1} j! (M - N + j)!`, `h_i = lambda_i + N - i`,
/// evaluated with `M >= N` (the count is symmetric in `m` and `n`).
///
/// Shapes with more rows than `min(m, n)` have count zero.
pub fn l_count(shape: &Partition, m: usize, n: usize) -> Result<BigUint> {
    if m == 0 || n == 0 {
        return invalid("l_count needs m, n >= 1");
    }
    let (big, small) = if m >= n { (m, n) } else { (n, m) };
    if shape.rows() > small {
        return Ok(BigUint::zero());
    }
    let h = shape.shifted(small)?;
    let gap = (big - small) as u64;
    let mut numerator = BigUint::one();
    for i in 0..small {
        for j in i + 1..small {
            let d = BigUint::from(h[i] - h[j]);
            numerator *= &d * &d;
        }
    }
    for &hi in &h {
        // (h + gap)! / h!
        numerator *= (hi + 1..=hi + gap).fold(BigUint::one(), |acc, k| acc * k);
    }
    let mut denominator = BigUint::one();
    for j in 0..small as u64 {
        denominator *= factorial(j) * factorial(gap + j);
    }
    let (q, r) = numerator.div_rem(&denominator);
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!("L({shape}, {m}, {n}) is not an integer")));
    }
    Ok(q)
}

/// Natural log of a positive big integer.
pub(crate) fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().expect("64-bit").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log P(lambda(RSK(X)) = shape)` for an `m x n` matrix `X` of i.i.d.
/// geometrics with `P(x = s) = (1 - q) q^s`:
/// `m n log(1 - q) + |shape| log q + log L(shape, m, n)`.
///
/// Returns `f64::NEG_INFINITY` for shapes that cannot occur.
pub fn shape_log_pmf(shape: &Partition, m: usize, n: usize, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return invalid(format!("q={q} outside (0,1)"));
    }
    let count = l_count(shape, m, n)?;
    if count.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok((m * n) as f64 * (-q).ln_1p() + shape.size() as f64 * q.ln() + big_ln(&count))
}

/// Every partition of size at most `max_size` with at most `max_rows` rows,
/// ordered by size then reverse-lexicographically.
pub fn partitions_up_to(max_size: u64, max_rows: usize) -> Vec<Partition> {
    fn rec(rest: u64, cap: u64, rows_left: usize, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::new(cur.clone()).expect("decreasing by construction"));
            return;
        }
        if rows_left == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, rows_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..=max_size {
        rec(s, s, max_rows, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u64]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// Backtracking filler, row-major, used as an independent count.
    fn fill_count(shape: &[u64], k: u32) -> u64 {
        let cells: Vec<(usize, usize)> =
            shape.iter().enumerate().flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c))).collect();
        let mut t: Vec<Vec<u32>> = shape.iter().map(|&l| vec![0; l as usize]).collect();
        fn go(idx: usize, cells: &[(usize, usize)], t: &mut Vec<Vec<u32>>, k: u32) -> u64 {
            if idx == cells.len() {
                return 1;
            }
            let (r, c) = cells[idx];
            let lo_row = if c > 0 { t[r][c - 1] } else { 1 };
            let lo_col = if r > 0 { t[r - 1][c] + 1 } else { 1 };
            let mut total = 0;
            for v in lo_row.max(lo_col).max(1)..=k {
                t[r][c] = v;
                total += go(idx + 1, cells, t, k);
            }
            total
        }
        go(0, &cells, &mut t, k)
    }

    #[test]
    fn small_counts() {
        assert_eq!(ssyt_count(&Partition::empty(), 3), BigUint::one());
        assert_eq!(ssyt_count(&part(&[1]), 3), BigUint::from(3u32));
        assert_eq!(ssyt_count(&part(&[2, 1]), 2), BigUint::from(2u32));
        assert_eq!(ssyt_count(&part(&[1, 1, 1]), 2), BigUint::zero());
    }

    #[test]
    fn strip_recursion_matches_backtracking() {
        for shape in partitions_up_to(7, 4) {
            for k in 1..=4u32 {
                let a = ssyt_count(&shape, k as usize);
                let b = fill_count(shape.parts(), k);
                assert_eq!(a, BigUint::from(b), "{shape} k={k}");
            }
        }
    }

    #[test]
    fn l_count_examples() {
        assert_eq!(l_count(&Partition::empty(), 3, 2).unwrap(), BigUint::one());
        assert_eq!(l_count(&part(&[1]), 2, 2).unwrap(), BigUint::from(4u32));
        assert_eq!(l_count(&part(&[1, 1, 1]), 4, 2).unwrap(), BigUint::zero());
        assert!(l_count(&part(&[1]), 0, 2).is_err());
    }

    #[test]
    fn l_count_factorises() {
        for shape in partitions_up_to(6, 4) {
            for m in 1..=4 {
                for n in 1..=4 {
                    let expect = ssyt_count(&shape, m) * ssyt_count(&shape, n);
                    assert_eq!(l_count(&shape, m, n).unwrap(), expect, "{shape} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn partitions_enumeration() {
        let p = partitions_up_to(4, 2);
        // 1 + 1 + 2 + 2 + 3 partitions of 0..=4 with at most two rows
        assert_eq!(p.len(), 9);
        assert_eq!(partitions_up_to(5, 5).len(), 1 + 1 + 2 + 3 + 5 + 7);
    }

    #[test]
    fn pmf_of_empty_shape() {
        let q = 0.3;
        let v = shape_log_pmf(&Partition::empty(), 2, 3, q).unwrap();
        assert!((v - 6.0 * (1.0 - q).ln()).abs() < 1e-14);
        assert!(shape_log_pmf(&Partition::empty(), 2, 3, 1.0).is_err());
    }

    #[test]
    fn pmf_mass_concentrates_on_small_shapes() {
        let total: f64 = partitions_up_to(8, 2).iter().map(|s| shape_log_pmf(s, 2, 2, 0.3).unwrap().exp()).sum();
        assert!(total >= 0.995 && total <= 1.0 + 1e-12, "{total}");
        // all shapes up to a large size: essentially one
        let total: f64 = partitions_up_to(60, 2).iter().map(|s| shape_log_pmf(s, 2, 2, 0.3).unwrap().exp()).sum();
        assert!((total - 1.0).abs() < 1e-12, "{total}");
    }

    #[test]
    fn big_ln_accuracy() {
        let x = factorial(400);
        let expect = statrs::function::gamma::ln_gamma(401.0);
        assert!((big_ln(&x) - expect).abs() < 1e-9 * expect);
        assert!((big_ln(&BigUint::from(10u32)) - 10f64.ln()).abs() < 1e-15);
    }
}
