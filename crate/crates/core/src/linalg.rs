//! Complex Hermitian matrices and a dependency-free eigenvalue solver.
//!
//! Eigenvalues are computed in two stages. Householder reflections reduce the
//! matrix to Hermitian tridiagonal form; the off-diagonal phases are then
//! dropped (a diagonal unitary similarity) so the implicit-shift QL kernel
//! only ever sees a real symmetric tridiagonal matrix.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Maximum QL sweeps spent on a single eigenvalue.
pub const MAX_QL_SWEEPS: usize = 60;

/// Dense `n x n` complex matrix equal to its conjugate transpose.
///
/// Entries are stored row-major. Construction always symmetrises the input,
/// so `get(i, j) == get(j, i).conj()` holds bit-for-bit and the diagonal is
/// real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T> {
    n: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![Complex::new(T::zero(), T::zero()); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * n + i] = Complex::new(d, T::zero());
        }
        m
    }

    /// Builds a matrix from its upper triangle (`i <= j`). The imaginary part
    /// of diagonal values is discarded and the lower triangle is mirrored.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            let d = f(i, i);
            m.entries[i * n + i] = Complex::new(d.re, T::zero());
            for j in i + 1..n {
                let z = f(i, j);
                m.entries[i * n + j] = z;
                m.entries[j * n + i] = z.conj();
            }
        }
        m
    }

    /// Validates a full square array. Entries may deviate from exact
    /// conjugate symmetry by `HERMITIAN_TOL * (1 + max |a_ij|)`; the stored
    /// matrix is the Hermitian part of the input.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return invalid("matrix dimension must be positive");
        }
        if rows.iter().any(|r| r.len() != n) {
            return invalid("matrix is not square");
        }
        let scale = rows
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b));
        if !scale.is_finite() {
            return invalid("matrix has non-finite entries");
        }
        let tol = T::lit(T::HERMITIAN_TOL) * (T::one() + scale);
        for i in 0..n {
            for j in i..n {
                let gap = (rows[i][j] - rows[j][i].conj()).norm();
                if gap > tol {
                    return invalid(format!(
                        "entry ({i},{j}) differs from conj of ({j},{i}) by {gap}"
                    ));
                }
            }
        }
        let half = T::lit(0.5);
        Ok(Self::from_upper(n, |i, j| (rows[i][j] + rows[j][i].conj()) * half))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex<T>>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.entries[i * self.n + i].re).sum()
    }

    /// `Tr(H^2) = sum |h_ij|^2` for Hermitian `H`.
    pub fn trace_of_square(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.trace_of_square().sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    /// `H + c I`.
    pub fn shift_diagonal(&self, c: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.entries[i * self.n + i].re = m.entries[i * self.n + i].re + c;
        }
        m
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        if self.n != other.n {
            return invalid(format!("dimension mismatch: {} vs {}", self.n, other.n));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { n: self.n, entries })
    }

    pub fn eigenvalues(&self) -> Result<Spectrum<T>> {
        eigenvalues_sorted(self)
    }
}

/// Real eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    values: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    /// Sorts the given values; NaN is rejected.
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return invalid("spectrum contains NaN");
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> T {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn min(&self) -> T {
        self.values[0]
    }

    pub fn sum_top_k(&self, k: usize) -> Result<T> {
        sum_top_k(self, k)
    }
}

/// `values[n-1] + ... + values[n-k]`.
pub fn sum_top_k<T: Real>(s: &Spectrum<T>, k: usize) -> Result<T> {
    let n = s.len();
    if k == 0 || k > n {
        return invalid(format!("k = {k} outside 1..={n}"));
    }
    Ok(s.values[n - k..].iter().rev().copied().sum())
}

/// All eigenvalues of `h`, ascending.
pub fn eigenvalues_sorted<T: Real>(h: &HermitianMatrix<T>) -> Result<Spectrum<T>> {
    let (mut diag, off) = tridiagonalize(h);
    let mut sub = off;
    sub.push(T::zero());
    tridiagonal_ql(&mut diag, &mut sub)?;
    Spectrum::new(diag)
}

/// Householder reduction to real symmetric tridiagonal form.
///
/// Returns the diagonal and the `n - 1` sub-diagonal magnitudes. The
/// reflector for column `k` is `P = I - tau v v*` with
/// `v = x + e^{i arg x_0} |x| e_1`, applied as
/// `A <- A - v w* - w v*`, `w = tau A v - (tau/2)(v* tau A v) v`.
pub(crate) fn tridiagonalize<T: Real>(h: &HermitianMatrix<T>) -> (Vec<T>, Vec<T>) {
    let n = h.n;
    let mut a = h.entries.clone();
    let zero = Complex::new(T::zero(), T::zero());
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(1) {
        let lo = k + 1;
        let alpha = (lo..n).map(|i| a[i * n + k].norm_sqr()).sum::<T>().sqrt();
        if alpha == T::zero() {
            off.push(T::zero());
            continue;
        }
        let x0 = a[lo * n + k];
        let x0_abs = x0.norm();
        let phase = if x0_abs == T::zero() { Complex::new(T::one(), T::zero()) } else { x0 / x0_abs };
        for i in lo..n {
            v[i] = a[i * n + k];
        }
        v[lo] = v[lo] + phase * alpha;
        let tau = T::lit(2.0) / (T::lit(2.0) * alpha * (alpha + x0_abs));

        for i in lo..n {
            let mut acc = zero;
            for j in lo..n {
                acc = acc + a[i * n + j] * v[j];
            }
            p[i] = acc * tau;
        }
        let vp: T = (lo..n).map(|i| (v[i].conj() * p[i]).re).sum();
        let kk = vp * tau * T::lit(0.5);
        for i in lo..n {
            p[i] = p[i] - v[i] * kk;
        }
        for i in lo..n {
            for j in lo..n {
                a[i * n + j] = a[i * n + j] - v[i] * p[j].conj() - p[i] * v[j].conj();
            }
        }
        off.push(alpha);
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    (diag, off)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix.
///
/// `d` holds the diagonal and `e[i]` couples `d[i]` and `d[i+1]`
/// (`e.len() == d.len()`, last entry ignored). On return `d` holds the
/// eigenvalues in no particular order.
pub(crate) fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence { index: l, iterations: MAX_QL_SWEEPS });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix<f64> {
        let mut r = RngStream::new(seed, n as u64).rng();
        HermitianMatrix::from_upper(n, |i, j| {
            if i == j {
                c(r.standard_normal(), 0.0)
            } else {
                c(r.standard_normal(), r.standard_normal())
            }
        })
    }

    /// Smallest residual `||(H - lambda) v||` reachable by inverse iteration.
    fn inverse_iteration_residual(h: &HermitianMatrix<f64>, lambda: f64) -> f64 {
        let n = h.dim();
        let shift = lambda + 1e-13 * (1.0 + h.frobenius_norm());
        let mut x: Vec<Complex<f64>> = (0..n).map(|i| c(1.0 + i as f64 * 0.37, 0.1 * i as f64)).collect();
        for _ in 0..3 {
            let mut a = h.to_rows();
            for (i, row) in a.iter_mut().enumerate() {
                row[i] -= shift;
            }
            x = solve(a, x);
            let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            x.iter_mut().for_each(|z| *z /= norm);
        }
        (0..n)
            .map(|i| {
                let hv: Complex<f64> = (0..n).map(|j| h.get(i, j) * x[j]).sum();
                (hv - x[i] * lambda).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    fn solve(mut a: Vec<Vec<Complex<f64>>>, mut b: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            if a[col][col].norm() == 0.0 {
                a[col][col] = c(1e-300, 0.0);
            }
            for r in col + 1..n {
                let f = a[r][col] / a[col][col];
                for k in col..n {
                    let t = a[col][k];
                    a[r][k] -= f * t;
                }
                let t = b[col];
                b[r] -= f * t;
            }
        }
        let mut x = vec![c(0.0, 0.0); n];
        for r in (0..n).rev() {
            let mut acc = b[r];
            for k in r + 1..n {
                acc -= a[r][k] * x[k];
            }
            x[r] = acc / a[r][r];
        }
        x
    }

    #[test]
    fn identity_spectrum() {
        let s = HermitianMatrix::<f64>::identity(3).eigenvalues().unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn swap_matrix_spectrum() {
        let h = HermitianMatrix::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap();
        let s = h.eigenvalues().unwrap();
        assert!((s.values()[0] + 1.0).abs() < 1e-14);
        assert!((s.values()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_two_by_two() {
        // characteristic polynomial x^2 - 4x + 3
        let h = HermitianMatrix::from_rows(&[vec![c(2., 0.), c(0., 1.)], vec![c(0., -1.), c(2., 0.)]]).unwrap();
        let s = h.eigenvalues().unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-13);
        assert!((s.values()[1] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = HermitianMatrix::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(2., 0.), c(0., 0.)]]);
        assert!(matches!(err, Err(Error::Invalid(_))));
        let err = HermitianMatrix::from_rows(&[vec![c(0., 1.)]]);
        assert!(matches!(err, Err(Error::Invalid(_))));
        assert!(HermitianMatrix::<f64>::from_rows(&[]).is_err());
    }

    #[test]
    fn sum_top_k_examples() {
        let s = Spectrum::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(sum_top_k(&s, 1).unwrap(), 3.0);
        assert_eq!(sum_top_k(&s, 3).unwrap(), 6.0);
        let s = Spectrum::new(vec![-1.0, 0.0, 5.0]).unwrap();
        assert_eq!(sum_top_k(&s, 2).unwrap(), 5.0);
        assert!(sum_top_k(&s, 0).is_err());
        assert!(sum_top_k(&s, 4).is_err());
    }

    #[test]
    fn diagonal_and_reducible_inputs() {
        let h = HermitianMatrix::from_real_diagonal(&[3.0, -2.0, 0.5, 0.5]);
        assert_eq!(h.eigenvalues().unwrap().values(), &[-2.0, 0.5, 0.5, 3.0]);
        assert_eq!(HermitianMatrix::<f64>::zeros(5).eigenvalues().unwrap().values(), &[0.0; 5]);
    }

    #[test]
    fn trace_preserved_on_random_inputs() {
        for seed in 0..500u64 {
            let n = 1 + (seed % 8) as usize;
            let h = random_hermitian(n, seed);
            let s = h.eigenvalues().unwrap();
            let sum: f64 = s.values().iter().sum();
            let tr = h.trace();
            assert!((sum - tr).abs() <= 1e-9 * (1.0 + tr.abs()), "seed {seed}: {sum} vs {tr}");
        }
    }

    #[test]
    fn residuals_small() {
        for seed in 0..60u64 {
            let n = 1 + (seed % 12) as usize;
            let h = random_hermitian(n, 1000 + seed);
            let tol = 1e-10 * (1.0 + h.frobenius_norm());
            for &l in h.eigenvalues().unwrap().values() {
                let res = inverse_iteration_residual(&h, l);
                assert!(res <= tol, "n={n} lambda={l} residual {res}");
            }
        }
    }

    #[test]
    fn two_by_two_against_quadratic_roots() {
        let mut r = RngStream::new(99, 0).rng();
        for _ in 0..2000 {
            let a = r.standard_normal() * 3.0;
            let d = r.standard_normal() * 3.0;
            let b = c(r.standard_normal(), r.standard_normal());
            let h = HermitianMatrix::from_upper(2, |i, j| match (i, j) {
                (0, 0) => c(a, 0.0),
                (1, 1) => c(d, 0.0),
                _ => b,
            });
            let mean = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            let s = h.eigenvalues().unwrap();
            assert!((s.values()[0] - (mean - rad)).abs() < 1e-10);
            assert!((s.values()[1] - (mean + rad)).abs() < 1e-10);
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let h = HermitianMatrix::<f32>::from_upper(2, |i, j| {
            if i == j {
                Complex::new(2.0f32, 0.0)
            } else {
                Complex::new(0.0f32, 1.0)
            }
        });
        let s = h.eigenvalues().unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-5);
        assert!((s.values()[1] - 3.0).abs() < 1e-5);
    }

    #[test]
    fn large_matrix_converges() {
        let h = random_hermitian(120, 5);
        let s = h.eigenvalues().unwrap();
        let sum: f64 = s.values().iter().sum();
        assert!((sum - h.trace()).abs() < 1e-8 * (1.0 + h.trace().abs()));
    }

    proptest! {
        #[test]
        fn spectra_are_one_lipschitz(seed in 0u64..10_000, n in 1usize..=6) {
            let a = random_hermitian(n, seed);
            let b = random_hermitian(n, seed + 77_777).scale(0.3).add(&a).unwrap();
            let la = a.eigenvalues().unwrap();
            let lb = b.eigenvalues().unwrap();
            let dist = a.sub(&b).unwrap().frobenius_norm();
            for (x, y) in la.values().iter().zip(lb.values()) {
                prop_assert!((x - y).abs() <= dist + 1e-9);
            }
        }

        #[test]
        fn spectrum_is_sorted(seed in 0u64..10_000, n in 1usize..=8) {
            let s = random_hermitian(n, seed).eigenvalues().unwrap();
            prop_assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
