//! Seeded samplers for GUE, LUE and their Brownian extensions, plus the
//! associated densities in log space.
//!
//! Conventions: a complex standard Gaussian has `E|z|^2 = 1` (real and
//! imaginary parts of variance 1/2), so `GUE(n)` has density
//! `exp(-Tr H^2 / 2) / (2^{n/2} pi^{n^2/2})`. `LUE(n, m)` is `A A*` with `A`
//! an `n x m` array of such Gaussians.
//!
//! Draw order is part of the determinism contract: matrices are filled row by
//! row over the upper triangle, rectangular factors row by row, grids column
//! by column.

use num_complex::Complex;
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};
use crate::linalg::HermitianMatrix;
use crate::lpp_rsk::WeightGrid;
use crate::rng::StreamRng;

type C64 = Complex<f64>;

/// Ascending time points starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.first() != Some(&0.0) {
            return invalid("time grid must start at 0");
        }
        if points.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return invalid("time grid must be strictly ascending and finite");
        }
        Ok(Self { points })
    }

    /// `steps + 1` equally spaced points on `[0, t_end]`.
    pub fn uniform(steps: usize, t_end: f64) -> Result<Self> {
        if steps == 0 || !(t_end > 0.0) {
            return invalid("uniform grid needs steps >= 1 and t_end > 0");
        }
        Self::new((0..=steps).map(|j| t_end * j as f64 / steps as f64).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the grid point equal to `t`, if any.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.points.iter().position(|&p| p == t)
    }
}

/// Matrix-valued process sampled on a [`TimeGrid`]; `values[0]` is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPath {
    pub grid: TimeGrid,
    pub values: Vec<HermitianMatrix<f64>>,
}

impl MatrixPath {
    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    pub fn at(&self, t: f64) -> Option<&HermitianMatrix<f64>> {
        self.grid.index_of(t).map(|i| &self.values[i])
    }
}

fn gue_entries(n: usize, rng: &mut StreamRng, scale: f64) -> HermitianMatrix<f64> {
    HermitianMatrix::from_upper(n, |i, j| {
        if i == j {
            C64::new(scale * rng.standard_normal(), 0.0)
        } else {
            let (re, im) = rng.complex_normal();
            C64::new(scale * re, scale * im)
        }
    })
}

fn complex_gaussian_array(len: usize, rng: &mut StreamRng) -> Vec<C64> {
    (0..len)
        .map(|_| {
            let (re, im) = rng.complex_normal();
            C64::new(re, im)
        })
        .collect()
}

/// `A A*` for a row-major `n x m` array.
fn gram(a: &[C64], n: usize, m: usize) -> HermitianMatrix<f64> {
    HermitianMatrix::from_upper(n, |i, j| {
        let ri = &a[i * m..(i + 1) * m];
        let rj = &a[j * m..(j + 1) * m];
        ri.iter().zip(rj).map(|(x, y)| x * y.conj()).sum()
    })
}

pub fn sample_gue(n: usize, rng: &mut StreamRng) -> Result<HermitianMatrix<f64>> {
    if n == 0 {
        return invalid("GUE dimension must be positive");
    }
    Ok(gue_entries(n, rng, 1.0))
}

pub fn sample_lue(n: usize, m: usize, rng: &mut StreamRng) -> Result<HermitianMatrix<f64>> {
    check_lue_dims(n, m)?;
    let a = complex_gaussian_array(n * m, rng);
    Ok(gram(&a, n, m))
}

fn check_lue_dims(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return invalid("LUE dimension must be positive");
    }
    if m < n {
        return invalid(format!("LUE needs m >= n, got n={n}, m={m}"));
    }
    Ok(())
}

/// `(Y - m I) / sqrt(m)`.
pub fn rescale_lue(y: &HermitianMatrix<f64>, m: usize) -> Result<HermitianMatrix<f64>> {
    if m == 0 {
        return invalid("rescaling needs m >= 1");
    }
    let m = m as f64;
    Ok(y.shift_diagonal(-m).scale(1.0 / m.sqrt()))
}

/// Hermitian Brownian motion: independent increments distributed as
/// `sqrt(dt) GUE(n)`.
pub fn sample_hermitian_bm(n: usize, grid: &TimeGrid, rng: &mut StreamRng) -> Result<MatrixPath> {
    if n == 0 {
        return invalid("dimension must be positive");
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut current = HermitianMatrix::zeros(n);
    values.push(current.clone());
    for w in grid.points().windows(2) {
        let inc = gue_entries(n, rng, (w[1] - w[0]).sqrt());
        current = current.add(&inc)?;
        values.push(current.clone());
    }
    Ok(MatrixPath { grid: grid.clone(), values })
}

/// Laguerre process `A(t) A(t)*` with `A` an `n x m` array of complex
/// Brownian motions, `E|A_ij(t)|^2 = t`.
pub fn sample_laguerre_path(n: usize, m: usize, grid: &TimeGrid, rng: &mut StreamRng) -> Result<MatrixPath> {
    check_lue_dims(n, m)?;
    let mut a = vec![C64::new(0.0, 0.0); n * m];
    let mut values = Vec::with_capacity(grid.len());
    values.push(HermitianMatrix::zeros(n));
    for w in grid.points().windows(2) {
        let sd = (w[1] - w[0]).sqrt();
        for z in a.iter_mut() {
            let (re, im) = rng.complex_normal();
            *z += C64::new(sd * re, sd * im);
        }
        values.push(gram(&a, n, m));
    }
    Ok(MatrixPath { grid: grid.clone(), values })
}

/// Pointwise `(Y(t) - m t I) / sqrt(m)`.
pub fn rescale_laguerre_path(path: &MatrixPath, m: usize) -> Result<MatrixPath> {
    if m == 0 {
        return invalid("rescaling needs m >= 1");
    }
    let mf = m as f64;
    let inv = 1.0 / mf.sqrt();
    let values = path
        .grid
        .points()
        .iter()
        .zip(&path.values)
        .map(|(&t, y)| y.shift_diagonal(-mf * t).scale(inv))
        .collect();
    Ok(MatrixPath { grid: path.grid.clone(), values })
}

/// `log` of the GUE density at `h`.
pub fn log_density_gue(h: &HermitianMatrix<f64>) -> f64 {
    let n = h.dim() as f64;
    -0.5 * h.trace_of_square() - 0.5 * n * std::f64::consts::LN_2 - 0.5 * n * n * std::f64::consts::PI.ln()
}

/// `log c_M` for the density of `(Y - M I)/sqrt(M)`, `Y ~ LUE(N, M)`.
pub fn log_normalizer_psi_m(n: usize, m: usize) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let log_m = mf.ln();
    let log_factorials: f64 = (1..=n).map(|j| ln_gamma((m - j) as f64 + 1.0)).sum();
    -mf * nf + 0.5 * nf * nf * log_m + nf * (mf - nf) * log_m
        - 0.5 * nf * (nf - 1.0) * std::f64::consts::PI.ln()
        - log_factorials
}

/// `log psi_M(H)`, the density of a rescaled LUE matrix:
/// `log c_M + (M - N) log det(I + H/sqrt M) - sqrt(M) Tr H`.
///
/// Returns `f64::NEG_INFINITY` outside the support (`I + H/sqrt M` not
/// positive definite).
pub fn log_density_psi_m(h: &HermitianMatrix<f64>, m: usize) -> Result<f64> {
    let n = h.dim();
    check_lue_dims(n, m)?;
    let root_m = (m as f64).sqrt();
    let spectrum = h.eigenvalues()?;
    let mut log_det = 0.0;
    for &l in spectrum.values() {
        let x = l / root_m;
        if x <= -1.0 {
            return Ok(f64::NEG_INFINITY);
        }
        log_det += x.ln_1p();
    }
    Ok(log_normalizer_psi_m(n, m) + (m - n) as f64 * log_det - root_m * h.trace())
}

/// `log d_{MN}` with `d_{MN} = prod_{j=0}^{N-1} j! (M-N+j)!`.
pub fn log_lue_eigen_normalizer(n: usize, m: usize) -> f64 {
    (0..n).map(|j| ln_gamma(j as f64 + 1.0) + ln_gamma((m - n + j) as f64 + 1.0)).sum()
}

/// Log joint density of the ordered LUE(n, m) eigenvalues
/// `0 <= x_1 <= ... <= x_n`.
pub fn log_density_lue_eigen(x: &[f64], m: usize) -> Result<f64> {
    let n = x.len();
    check_lue_dims(n, m)?;
    if x.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return invalid("eigenvalues must be finite and nonnegative");
    }
    if x.windows(2).any(|w| w[1] < w[0]) {
        return invalid("eigenvalues must be sorted ascending");
    }
    let mut acc = -log_lue_eigen_normalizer(n, m);
    for i in 0..n {
        for j in i + 1..n {
            acc += 2.0 * (x[j] - x[i]).ln();
        }
    }
    let power = (m - n) as f64;
    for &v in x {
        if power > 0.0 {
            acc += power * v.ln();
        }
        acc -= v;
    }
    Ok(acc)
}

/// `m x n` grid of independent unit-mean exponentials.
pub fn sample_exp_grid(m: usize, n: usize, rng: &mut StreamRng) -> Result<WeightGrid<f64>> {
    if m == 0 || n == 0 {
        return invalid("grid dimensions must be positive");
    }
    WeightGrid::from_fn(m, n, |_, _| rng.exponential())
}

/// `m x n` grid of independent geometrics, `P(x = s) = (1 - q) q^s`.
pub fn sample_geom_matrix(m: usize, n: usize, q: f64, rng: &mut StreamRng) -> Result<WeightGrid<u64>> {
    if !(q > 0.0 && q < 1.0) {
        return invalid(format!("geometric parameter q={q} outside (0,1)"));
    }
    if m == 0 || n == 0 {
        return invalid("grid dimensions must be positive");
    }
    WeightGrid::from_fn(m, n, |_, _| rng.geometric(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn rng(seed: u64) -> StreamRng {
        RngStream::new(seed, 0).rng()
    }

    #[test]
    fn validation_errors() {
        let mut r = rng(0);
        assert!(sample_gue(0, &mut r).is_err());
        assert!(sample_lue(3, 2, &mut r).is_err());
        assert!(sample_geom_matrix(2, 2, 1.0, &mut r).is_err());
        assert!(sample_geom_matrix(2, 2, 0.0, &mut r).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.5, 0.5]).is_err());
        assert!(TimeGrid::new(vec![0.1, 0.5]).is_err());
        assert!(log_density_lue_eigen(&[2.0, 1.0], 3).is_err());
        assert!(log_density_lue_eigen(&[-1.0], 3).is_err());
    }

    #[test]
    fn rescale_centering() {
        let y = HermitianMatrix::<f64>::identity(3).scale(7.0);
        let z = rescale_lue(&y, 7).unwrap();
        assert!(z.frobenius_norm() < 1e-15);
        let m = 9usize;
        let y = HermitianMatrix::from_real_diagonal(&[m as f64 + 3.0]);
        assert!((rescale_lue(&y, m).unwrap().get(0, 0).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gue_density_values() {
        let z = HermitianMatrix::<f64>::zeros(1);
        let expect = -0.5 * (2.0 * std::f64::consts::PI).ln();
        assert!((log_density_gue(&z) - expect).abs() < 1e-14);
        let h = HermitianMatrix::from_real_diagonal(&[2.0]);
        assert!((log_density_gue(&h) - (-2.0 + expect)).abs() < 1e-14);
    }

    #[test]
    fn lue_eigen_density_closed_forms() {
        for &t in &[0.1, 1.0, 3.7] {
            assert!((log_density_lue_eigen(&[t], 1).unwrap() + t).abs() < 1e-13);
            let g3 = 2.0 * t.ln() - t - 2.0f64.ln();
            assert!((log_density_lue_eigen(&[t], 3).unwrap() - g3).abs() < 1e-13);
        }
    }

    #[test]
    fn psi_support_boundary() {
        let m = 100;
        let h = HermitianMatrix::from_real_diagonal(&[-10.0, 0.0]);
        assert_eq!(log_density_psi_m(&h, m).unwrap(), f64::NEG_INFINITY);
        let h = HermitianMatrix::from_real_diagonal(&[-10.5, 0.0]);
        assert_eq!(log_density_psi_m(&h, m).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn psi_normalizes_in_one_dimension() {
        // Simpson's rule over [-sqrt(M), 10].
        let m = 50usize;
        let (a, b) = (-(m as f64).sqrt(), 10.0);
        let steps = 20_000;
        let h = (b - a) / steps as f64;
        let f = |x: f64| {
            let mat = HermitianMatrix::from_real_diagonal(&[x]);
            log_density_psi_m(&mat, m).unwrap().exp()
        };
        let mut s = f(a) + f(b);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        let integral = s * h / 3.0;
        assert!((integral - 1.0).abs() < 1e-4, "integral {integral}");
    }

    #[test]
    fn lue_eigen_density_normalizes_for_two_by_two() {
        // Ordered region 0 <= x1 <= x2, truncated at 60; midpoint rule in
        // polar-free form on a fine square grid.
        let m = 2usize;
        let upper = 60.0;
        let k = 1500;
        let h = upper / k as f64;
        let mut total = 0.0;
        for i in 0..k {
            let x1 = (i as f64 + 0.5) * h;
            for j in i..k {
                let x2 = (j as f64 + 0.5) * h;
                let w = if i == j { 0.5 } else { 1.0 };
                total += w * log_density_lue_eigen(&[x1, x2], m).unwrap().exp();
            }
        }
        total *= h * h;
        assert!((total - 1.0).abs() < 1e-3, "integral {total}");
    }

    #[test]
    fn gue_sampler_moments() {
        let mut r = rng(11);
        let draws = 100_000;
        let mut mean1 = 0.0;
        for _ in 0..draws {
            mean1 += sample_gue(1, &mut r).unwrap().get(0, 0).re;
        }
        assert!((mean1 / draws as f64).abs() < 0.02);
        let mut tr2 = 0.0;
        for _ in 0..draws {
            tr2 += sample_gue(3, &mut r).unwrap().trace_of_square();
        }
        assert!((tr2 / draws as f64 - 9.0).abs() < 0.2);
    }

    #[test]
    fn lue_sampler_moments_and_psd() {
        let mut r = rng(12);
        let draws = 100_000;
        let mut tr = 0.0;
        let mut rescaled = 0.0;
        for i in 0..draws {
            let y = sample_lue(2, 10, &mut r).unwrap();
            tr += y.trace();
            if i < 2000 {
                assert!(y.eigenvalues().unwrap().min() >= -1e-10);
            }
            let y1 = sample_lue(1, 5, &mut r).unwrap();
            rescaled += rescale_lue(&y1, 5).unwrap().get(0, 0).re;
        }
        assert!((tr / draws as f64 - 20.0).abs() < 0.3);
        assert!((rescaled / draws as f64).abs() < 0.03);
    }

    #[test]
    fn hermitian_bm_variance_and_independence() {
        let grid = TimeGrid::new(vec![0.0, 0.25, 1.0]).unwrap();
        let paths = 100_000;
        let mut r = rng(13);
        let (mut sx, mut sxx, mut sa, mut sb, mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..paths {
            let p = sample_hermitian_bm(2, &grid, &mut r).unwrap();
            assert_eq!(p.values[0], HermitianMatrix::zeros(2));
            let x = p.values[2].get(0, 0).re;
            sx += x;
            sxx += x * x;
            let a = p.values[1].get(0, 0).re;
            let b = x - a;
            sa += a;
            sb += b;
            sab += a * b;
            saa += a * a;
            sbb += b * b;
        }
        let nf = paths as f64;
        let var = sxx / nf - (sx / nf).powi(2);
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
        let cov = sab / nf - sa * sb / nf / nf;
        let corr = cov / ((saa / nf - (sa / nf).powi(2)) * (sbb / nf - (sb / nf).powi(2))).sqrt();
        assert!(corr.abs() < 0.02, "correlation {corr}");
    }

    #[test]
    fn laguerre_path_mean_and_origin() {
        let grid = TimeGrid::new(vec![0.0, 0.5, 2.0]).unwrap();
        let (n, m) = (2usize, 6usize);
        let paths = 100_000;
        let mut r = rng(14);
        let mut s = [0.0; 2];
        for _ in 0..paths {
            let p = sample_laguerre_path(n, m, &grid, &mut r).unwrap();
            assert_eq!(p.values[0], HermitianMatrix::zeros(n));
            s[0] += p.values[1].get(0, 0).re;
            s[1] += p.values[2].get(0, 0).re;
        }
        for (k, &t) in [0.5, 2.0].iter().enumerate() {
            let mean = s[k] / paths as f64;
            let tol = 3.0 * (m as f64).sqrt() * t / (paths as f64).sqrt() * 3.0;
            assert!((mean - m as f64 * t).abs() < tol, "t={t}: {mean}");
        }
        let z = rescale_laguerre_path(&sample_laguerre_path(n, m, &grid, &mut r).unwrap(), m).unwrap();
        assert_eq!(z.values[0], HermitianMatrix::zeros(n));
    }

    #[test]
    fn exp_and_geom_grids() {
        let mut r = rng(15);
        let mut total = 0.0;
        for _ in 0..100 {
            let g = sample_exp_grid(50, 50, &mut r).unwrap();
            assert!(g.values().iter().all(|&w| w >= 0.0));
            total += g.values().iter().sum::<f64>();
        }
        assert!((total / (100.0 * 2500.0) - 1.0).abs() < 0.01);

        let draws = 100_000;
        let mut sum = 0u64;
        let mut zeros = 0usize;
        for _ in 0..draws {
            let x = sample_geom_matrix(1, 1, 0.5, &mut r).unwrap().get(0, 0);
            sum += x;
            zeros += (x == 0) as usize;
        }
        assert!((sum as f64 / draws as f64 - 1.0).abs() < 0.02);
        assert!((zeros as f64 / draws as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn samplers_are_deterministic() {
        let s = RngStream::new(77, 5);
        let grid = TimeGrid::uniform(4, 1.0).unwrap();
        assert_eq!(sample_gue(4, &mut s.rng()).unwrap(), sample_gue(4, &mut s.rng()).unwrap());
        assert_eq!(sample_lue(2, 3, &mut s.rng()).unwrap(), sample_lue(2, 3, &mut s.rng()).unwrap());
        assert_eq!(
            sample_laguerre_path(2, 3, &grid, &mut s.rng()).unwrap(),
            sample_laguerre_path(2, 3, &grid, &mut s.rng()).unwrap()
        );
        assert_eq!(
            sample_hermitian_bm(3, &grid, &mut s.rng()).unwrap(),
            sample_hermitian_bm(3, &grid, &mut s.rng()).unwrap()
        );
        assert_eq!(sample_exp_grid(3, 2, &mut s.rng()).unwrap(), sample_exp_grid(3, 2, &mut s.rng()).unwrap());
        assert_eq!(
            sample_geom_matrix(3, 2, 0.7, &mut s.rng()).unwrap(),
            sample_geom_matrix(3, 2, 0.7, &mut s.rng()).unwrap()
        );
    }
}
