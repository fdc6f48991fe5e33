//! Experiment bodies and their parameter checks.

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use rmtlab::ensembles::{
    log_density_gue, log_density_psi_m, rescale_laguerre_path, rescale_lue, sample_exp_grid, sample_geom_matrix,
    sample_gue, sample_laguerre_path, sample_lue, TimeGrid,
};
use rmtlab::lpp_rsk::{
    l_count, last_passage, last_passage_disjoint, partitions_up_to, rsk_shape, shape_log_pmf, ssyt_count,
    DisjointPathOracle,
};
use rmtlab::pathfun::{gamma, gamma_top_sum, omega_1, omega_k, sample_bm_bundle};
use rmtlab::stats::{ks_against_cdf, ks_two_sample, moments_of};
use rmtlab::{EmpiricalSample, Hermitian, KsResult, RngStream, StreamRng, WeightGrid};

use crate::{usage, CliError, Outcome, Params};

type Res<T> = Result<T, CliError>;

/// Runs `f` once per replicate on the current pool; results come back in
/// replicate order.
fn replicates<T: Send>(
    p: &Params,
    lane: u64,
    count: usize,
    f: impl Fn(&mut StreamRng) -> rmtlab::Result<T> + Sync,
) -> Res<Vec<T>> {
    (0..count)
        .into_par_iter()
        .map(|r| f(&mut RngStream::new(p.seed, r as u64).with_lane(lane).rng()))
        .collect::<rmtlab::Result<Vec<T>>>()
        .map_err(CliError::from)
}

fn spectrum(h: &Hermitian) -> rmtlab::Result<Vec<f64>> {
    Ok(h.eigenvalues()?.into_values())
}

fn top_sum(sorted: &[f64], k: usize) -> f64 {
    sorted[sorted.len() - k..].iter().sum()
}

impl Outcome {
    fn record_moments(&mut self, name: &str, values: &[f64]) -> Res<()> {
        self.moments.insert(name.to_string(), moments_of(values)?.into());
        Ok(())
    }

    /// Two-sample KS between named series; records moments and raw values.
    fn compare(&mut self, a: (&str, Vec<f64>), b: (&str, Vec<f64>)) -> Res<KsResult> {
        let r = ks_two_sample(&EmpiricalSample::new(a.1.clone())?, &EmpiricalSample::new(b.1.clone())?);
        self.comparisons.push(format!("{} vs {}", a.0, b.0));
        self.ks_statistics.push(r.statistic);
        self.p_values.push(r.p_value);
        for (name, values) in [a, b] {
            if !self.moments.contains_key(name) {
                self.record_moments(name, &values)?;
                self.series.push((name.to_string(), values));
            }
        }
        Ok(r)
    }
}

fn need(cond: bool, msg: &str) -> Res<()> {
    if cond {
        Ok(())
    } else {
        usage(msg)
    }
}

fn check_samples(p: &Params) -> Res<()> {
    need(p.samples >= 2, "--samples must be at least 2")
}

pub(crate) fn validate_clt_static(p: &Params) -> Res<()> {
    need(p.n >= 1 && p.n <= 64, "--n must be in 1..=64")?;
    need(p.m >= p.n, "--m must be at least --n")?;
    check_samples(p)
}

pub(crate) fn clt_static(p: &Params) -> Res<Outcome> {
    let lue = replicates(p, 0, p.samples, |r| Ok(rescale_lue(&sample_lue(p.n, p.m, r)?, p.m)?.eigenvalues()?.max()))?;
    let gue = replicates(p, 1, p.samples, |r| Ok(sample_gue(p.n, r)?.eigenvalues()?.max()))?;
    let mut out = Outcome::default();
    let r = out.compare(("rescaled_lue_max", lue), ("gue_max", gue))?;
    out.pass = r.statistic < p.threshold;
    Ok(out)
}

pub(crate) fn validate_clt_process(p: &Params) -> Res<()> {
    need(p.n >= 1 && p.n <= 64, "--n must be in 1..=64")?;
    need(p.m >= p.n, "--m must be at least --n")?;
    need(p.steps >= 2 && p.steps % 2 == 0, "--steps must be even so that t = 0.5 is a grid point")?;
    check_samples(p)
}

pub(crate) fn clt_process(p: &Params) -> Res<Outcome> {
    let grid = TimeGrid::uniform(p.steps, 1.0)?;
    let half = p.steps / 2;
    let picks = [(0.5, half), (1.0, p.steps)];
    let draws = replicates(p, 0, p.samples, |r| {
        let path = rescale_laguerre_path(&sample_laguerre_path(p.n, p.m, &grid, r)?, p.m)?;
        Ok(picks.map(|(_, j)| {
            let h = &path.values[j];
            let off = if p.n > 1 { h.get(0, 1).norm_sqr() } else { f64::NAN };
            (h.get(0, 0).re, off)
        }))
    })?;
    let mut out = Outcome { pass: true, ..Outcome::default() };
    for (slot, &(t, _)) in picks.iter().enumerate() {
        let diag: Vec<f64> = draws.iter().map(|d| d[slot].0).collect();
        let name = format!("diagonal_t={t}");
        let m = moments_of(&diag)?;
        let rel = (m.variance / (t * t) - 1.0).abs();
        out.pass &= rel <= p.threshold;
        out.diagnostics.insert(format!("variance_relative_error_t={t}"), rel);
        if p.n > 1 {
            let off = draws.iter().map(|d| d[slot].1).sum::<f64>() / draws.len() as f64;
            out.diagnostics.insert(format!("offdiagonal_second_moment_t={t}"), off);
        }
        // reported only: the limiting diagonal entry is N(0, t^2)
        let normal = Normal::new(0.0, t).expect("positive scale");
        let r = ks_against_cdf(&EmpiricalSample::new(diag.clone())?, |x| normal.cdf(x));
        out.comparisons.push(format!("{name} vs normal(0, {t}^2)"));
        out.ks_statistics.push(r.statistic);
        out.p_values.push(r.p_value);
        out.moments.insert(name.clone(), m.into());
        out.series.push((name, diag));
    }
    Ok(out)
}

pub(crate) fn validate_density(p: &Params) -> Res<()> {
    need(p.n >= 1 && p.n <= 16, "--n must be in 1..=16")?;
    need(p.m / 10_000 >= p.n.max(2), "--m must be at least 10^4 * max(n, 2)")
}

/// Evaluation point `diag(0.5, ..., -0.5)`, equally spaced.
fn density_point(n: usize) -> Hermitian {
    let diag: Vec<f64> =
        (0..n).map(|i| if n == 1 { 0.5 } else { 0.5 - i as f64 / (n - 1) as f64 }).collect();
    Hermitian::from_real_diagonal(&diag)
}

pub(crate) fn density_convergence(p: &Params) -> Res<Outcome> {
    let h = density_point(p.n);
    let target = log_density_gue(&h);
    let mut out = Outcome { pass: true, ..Outcome::default() };
    let mut last = f64::INFINITY;
    for m in [p.m / 10_000, p.m / 100, p.m] {
        let rel = (log_density_psi_m(&h, m)? - target).exp_m1().abs();
        out.diagnostics.insert(format!("relative_error_m={m}"), rel);
        out.pass &= rel < last;
        last = rel;
    }
    out.pass &= last < p.threshold;
    out.diagnostics.insert("log_gue_density".into(), target);
    Ok(out)
}

fn validate_lue_grid(p: &Params) -> Res<()> {
    need(p.n >= 1 && p.n <= 16, "--n must be in 1..=16")?;
    need(p.m >= p.n, "--m must be at least --n")?;
    need(p.m <= 10_000, "--m must be at most 10^4")?;
    check_samples(p)
}

pub(crate) fn validate_lpp(p: &Params) -> Res<()> {
    validate_lue_grid(p)
}

pub(crate) fn lpp_vs_lue(p: &Params) -> Res<Outcome> {
    let lpp = replicates(p, 0, p.samples, |r| Ok(last_passage(&sample_exp_grid(p.m, p.n, r)?)))?;
    let lue = replicates(p, 1, p.samples, |r| Ok(sample_lue(p.n, p.m, r)?.eigenvalues()?.max()))?;
    let mut out = Outcome::default();
    let r = out.compare(("last_passage", lpp), ("lue_max", lue))?;
    out.pass = r.p_value > p.threshold;
    Ok(out)
}

pub(crate) fn validate_lppk(p: &Params) -> Res<()> {
    validate_lue_grid(p)?;
    need(p.n <= 12, "--n must be at most 12 for the disjoint-path program")?;
    need(p.k.map_or(true, |k| k >= 1 && k <= p.n), "--k must be in 1..=n")
}

pub(crate) fn lppk_vs_lue(p: &Params) -> Res<Outcome> {
    let ks: Vec<usize> = p.k.map_or_else(|| (1..=p.n).collect(), |k| vec![k]);
    let lpp = replicates(p, 0, p.samples, |r| {
        let g = sample_exp_grid(p.m, p.n, r)?;
        ks.iter().map(|&k| last_passage_disjoint(&g, k)).collect::<rmtlab::Result<Vec<f64>>>()
    })?;
    let lue = replicates(p, 1, p.samples, |r| spectrum(&sample_lue(p.n, p.m, r)?))?;
    let mut out = Outcome { pass: true, ..Outcome::default() };
    for (slot, &k) in ks.iter().enumerate() {
        let a = lpp.iter().map(|v| v[slot]).collect();
        let b = lue.iter().map(|s| top_sum(s, k)).collect();
        let r = out.compare((&format!("disjoint_paths_k={k}"), a), (&format!("lue_top_sum_k={k}"), b))?;
        out.pass &= r.p_value > p.threshold;
    }
    Ok(out)
}

pub(crate) fn validate_geom(p: &Params) -> Res<()> {
    validate_lue_grid(p)?;
    need(p.q > 0.0 && p.q < 1.0, "--q must be in (0, 1)")
}

pub(crate) fn geom_limit(p: &Params) -> Res<Outcome> {
    let scale = 1.0 - p.q;
    let rsk = replicates(p, 0, p.samples, |r| {
        Ok(rsk_shape(&sample_geom_matrix(p.m, p.n, p.q, r)?).part(0) as f64 * scale)
    })?;
    let lue = replicates(p, 1, p.samples, |r| Ok(sample_lue(p.n, p.m, r)?.eigenvalues()?.max()))?;
    let mut out = Outcome::default();
    let r = out.compare(("scaled_rsk_first_row", rsk), ("lue_max", lue))?;
    out.pass = r.statistic < p.threshold;
    Ok(out)
}

fn validate_bundle(p: &Params) -> Res<()> {
    need(p.n >= 1 && p.n <= 12, "--n must be in 1..=12")?;
    need(p.steps >= 1 && p.steps <= 1_000_000, "--steps must be in 1..=10^6")?;
    check_samples(p)
}

pub(crate) fn validate_omega1(p: &Params) -> Res<()> {
    validate_bundle(p)
}

pub(crate) fn omega1_vs_gue(p: &Params) -> Res<Outcome> {
    let omega = replicates(p, 0, p.samples, |r| Ok(omega_1(&sample_bm_bundle(p.n, p.steps, r)?)))?;
    let gue = replicates(p, 1, p.samples, |r| Ok(sample_gue(p.n, r)?.eigenvalues()?.max()))?;
    let mut out = Outcome::default();
    let r = out.compare(("omega_1", omega), ("gue_max", gue))?;
    out.pass = r.statistic < p.threshold;
    Ok(out)
}

pub(crate) fn validate_omegak(p: &Params) -> Res<()> {
    validate_bundle(p)?;
    need(p.n >= 2, "--n must be at least 2")?;
    need(p.k.map_or(false, |k| k >= 1 && k <= p.n), "--k must be in 1..=n")
}

pub(crate) fn omegak_vs_gue(p: &Params) -> Res<Outcome> {
    let k = p.k.expect("validated");
    let omega = replicates(p, 0, p.samples, |r| omega_k(&sample_bm_bundle(p.n, p.steps, r)?, k))?;
    let gue = replicates(p, 1, p.samples, |r| Ok(top_sum(&spectrum(&sample_gue(p.n, r)?)?, k)))?;
    let mut out = Outcome::default();
    let r = out.compare((&format!("omega_k={k}"), omega), (&format!("gue_top_sum_k={k}"), gue))?;
    out.pass = r.statistic < p.threshold;
    Ok(out)
}

pub(crate) fn validate_gamma(p: &Params) -> Res<()> {
    validate_bundle(p)?;
    need(p.n >= 2, "--n must be at least 2")
}

pub(crate) fn gamma_vs_gue(p: &Params) -> Res<Outcome> {
    let transformed = replicates(p, 0, p.samples, |r| Ok(gamma(&sample_bm_bundle(p.n, p.steps, r)?)?.terminal()))?;
    let gue = replicates(p, 1, p.samples, |r| spectrum(&sample_gue(p.n, r)?))?;
    let mut out = Outcome { pass: true, ..Outcome::default() };
    for i in 0..p.n {
        let a = transformed.iter().map(|v| v[i]).collect();
        let b = gue.iter().map(|v| v[i]).collect();
        let r = out.compare((&format!("gamma_{}", i + 1), a), (&format!("gue_eigenvalue_{}", i + 1), b))?;
        out.pass &= r.statistic < p.threshold;
    }
    let ordered = transformed.iter().filter(|v| v.windows(2).all(|w| w[0] <= w[1])).count();
    out.diagnostics.insert("ordered_fraction".into(), ordered as f64 / p.samples as f64);
    Ok(out)
}

pub(crate) fn gamma_vs_omega(p: &Params) -> Res<Outcome> {
    let k = p.k.expect("validated");
    // lane 0 bundles feed both functionals (pathwise comparison); lane 1
    // bundles give an independent omega sample for the law comparison.
    let shared = replicates(p, 0, p.samples, |r| {
        let b = sample_bm_bundle(p.n, p.steps, r)?;
        Ok((gamma_top_sum(&b, k)?, omega_k(&b, k)?, omega_k(&b.reversed(), k)?))
    })?;
    let omega = replicates(p, 1, p.samples, |r| omega_k(&sample_bm_bundle(p.n, p.steps, r)?, k))?;
    let gamma_sums: Vec<f64> = shared.iter().map(|s| s.0).collect();
    let mut out = Outcome::default();
    let r = out.compare((&format!("gamma_top_sum_k={k}"), gamma_sums), (&format!("omega_k={k}"), omega))?;
    out.pass = r.statistic < p.threshold;

    // Pathwise comparison on shared bundles, with the percolation taken over
    // the paths in the given order and in reversed order. Reported only.
    for (label, pick) in [("", false), ("reversed_", true)] {
        let diffs: Vec<f64> = shared.iter().map(|s| if pick { s.2 - s.0 } else { s.1 - s.0 }).collect();
        let max_abs = diffs.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        let mean_abs = diffs.iter().map(|d| d.abs()).sum::<f64>() / diffs.len() as f64;
        let agree = diffs.iter().filter(|d| d.abs() <= 1e-9).count() as f64 / diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        out.diagnostics.insert(format!("pathwise_{label}max_abs_discrepancy"), max_abs);
        out.diagnostics.insert(format!("pathwise_{label}mean_abs_discrepancy"), mean_abs);
        out.diagnostics.insert(format!("pathwise_{label}mean_discrepancy"), mean);
        out.diagnostics.insert(format!("pathwise_{label}agreement_fraction"), agree);
        let name = format!("pathwise_{label}omega_minus_gamma");
        out.record_moments(&name, &diffs)?;
        out.series.push((name, diffs));
    }
    Ok(out)
}

/// Largest entry in the exhaustive Greene sweep.
const GREENE_MAX_ENTRY: u64 = 2;
/// Random Greene grids: side length and largest entry.
const GREENE_RANDOM_SIDE: usize = 4;
const GREENE_RANDOM_MAX_ENTRY: u64 = 5;

pub(crate) fn validate_greene(p: &Params) -> Res<()> {
    need(p.n >= 1 && p.m >= 1, "--n and --m must be positive")?;
    need(p.n * p.m <= 10, "exhaustive sweep limited to n * m <= 10 sites")
}

/// Number of `k` for which the shape partial sums disagree with the
/// oracle, and with the disjoint-path program.
fn greene_mismatches(g: &WeightGrid<u64>, oracle: &DisjointPathOracle) -> rmtlab::Result<(u64, u64)> {
    let shape = rsk_shape(g);
    let (mut vs_oracle, mut vs_dp) = (0, 0);
    for k in 1..=g.rows() {
        let lhs = shape.partial_sum(k);
        if oracle.max_weight(g, k)? != lhs {
            vs_oracle += 1;
        }
        if last_passage_disjoint(g, k)? != lhs {
            vs_dp += 1;
        }
    }
    Ok((vs_oracle, vs_dp))
}

pub(crate) fn greene_verify(p: &Params) -> Res<Outcome> {
    let (m, n) = (p.m, p.n);
    let base = GREENE_MAX_ENTRY + 1;
    let total = base.pow((m * n) as u32);
    let oracle = DisjointPathOracle::new(m, n)?;
    let exhaustive = (0..total)
        .into_par_iter()
        .map(|code| {
            let mut c = code;
            let g = WeightGrid::from_fn(m, n, |_, _| {
                let v = c % base;
                c /= base;
                v
            })?;
            greene_mismatches(&g, &oracle)
        })
        .collect::<rmtlab::Result<Vec<_>>>()?;
    let side = GREENE_RANDOM_SIDE;
    let random_oracle = DisjointPathOracle::new(side, side)?;
    let random = replicates(p, 0, p.samples, |r| {
        let g = WeightGrid::from_fn(side, side, |_, _| r.below(GREENE_RANDOM_MAX_ENTRY + 1))?;
        greene_mismatches(&g, &random_oracle)
    })?;
    let all = exhaustive.iter().chain(&random);
    let (oracle_bad, dp_bad) = all.fold((0, 0), |(a, b), &(x, y)| (a + x, b + y));
    let mut out = Outcome::default();
    out.diagnostics.insert("exhaustive_grids".into(), total as f64);
    out.diagnostics.insert("random_grids".into(), p.samples as f64);
    out.diagnostics.insert("oracle_mismatches".into(), oracle_bad as f64);
    out.diagnostics.insert("dp_mismatches".into(), dp_bad as f64);
    out.pass = (oracle_bad + dp_bad) as f64 <= p.threshold;
    Ok(out)
}

/// Largest shape size in the exact and Monte Carlo shape checks.
const COUNT_MAX_SIZE: u64 = 4;

pub(crate) fn validate_rsk_count(p: &Params) -> Res<()> {
    need(p.n >= 1 && p.n <= 6 && p.m >= 1 && p.m <= 6, "--n and --m must be in 1..=6")?;
    need(p.q > 0.0 && p.q < 1.0, "--q must be in (0, 1)")?;
    check_samples(p)
}

pub(crate) fn rsk_count_verify(p: &Params) -> Res<Outcome> {
    let mut exact_bad = 0u64;
    let mut exact_checked = 0u64;
    for shape in partitions_up_to(COUNT_MAX_SIZE, p.n.max(p.m) + 1) {
        for a in 1..=p.m {
            for b in 1..=p.n {
                exact_checked += 1;
                if l_count(&shape, a, b)? != ssyt_count(&shape, a) * ssyt_count(&shape, b) {
                    exact_bad += 1;
                }
            }
        }
    }
    let shapes = replicates(p, 0, p.samples, |r| Ok(rsk_shape(&sample_geom_matrix(p.m, p.n, p.q, r)?)))?;
    let mut out = Outcome::default();
    let mut max_z: f64 = 0.0;
    for shape in partitions_up_to(COUNT_MAX_SIZE, p.n.min(p.m)) {
        let prob = shape_log_pmf(&shape, p.m, p.n, p.q)?.exp();
        let hits = shapes.iter().filter(|s| **s == shape).count() as f64;
        let freq = hits / p.samples as f64;
        let z = (freq - prob) / (prob * (1.0 - prob) / p.samples as f64).sqrt();
        out.diagnostics.insert(format!("z_score_{shape}"), z);
        max_z = max_z.max(z.abs());
    }
    let mass: f64 = partitions_up_to(60, p.n.min(p.m))
        .iter()
        .map(|s| shape_log_pmf(s, p.m, p.n, p.q).map(f64::exp))
        .sum::<rmtlab::Result<f64>>()?;
    out.diagnostics.insert("exact_identities_checked".into(), exact_checked as f64);
    out.diagnostics.insert("exact_mismatches".into(), exact_bad as f64);
    out.diagnostics.insert("max_abs_z_score".into(), max_z);
    out.diagnostics.insert("pmf_mass_up_to_size_60".into(), mass);
    out.pass = exact_bad == 0 && max_z <= p.threshold;
    Ok(out)
}
