//! Experiment catalog: names, claims, parameter defaults and thresholds.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::experiments as ex;
use crate::{usage, CliError, ExperimentConfig, Outcome, Params};

/// Defaults for the tunable parameters; `None` marks a parameter the
/// experiment does not read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamDefaults {
    pub n: Option<usize>,
    pub m: Option<usize>,
    /// `Some(None)`: `k` is accepted and defaults to every admissible value.
    pub k: Option<Option<usize>>,
    pub q: Option<f64>,
    pub steps: Option<usize>,
    pub samples: Option<usize>,
}

const NONE: ParamDefaults = ParamDefaults { n: None, m: None, k: None, q: None, steps: None, samples: None };

#[derive(Clone)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub claim: &'static str,
    pub defaults: ParamDefaults,
    /// Report key under which the threshold is echoed.
    pub threshold_name: &'static str,
    pub threshold: f64,
    pub(crate) validate: fn(&Params) -> Result<(), CliError>,
    pub(crate) body: fn(&Params) -> Result<Outcome, CliError>,
}

impl std::fmt::Debug for ExperimentInfo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExperimentInfo").field("name", &self.name).finish_non_exhaustive()
    }
}

impl ExperimentInfo {
    /// Catalog entry as JSON.
    pub fn to_json(&self) -> Value {
        let d = &self.defaults;
        let mut params = BTreeMap::new();
        if let Some(v) = d.n {
            params.insert("n", json!(v));
        }
        if let Some(v) = d.m {
            params.insert("m", json!(v));
        }
        if let Some(v) = d.k {
            params.insert("k", v.map_or(json!("all"), |k| json!(k)));
        }
        if let Some(v) = d.q {
            params.insert("q", json!(v));
        }
        if let Some(v) = d.steps {
            params.insert("steps", json!(v));
        }
        if let Some(v) = d.samples {
            params.insert("samples", json!(v));
        }
        json!({
            "name": self.name,
            "claim": self.claim,
            "defaults": params,
            "threshold": { self.threshold_name: self.threshold },
        })
    }

    pub(crate) fn resolve(&self, c: &ExperimentConfig) -> Result<Params, CliError> {
        fn pick<T: Copy>(name: &str, exp: &str, default: Option<T>, given: Option<T>) -> Result<Option<T>, CliError> {
            match (default, given) {
                (None, Some(_)) => usage(format!("--{name} does not apply to {exp}")),
                (None, None) => Ok(None),
                (Some(d), g) => Ok(Some(g.unwrap_or(d))),
            }
        }
        let d = &self.defaults;
        let k = match (d.k, c.k) {
            (None, Some(_)) => return usage(format!("--k does not apply to {}", self.name)),
            (None, None) => None,
            (Some(default), given) => given.or(default),
        };
        let threshold = c.threshold.unwrap_or(self.threshold);
        if !threshold.is_finite() {
            return usage("--threshold must be finite");
        }
        let p = Params {
            n: pick("n", self.name, d.n, c.n)?.unwrap_or(0),
            m: pick("m", self.name, d.m, c.m)?.unwrap_or(0),
            k,
            q: pick("q", self.name, d.q, c.q)?.unwrap_or(f64::NAN),
            steps: pick("steps", self.name, d.steps, c.steps)?.unwrap_or(0),
            samples: pick("samples", self.name, d.samples, c.samples)?.unwrap_or(0),
            seed: c.seed,
            threshold,
        };
        (self.validate)(&p)?;
        Ok(p)
    }

    /// Parameters actually used, for the report.
    pub(crate) fn echo(&self, p: &Params) -> BTreeMap<String, Value> {
        let d = &self.defaults;
        let mut out = BTreeMap::new();
        if d.n.is_some() {
            out.insert("n".into(), json!(p.n));
        }
        if d.m.is_some() {
            out.insert("m".into(), json!(p.m));
        }
        if d.k.is_some() {
            out.insert("k".into(), p.k.map_or(json!("all"), |k| json!(k)));
        }
        if d.q.is_some() {
            out.insert("q".into(), json!(p.q));
        }
        if d.steps.is_some() {
            out.insert("steps".into(), json!(p.steps));
        }
        if d.samples.is_some() {
            out.insert("samples".into(), json!(p.samples));
        }
        out
    }
}

/// Every registered experiment, in a stable order.
pub fn list_experiments() -> Vec<ExperimentInfo> {
    vec![
        ExperimentInfo {
            name: "clt-static",
            claim: "(LUE(n,m) - m I)/sqrt(m) converges in law to GUE(n); compares largest eigenvalues",
            defaults: ParamDefaults { n: Some(3), m: Some(2000), samples: Some(20_000), ..NONE },
            threshold_name: "max_ks_statistic",
            threshold: 0.03,
            validate: ex::validate_clt_static,
            body: ex::clt_static,
        },
        ExperimentInfo {
            name: "clt-process",
            claim: "rescaled Laguerre process converges to Hermitian Brownian motion; diagonal variance equals t^2 at t = 0.5, 1",
            defaults: ParamDefaults { n: Some(3), m: Some(2000), steps: Some(2), samples: Some(10_000), ..NONE },
            threshold_name: "max_relative_variance_error",
            threshold: 0.05,
            validate: ex::validate_clt_process,
            body: ex::clt_process,
        },
        ExperimentInfo {
            name: "density-convergence",
            claim: "density of the rescaled LUE converges pointwise to the GUE density; evaluated at diag(0.5, ..., -0.5) for m/10^4, m/10^2, m",
            defaults: ParamDefaults { n: Some(2), m: Some(1_000_000), ..NONE },
            threshold_name: "max_relative_density_error",
            threshold: 0.01,
            validate: ex::validate_density,
            body: ex::density_convergence,
        },
        ExperimentInfo {
            name: "lpp-vs-lue",
            claim: "last-passage time over an m x n exponential grid has the law of the largest LUE(n,m) eigenvalue",
            defaults: ParamDefaults { n: Some(3), m: Some(5), samples: Some(10_000), ..NONE },
            threshold_name: "min_p_value",
            threshold: 0.001,
            validate: ex::validate_lpp,
            body: ex::lpp_vs_lue,
        },
        ExperimentInfo {
            name: "lppk-vs-lue",
            claim: "maximal weight of k disjoint paths over an exponential grid has the law of the sum of the k largest LUE eigenvalues",
            defaults: ParamDefaults { n: Some(3), m: Some(5), k: Some(None), samples: Some(10_000), ..NONE },
            threshold_name: "min_p_value",
            threshold: 0.001,
            validate: ex::validate_lppk,
            body: ex::lppk_vs_lue,
        },
        ExperimentInfo {
            name: "geom-limit",
            claim: "(1 - q) times the first row of the RSK shape of a geometric matrix tends to the largest LUE eigenvalue as q -> 1",
            defaults: ParamDefaults { n: Some(2), m: Some(3), q: Some(0.995), samples: Some(10_000), ..NONE },
            threshold_name: "max_ks_statistic",
            threshold: 0.04,
            validate: ex::validate_geom,
            body: ex::geom_limit,
        },
        ExperimentInfo {
            name: "omega1-vs-gue",
            claim: "Brownian last-passage functional over n paths has the law of the largest GUE(n) eigenvalue",
            defaults: ParamDefaults { n: Some(4), steps: Some(2000), samples: Some(10_000), ..NONE },
            threshold_name: "max_ks_statistic",
            threshold: 0.03,
            validate: ex::validate_omega1,
            body: ex::omega1_vs_gue,
        },
        ExperimentInfo {
            name: "omegak-vs-gue",
            claim: "k-path Brownian percolation functional has the law of the sum of the k largest GUE(n) eigenvalues",
            defaults: ParamDefaults { n: Some(4), k: Some(Some(2)), steps: Some(2000), samples: Some(10_000), ..NONE },
            threshold_name: "max_ks_statistic",
            threshold: 0.03,
            validate: ex::validate_omegak,
            body: ex::omegak_vs_gue,
        },
        ExperimentInfo {
            name: "gamma-vs-gue",
            claim: "terminal values of the path transform of n Brownian motions have the law of the ordered GUE(n) spectrum",
            defaults: ParamDefaults { n: Some(3), steps: Some(2000), samples: Some(10_000), ..NONE },
            threshold_name: "max_ks_statistic",
            threshold: 0.03,
            validate: ex::validate_gamma,
            body: ex::gamma_vs_gue,
        },
        ExperimentInfo {
            name: "gamma-vs-omega",
            claim: "sum of the top k path-transform components equals the k-path percolation functional in law; pathwise agreement is reported only",
            defaults: ParamDefaults { n: Some(3), k: Some(Some(2)), steps: Some(2000), samples: Some(10_000), ..NONE },
            threshold_name: "max_ks_statistic",
            threshold: 0.03,
            validate: ex::validate_omegak,
            body: ex::gamma_vs_omega,
        },
        ExperimentInfo {
            name: "greene-verify",
            claim: "partial sums of the RSK shape equal maximal weights of k disjoint paths; all n x m grids with entries <= 2 plus random 4 x 4 grids with entries <= 5",
            defaults: ParamDefaults { n: Some(3), m: Some(3), samples: Some(200), ..NONE },
            threshold_name: "max_mismatches",
            threshold: 0.0,
            validate: ex::validate_greene,
            body: ex::greene_verify,
        },
        ExperimentInfo {
            name: "rsk-count-verify",
            claim: "matrices with a given RSK shape are counted by the product formula; shape frequencies of geometric matrices follow it",
            defaults: ParamDefaults { n: Some(3), m: Some(3), q: Some(0.5), samples: Some(100_000), ..NONE },
            threshold_name: "max_abs_z_score",
            threshold: 4.0,
            validate: ex::validate_rsk_count,
            body: ex::rsk_count_verify,
        },
    ]
}

pub fn lookup(name: &str) -> Option<ExperimentInfo> {
    list_experiments().into_iter().find(|e| e.name == name)
}
