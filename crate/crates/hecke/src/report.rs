//! `s2` runs and their JSON report (`schema = hecke-sum/1`).

use std::time::Instant;

use hecke_core::charsum::{
    error_envelope, main_term_candidates, s2_direct, theta, DirectSum, DualSum, MainTermCandidates, PoissonEvaluator,
    TruncationPolicy,
};
use hecke_core::exec::Executor;
use hecke_core::smooth::SmoothWeight;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::format::{json_float, json_opt};

pub const SUM_SCHEMA: &str = "hecke-sum/1";

#[derive(Clone, Debug)]
pub struct SumReport {
    pub config: RunConfig,
    pub x: f64,
    pub y: f64,
    pub direct: Option<DirectSum>,
    pub poisson: Option<DualSum>,
    pub candidates: MainTermCandidates,
    pub direct_seconds: f64,
    pub poisson_seconds: f64,
}

impl SumReport {
    pub fn m0(&self) -> f64 {
        self.candidates.m0_direct
    }

    /// The dual value when present, otherwise the direct one.
    pub fn s2(&self) -> f64 {
        self.poisson.map(|p| p.value).or(self.direct.map(|d| d.value)).unwrap_or(f64::NAN)
    }

    /// `(absolute, relative)` gap between the two paths, if both ran.
    pub fn discrepancy(&self) -> Option<(f64, f64)> {
        let (d, p) = (self.direct?.value, self.poisson?.value);
        let abs = (d - p).abs();
        Some((abs, abs / d.abs()))
    }

    pub fn to_json(&self) -> Value {
        let timings = self.config.timings;
        let secs = |s: f64| json_float(if timings { s } else { 0.0 });
        let discrepancy = self
            .discrepancy()
            .map_or(Value::Null, |(a, r)| json!({ "absolute": json_float(a), "relative": json_float(r) }));
        let mut candidates = Map::new();
        for (k, v) in self.candidates.as_map() {
            candidates.insert(k.to_string(), json_float(v));
        }
        json!({
            "schema": SUM_SCHEMA,
            "config": config_json(&self.config),
            "inputs": {
                "X": json_float(self.x),
                "Y": json_float(self.y),
                "phi": weight_json(&self.config.phi),
                "w": weight_json(&self.config.w),
                "policy": policy_json(&self.config.policy),
            },
            "results": {
                "s2_direct": json_opt(self.direct.map(|d| d.value)),
                "s2_poisson": json_opt(self.poisson.map(|p| p.value)),
                "discrepancy": discrepancy,
                "m0": json_float(self.m0()),
                "k0_term": json_opt(self.poisson.map(|p| p.k0_term)),
                "ratio_s2_m0": json_float(self.s2() / self.m0()),
                "candidates": candidates,
                "closest_candidate": self.candidates.closest(),
                "theta": format!("{}/{}", theta().0, theta().1),
                "err_envelope_theta": json_float(error_envelope(self.x, self.y)),
            },
            "counts": {
                "moduli": self.direct.map(|d| d.moduli).or(self.poisson.map(|p| p.moduli)),
                "direct_pairs": self.direct.map(|d| d.pairs),
                "poisson_pairs": self.poisson.map(|p| p.pairs),
            },
            "timings": {
                "direct_seconds": secs(self.direct_seconds),
                "poisson_seconds": secs(self.poisson_seconds),
            },
        })
    }
}

pub fn config_json(c: &RunConfig) -> Value {
    Value::Object(c.pairs().into_iter().map(|(k, v)| (k.to_string(), Value::String(v))).collect())
}

pub fn weight_json(w: &SmoothWeight) -> Value {
    let (lo, hi) = w.support();
    json!({ "kind": w.kind().name(), "lo": json_float(lo), "hi": json_float(hi), "amplitude": json_float(w.amplitude()) })
}

pub fn policy_json(p: &TruncationPolicy) -> Value {
    json!({
        "eps_tail": json_float(p.eps_tail),
        "k_cap_scale": json_float(p.k_cap_scale),
        "n_norm_cap": p.n_norm_cap,
        "direct_budget": p.direct_budget,
        "dual_budget": p.dual_budget,
        "parity_sign": p.parity_sign,
    })
}

/// Run the `s2` command for a resolved configuration.
pub fn run_sum<E: Executor>(config: &RunConfig, exec: &E) -> CliResult<SumReport> {
    config.validate()?;
    let x = config.x.ok_or_else(|| CliError::Usage("--x is required".into()))?;
    let y = config.y.ok_or_else(|| CliError::Usage("--y is required".into()))?;
    let (phi, w, policy) = (&config.phi, &config.w, &config.policy);
    let mut direct = None;
    let mut direct_seconds = 0.0;
    if config.method.runs_direct() {
        let t = Instant::now();
        direct = Some(s2_direct(x, y, phi, w, policy, exec)?);
        direct_seconds = t.elapsed().as_secs_f64();
    }
    let mut poisson = None;
    let mut poisson_seconds = 0.0;
    if config.method.runs_poisson() {
        let t = Instant::now();
        let eval = PoissonEvaluator::new(*w, *policy, exec)?;
        poisson = Some(eval.s2(x, y, phi, exec)?);
        poisson_seconds = t.elapsed().as_secs_f64();
    }
    let candidates = main_term_candidates(x, y, phi, w)?;
    Ok(SumReport { config: config.clone(), x, y, direct, poisson, candidates, direct_seconds, poisson_seconds })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
