//! Verification suites behind `hecke verify` (`schema = hecke-verify/1`).

use std::time::Instant;

use hecke_core::charsum::{odd_terms, s2_direct, twisted_m_sum, PoissonEvaluator, TruncationPolicy};
use hecke_core::exec::Executor;
use hecke_core::gauss_sum::{g2_closed, g2_naive, probe_shifts};
use hecke_core::gint::{self, gcd, GaussianInt};
use hecke_core::series::{verify_factorization, SeriesPoint, VERIFICATION_K1};
use hecke_core::smooth::SmoothWeight;
use hecke_core::symbols::quadratic_symbol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::config::{RunConfig, Suite};
use crate::error::CliResult;
use crate::format::json_float;

pub const VERIFY_SCHEMA: &str = "hecke-verify/1";

/// Largest modulus norm in the Gauss-sum oracle.
pub const GAUSS_NORM_BOUND: u64 = 1500;
/// Gauss-sum agreement, relative to `N(n)`.
pub const GAUSS_TOLERANCE: f64 = 1e-6;
pub const TWIST_TRIPLES: usize = 300;
pub const TWIST_SEED: u64 = 2024;
/// Single-modulus identity: relative agreement and its truncation settings.
pub const SINGLE_TOLERANCE: f64 = 1e-8;
pub const SINGLE_EPS: f64 = 1e-14;
pub const SINGLE_K_CAP_SCALE: f64 = 2.0;
pub const SINGLE_X: [f64; 2] = [10.0, 100.0];
pub const CROSS_POINTS: [(f64, f64); 3] = [(200.0, 20.0), (2000.0, 100.0), (5000.0, 200.0)];
pub const CROSS_TOLERANCE: f64 = 1e-6;
pub const NEGATIVE_POINT: (f64, f64) = (2000.0, 100.0);
pub const NEGATIVE_FACTOR: f64 = 1e3;
pub const SERIES_POINTS: [(f64, f64); 2] = [(2.0, 2.0), (1.5, 1.5)];

#[derive(Clone, Debug, Default)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: Map<String, Value>,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self { name: name.into(), passed: true, ..Self::default() }
    }

    fn fail(&mut self, msg: String) {
        self.passed = false;
        self.failures.push(msg);
    }

    fn detail(&mut self, key: &str, v: Value) {
        self.details.insert(key.into(), v);
    }

    fn to_json(&self) -> Value {
        json!({ "name": self.name, "passed": self.passed, "details": self.details, "failures": self.failures })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Closed form against the defining sum for every primary `n` with
/// `N(n) <= bound`, at the twelve probe shifts of each `n`.
pub fn gauss_oracle(bound: u64) -> CliResult<Check> {
    let mut c = Check::new("gauss_closed_vs_naive");
    let mut worst: f64 = 0.0;
    let mut evals = 0u64;
    let ns = gint::primaries_up_to_norm(bound);
    for &n in &ns {
        let norm = n.norm()? as f64;
        for r in probe_shifts(n)? {
            let naive = g2_naive(r, n)?.float;
            let closed = g2_closed(r, n)?.float;
            let scaled = (naive - closed).abs() / norm;
            worst = worst.max(scaled);
            evals += 1;
            if scaled > GAUSS_TOLERANCE {
                c.fail(format!("n={n} r={r}: naive {naive} closed {closed}"));
            }
        }
    }
    c.detail("moduli", json!(ns.len()));
    c.detail("evaluations", json!(evals));
    c.detail("worst_scaled_error", json_float(worst));
    c.detail("tolerance", json_float(GAUSS_TOLERANCE));
    Ok(c)
}

/// `g2(r s, n) = conj((s/n)) g2(r, n)` as exact values on seeded random triples.
pub fn twist_identity(count: usize, seed: u64) -> CliResult<Check> {
    let mut c = Check::new("twist_identity");
    let ns = gint::primaries_up_to_norm(5000);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < count {
        let n = ns[rng.gen_range(0..ns.len())];
        let r = GaussianInt::new(rng.gen_range(-60..60), rng.gen_range(-60..60));
        let s = GaussianInt::new(rng.gen_range(-60..60), rng.gen_range(-60..60));
        if s.is_zero() || gcd(s, n)? != GaussianInt::ONE {
            continue;
        }
        let lhs = g2_closed(r * s, n)?.exact.expect("closed form is exact");
        let chi = quadratic_symbol(s, n)?.conj().as_real().expect("quadratic symbol is real");
        let rhs = g2_closed(r, n)?.exact.expect("closed form is exact").checked_scale(i64::from(chi));
        if rhs != Some(lhs) {
            c.fail(format!("r={r} s={s} n={n}"));
        }
        done += 1;
    }
    c.detail("triples", json!(count));
    c.detail("seed", json!(seed));
    Ok(c)
}

/// A left side below this fraction of `sum |W(N(m)/X)|` counts as cancelled.
pub const CANCELLED_FRACTION: f64 = 1e-6;
/// Agreement required where the left side cancels, as a fraction of that sum.
pub const CANCELLED_TOLERANCE: f64 = 1e-12;

/// Moduli for the single-modulus identity, split into the 20 largest-norm
/// primary `n` with `N(n) <= 200` whose left side is not cancelled at any
/// `X` in [`SINGLE_X`], and the cancelled ones met on the way. Cancellation
/// is exact: for `(i/n)_2 = -1` the map `m -> i m` flips every term, and at
/// small `X` a few symmetric groups of terms can sum to zero.
pub fn single_moduli(w: &SmoothWeight) -> CliResult<(Vec<GaussianInt>, Vec<GaussianInt>)> {
    let (mut kept, mut cancelled) = (Vec::new(), Vec::new());
    for n in gint::primaries_up_to_norm(200).into_iter().rev() {
        if kept.len() == 20 {
            break;
        }
        let mut live = true;
        for x in SINGLE_X {
            let scale: f64 = odd_terms(x, w).iter().map(|t| t.1.abs()).sum();
            live &= twisted_m_sum(n, x, w)?.abs() > CANCELLED_FRACTION * scale;
        }
        if live {
            kept.push(n);
        } else {
            cancelled.push(n);
        }
    }
    Ok((kept, cancelled))
}

/// Direct `m`-sum against the truncated dual sum, one modulus at a time.
pub fn single_modulus_identity<E: Executor>(w: &SmoothWeight, exec: &E) -> CliResult<Check> {
    let mut c = Check::new("single_modulus_identity");
    let policy = TruncationPolicy { eps_tail: SINGLE_EPS, k_cap_scale: SINGLE_K_CAP_SCALE, ..TruncationPolicy::default() };
    let eval = PoissonEvaluator::new(*w, policy, exec)?;
    let mut worst: f64 = 0.0;
    let (ns, cancelled) = single_moduli(w)?;
    if ns.len() < 20 {
        c.fail(format!("only {} usable moduli", ns.len()));
    }
    for &n in &ns {
        for x in SINGLE_X {
            let lhs = twisted_m_sum(n, x, w)?;
            let (rhs, _) = eval.dual_n_sum(n, x)?;
            let rel = (lhs - rhs).abs() / lhs.abs();
            worst = worst.max(rel);
            if !(rel <= SINGLE_TOLERANCE) {
                c.fail(format!("n={n} X={x}: {lhs} vs {rhs}"));
            }
        }
    }
    for &n in &cancelled {
        for x in SINGLE_X {
            let scale: f64 = odd_terms(x, w).iter().map(|t| t.1.abs()).sum();
            let lhs = twisted_m_sum(n, x, w)?;
            let (rhs, _) = eval.dual_n_sum(n, x)?;
            if !((lhs - rhs).abs() <= CANCELLED_TOLERANCE * scale) {
                c.fail(format!("cancelled n={n} X={x}: {lhs} vs {rhs}"));
            }
        }
    }
    c.detail("moduli", json!(ns.iter().map(|n| n.to_string()).collect::<Vec<_>>()));
    c.detail("cancelled", json!(cancelled.iter().map(|n| n.to_string()).collect::<Vec<_>>()));
    c.detail("worst_relative", json_float(worst));
    c.detail("tolerance", json_float(SINGLE_TOLERANCE));
    Ok(c)
}

/// `s2_direct` against `s2_poisson` at the fixed points.
pub fn cross_path<E: Executor>(config: &RunConfig, exec: &E) -> CliResult<Check> {
    let mut c = Check::new("cross_path");
    let (phi, w, policy) = (&config.phi, &config.w, &config.policy);
    let eval = PoissonEvaluator::new(*w, *policy, exec)?;
    let mut rows = Vec::new();
    for (x, y) in CROSS_POINTS {
        let direct = s2_direct(x, y, phi, w, policy, exec)?.value;
        let dual = eval.s2(x, y, phi, exec)?.value;
        let rel = (direct - dual).abs() / direct.abs();
        if !(rel <= CROSS_TOLERANCE) {
            c.fail(format!("({x},{y}): direct {direct} poisson {dual}"));
        }
        rows.push(json!({ "X": json_float(x), "Y": json_float(y), "direct": json_float(direct),
            "poisson": json_float(dual), "relative": json_float(rel) }));
    }
    c.detail("points", Value::Array(rows));
    c.detail("tolerance", json_float(CROSS_TOLERANCE));
    Ok(c)
}

/// Without the `(-1)^N(k)` sign the two paths must disagree by far more than
/// the cross-path tolerance.
pub fn negative_control<E: Executor>(config: &RunConfig, exec: &E) -> CliResult<Check> {
    let mut c = Check::new("negative_control");
    let (x, y) = NEGATIVE_POINT;
    let (phi, w) = (&config.phi, &config.w);
    let direct = s2_direct(x, y, phi, w, &config.policy, exec)?.value;
    let broken = TruncationPolicy { parity_sign: false, ..config.policy };
    let dual = PoissonEvaluator::new(*w, broken, exec)?.s2(x, y, phi, exec)?.value;
    let rel = (direct - dual).abs() / direct.abs();
    if !(rel > NEGATIVE_FACTOR * CROSS_TOLERANCE) {
        c.fail(format!("sign-free dual agrees too well: relative {rel}"));
    }
    c.detail("relative", json_float(rel));
    c.detail("required_above", json_float(NEGATIVE_FACTOR * CROSS_TOLERANCE));
    Ok(c)
}

/// The factorization of the double series at every `(k1, v, w)` point.
pub fn series_factorization() -> CliResult<Check> {
    let mut c = Check::new("series_factorization");
    let mut rows = Vec::new();
    for (v, w) in SERIES_POINTS {
        for k1 in VERIFICATION_K1 {
            let r = verify_factorization(&SeriesPoint::new(k1, v, w))?;
            if !r.passed {
                c.fail(format!("k1={k1} (v,w)=({v},{w}): delta {} budget {} relative {}", r.delta, r.budget, r.relative));
            }
            rows.push(json!({ "k1": k1.to_string(), "v": json_float(v), "w": json_float(w),
                "delta": json_float(r.delta), "budget": json_float(r.budget),
                "relative": json_float(r.relative), "passed": r.passed }));
        }
    }
    c.detail("points", Value::Array(rows));
    Ok(c)
}

pub fn run_suite<E: Executor>(suite: Suite, config: &RunConfig, exec: &E) -> CliResult<Vec<SuiteReport>> {
    let names: &[Suite] = match suite {
        Suite::All => &[Suite::Gauss, Suite::Poisson, Suite::Series],
        Suite::Gauss => &[Suite::Gauss],
        Suite::Poisson => &[Suite::Poisson],
        Suite::Series => &[Suite::Series],
    };
    let mut out = Vec::new();
    for &s in names {
        let t = Instant::now();
        let checks = match s {
            Suite::Gauss => vec![gauss_oracle(GAUSS_NORM_BOUND)?, twist_identity(TWIST_TRIPLES, TWIST_SEED)?],
            Suite::Poisson => vec![
                single_modulus_identity(&config.w, exec)?,
                cross_path(config, exec)?,
                negative_control(config, exec)?,
            ],
            Suite::Series => vec![series_factorization()?],
            Suite::All => unreachable!(),
        };
        let seconds = if config.timings { t.elapsed().as_secs_f64() } else { 0.0 };
        out.push(SuiteReport { name: s.name(), checks, seconds });
    }
    Ok(out)
}

pub fn to_json(config: &RunConfig, suites: &[SuiteReport]) -> Value {
    let suites_json: Vec<Value> = suites
        .iter()
        .map(|s| json!({ "name": s.name, "passed": s.passed(), "seconds": json_float(s.seconds),
            "checks": s.checks.iter().map(Check::to_json).collect::<Vec<_>>() }))
        .collect();
    json!({
        "schema": VERIFY_SCHEMA,
        "config": crate::report::config_json(config),
        "passed": suites.iter().all(SuiteReport::passed),
        "suites": suites_json,
    })
}

pub fn failure_count(suites: &[SuiteReport]) -> usize {
    suites.iter().flat_map(|s| &s.checks).filter(|c| !c.passed).count()
}
