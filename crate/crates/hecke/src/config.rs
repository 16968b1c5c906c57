//! Run configuration: a flat `key = value` file, overridden by flags.
//!
//! Every value passes through [`RunConfig::set`], so the file and the flags
//! share one parser. [`RunConfig::pairs`] gives the resolved configuration
//! back in the same syntax; it is what reports embed.

use std::fmt;
use std::path::Path;

use hecke_core::charsum::TruncationPolicy;
use hecke_core::smooth::{SmoothWeight, WeightKind};

use crate::error::{CliError, CliResult};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "HECKE_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    Direct,
    #[default]
    Poisson,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Poisson => "poisson",
            Method::Both => "both",
        }
    }

    pub fn runs_direct(self) -> bool {
        self != Method::Poisson
    }

    pub fn runs_poisson(self) -> bool {
        self != Method::Direct
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Suite {
    Gauss,
    Poisson,
    Series,
    #[default]
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Gauss => "gauss",
            Suite::Poisson => "poisson",
            Suite::Series => "series",
            Suite::All => "all",
        }
    }
}

/// Values of `X` in a scan.
#[derive(Clone, Debug, PartialEq)]
pub enum XGrid {
    /// `count` points from `start` to `stop` with constant ratio.
    Geometric { start: f64, stop: f64, count: usize },
    List(Vec<f64>),
}

impl XGrid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            XGrid::List(xs) => xs.clone(),
            XGrid::Geometric { start, count: 1, .. } => vec![*start],
            &XGrid::Geometric { start, stop, count } => (0..count)
                .map(|j| if j + 1 == count { stop } else { start * (stop / start).powf(j as f64 / (count - 1) as f64) })
                .collect(),
        }
    }
}

impl fmt::Display for XGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XGrid::Geometric { start, stop, count } => write!(f, "geometric:{start}:{stop}:{count}"),
            XGrid::List(xs) => write!(f, "{}", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        }
    }
}

/// How `Y` follows `X` in a scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum YRule {
    Fixed(f64),
    Power(f64),
}

impl YRule {
    pub fn y_for(self, x: f64) -> f64 {
        match self {
            YRule::Fixed(y) => y,
            YRule::Power(a) if a == 0.5 => x.sqrt(),
            YRule::Power(a) => x.powf(a),
        }
    }
}

impl fmt::Display for YRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YRule::Fixed(y) => write!(f, "fixed:{y}"),
            YRule::Power(a) => write!(f, "power:{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub method: Method,
    pub phi: SmoothWeight,
    pub w: SmoothWeight,
    pub policy: TruncationPolicy,
    /// 0 means one worker per core. Not embedded in outputs, which do not
    /// depend on it.
    pub threads: usize,
    pub x_grid: Option<XGrid>,
    pub y_rule: Option<YRule>,
    pub suite: Suite,
    /// When off, every timing is written as 0 so outputs are reproducible.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            x: None,
            y: None,
            method: Method::default(),
            phi: SmoothWeight::default(),
            w: SmoothWeight::default(),
            policy: TruncationPolicy::default(),
            threads: 0,
            x_grid: None,
            y_rule: None,
            suite: Suite::default(),
            timings: true,
        }
    }
}

/// Keys accepted by [`RunConfig::set`], in output order.
pub const KEYS: [&str; 16] = [
    "x",
    "y",
    "method",
    "phi_support",
    "w_support",
    "eps_tail",
    "k_cap_scale",
    "n_norm_cap",
    "direct_budget",
    "dual_budget",
    "parity_sign",
    "x_grid",
    "y_rule",
    "suite",
    "timings",
    "threads",
];

fn bad(key: &str, value: &str, why: &str) -> String {
    format!("invalid value {value:?} for {key}: {why}")
}

fn positive(key: &str, value: &str) -> Result<f64, String> {
    match value.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(bad(key, value, "expected a positive number")),
    }
}

fn count(key: &str, value: &str) -> Result<u64, String> {
    let v = positive(key, value)?;
    if v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(bad(key, value, "expected a positive integer"));
    }
    Ok(v as u64)
}

fn support(key: &str, value: &str) -> Result<SmoothWeight, String> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    let [lo, hi] = parts[..] else {
        return Err(bad(key, value, "expected lo,hi"));
    };
    let (lo, hi) = match (lo.parse::<f64>(), hi.parse::<f64>()) {
        (Ok(lo), Ok(hi)) => (lo, hi),
        _ => return Err(bad(key, value, "expected two numbers")),
    };
    SmoothWeight::new(WeightKind::Bump, lo, hi, 1.0).map_err(|e| bad(key, value, &e.to_string()))
}

fn switch(key: &str, value: &str) -> Result<bool, String> {
    match value.trim() {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        _ => Err(bad(key, value, "expected on or off")),
    }
}

fn x_grid(value: &str) -> Result<XGrid, String> {
    let v = value.trim();
    if let Some(rest) = v.strip_prefix("geometric:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(bad("x_grid", value, "expected geometric:START:STOP:COUNT"));
        };
        let start = positive("x_grid", a)?;
        let stop = positive("x_grid", b)?;
        let count = count("x_grid", c)? as usize;
        if stop < start {
            return Err(bad("x_grid", value, "STOP below START"));
        }
        return Ok(XGrid::Geometric { start, stop, count });
    }
    let xs = v.split(',').map(|p| positive("x_grid", p)).collect::<Result<Vec<f64>, String>>()?;
    Ok(XGrid::List(xs))
}

fn y_rule(value: &str) -> Result<YRule, String> {
    let v = value.trim();
    if let Some(y) = v.strip_prefix("fixed:") {
        return Ok(YRule::Fixed(positive("y_rule", y)?));
    }
    if let Some(a) = v.strip_prefix("power:") {
        return Ok(YRule::Power(positive("y_rule", a)?));
    }
    Err(bad("y_rule", value, "expected fixed:V or power:ALPHA"))
}

impl RunConfig {
    /// Defaults, with the worker count taken from the environment.
    pub fn from_env() -> CliResult<Self> {
        let mut c = Self::default();
        if let Ok(v) = std::env::var(THREADS_ENV) {
            c.set("threads", &v).map_err(|m| CliError::Usage(format!("{THREADS_ENV}: {m}")))?;
        }
        Ok(c)
    }

    /// Set one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key {
            "x" => self.x = Some(positive(key, v)?),
            "y" => self.y = Some(positive(key, v)?),
            "method" => {
                self.method = match v {
                    "direct" => Method::Direct,
                    "poisson" => Method::Poisson,
                    "both" => Method::Both,
                    _ => return Err(bad(key, v, "expected direct, poisson or both")),
                }
            }
            "phi_support" => self.phi = support(key, v)?,
            "w_support" => self.w = support(key, v)?,
            "eps_tail" => self.policy.eps_tail = positive(key, v)?,
            "k_cap_scale" => self.policy.k_cap_scale = positive(key, v)?,
            "n_norm_cap" => self.policy.n_norm_cap = count(key, v)?,
            "direct_budget" => self.policy.direct_budget = count(key, v)?,
            "dual_budget" => self.policy.dual_budget = count(key, v)?,
            "parity_sign" => self.policy.parity_sign = switch(key, v)?,
            "x_grid" => self.x_grid = Some(x_grid(v)?),
            "y_rule" => self.y_rule = Some(y_rule(v)?),
            "suite" => {
                self.suite = match v {
                    "gauss" => Suite::Gauss,
                    "poisson" => Suite::Poisson,
                    "series" => Suite::Series,
                    "all" => Suite::All,
                    _ => return Err(bad(key, v, "expected gauss, poisson, series or all")),
                }
            }
            "timings" => self.timings = switch(key, v)?,
            "threads" => {
                self.threads = v.parse::<usize>().map_err(|_| bad(key, v, "expected a non-negative integer"))?
            }
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Apply a flat config text: `key = value` lines, `#` comments, blank lines.
    pub fn apply_text(&mut self, text: &str) -> CliResult<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config { line: i + 1, message: "expected key = value".into() });
            };
            self.set(key.trim(), value).map_err(|message| CliError::Config { line: i + 1, message })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    /// The resolved configuration, as `(key, value)` pairs that [`Self::set`]
    /// accepts. Unset optional keys and `threads` are left out.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let sup = |w: &SmoothWeight| {
            let (lo, hi) = w.support();
            format!("{lo},{hi}")
        };
        let on = |b: bool| if b { "on" } else { "off" }.to_string();
        let mut out = Vec::new();
        if let Some(x) = self.x {
            out.push(("x", x.to_string()));
        }
        if let Some(y) = self.y {
            out.push(("y", y.to_string()));
        }
        out.push(("method", self.method.name().to_string()));
        out.push(("phi_support", sup(&self.phi)));
        out.push(("w_support", sup(&self.w)));
        out.push(("eps_tail", self.policy.eps_tail.to_string()));
        out.push(("k_cap_scale", self.policy.k_cap_scale.to_string()));
        out.push(("n_norm_cap", self.policy.n_norm_cap.to_string()));
        out.push(("direct_budget", self.policy.direct_budget.to_string()));
        out.push(("dual_budget", self.policy.dual_budget.to_string()));
        out.push(("parity_sign", on(self.policy.parity_sign)));
        if let Some(g) = &self.x_grid {
            out.push(("x_grid", g.to_string()));
        }
        if let Some(r) = self.y_rule {
            out.push(("y_rule", r.to_string()));
        }
        out.push(("suite", self.suite.name().to_string()));
        out.push(("timings", on(self.timings)));
        out
    }

    /// [`Self::pairs`] as config-file text.
    pub fn to_text(&self) -> String {
        self.pairs().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn validate(&self) -> CliResult<()> {
        self.policy.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = RunConfig::default();
        c.apply_text("x = 2e3\ny=100 # comment\nmethod = both\nphi_support = 0.25, 1.5\nx_grid = geometric:1e4:1e6:3\ny_rule = power:0.5\neps_tail = 1e-12\ntimings = off\n")
            .unwrap();
        let mut back = RunConfig::default();
        back.apply_text(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.x, Some(2000.0));
        assert_eq!(c.phi.support(), (0.25, 1.5));
    }

    #[test]
    fn rejects_bad_lines() {
        let mut c = RunConfig::default();
        assert!(matches!(c.apply_text("x 3"), Err(CliError::Config { line: 1, .. })));
        assert!(matches!(c.apply_text("\nfoo = 1"), Err(CliError::Config { line: 2, .. })));
        assert!(c.set("y", "-1").is_err());
        assert!(c.set("phi_support", "1,0.5").is_err());
        assert!(c.set("n_norm_cap", "1.5").is_err());
    }

    #[test]
    fn grids() {
        let g = x_grid("geometric:1e4:1e6:3").unwrap();
        assert_eq!(g.points(), vec![1e4, 1e5, 1e6]);
        assert_eq!(x_grid("5,6").unwrap().points(), vec![5.0, 6.0]);
        assert_eq!(YRule::Power(0.5).y_for(1e6), 1e3);
        assert_eq!(YRule::Fixed(7.0).y_for(1e6), 7.0);
    }
}
