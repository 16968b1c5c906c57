//! `(X, Y)` grid scans written as CSV (`schema = hecke-scan/1`).
//!
//! Layout: a `# schema=hecke-scan/1` line, one `# key=value` line per
//! resolved config entry, the header [`COLUMNS`], then one row per `X`.
//! Floats use 17 significant digits. Each row is flushed as soon as it is
//! written, so an interrupted scan leaves every finished row on disk.

use std::io::Write;
use std::time::Instant;

use hecke_core::charsum::{
    candidate_scale, error_envelope, m0_with_transform, s2_direct, zeta_k, PoissonEvaluator,
};
use hecke_core::exec::Executor;
use hecke_core::smooth::{mellin, w_tilde};
use num_complex::Complex64;

use crate::config::{Method, RunConfig};
use crate::error::{CliError, CliResult};
use crate::format::float;

pub const SCAN_SCHEMA: &str = "hecke-scan/1";

pub const COLUMNS: [&str; 10] = [
    "X",
    "Y",
    "s2",
    "m0",
    "cand_paper_pointwise",
    "cand_mellin",
    "ratio_s2_m0",
    "err_envelope_theta",
    "seconds",
    "terms",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    pub y: f64,
    pub s2: f64,
    pub m0: f64,
    pub cand_paper_pointwise: f64,
    pub cand_mellin: f64,
    pub ratio_s2_m0: f64,
    pub err_envelope_theta: f64,
    pub seconds: f64,
    pub terms: u64,
}

impl ScanRow {
    pub fn to_csv(&self) -> String {
        let floats = [
            self.x,
            self.y,
            self.s2,
            self.m0,
            self.cand_paper_pointwise,
            self.cand_mellin,
            self.ratio_s2_m0,
            self.err_envelope_theta,
            self.seconds,
        ];
        let mut fields: Vec<String> = floats.iter().map(|&v| float(v)).collect();
        fields.push(self.terms.to_string());
        fields.join(",")
    }
}

pub fn write_preamble<W: Write>(config: &RunConfig, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "# schema={SCAN_SCHEMA}")?;
    for (k, v) in config.pairs() {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "{}", COLUMNS.join(","))?;
    out.flush()
}

/// Run the scan, writing each row to `out` as it completes.
pub fn run_scan<E: Executor, W: Write>(config: &RunConfig, exec: &E, out: &mut W) -> CliResult<Vec<ScanRow>> {
    config.validate()?;
    let grid = config.x_grid.as_ref().ok_or_else(|| CliError::Usage("--x-grid is required".into()))?;
    let rule = config.y_rule.ok_or_else(|| CliError::Usage("--y-rule is required".into()))?;
    if config.method == Method::Both {
        return Err(CliError::Usage("scan takes --method direct or poisson".into()));
    }
    let xs = grid.points();
    if xs.is_empty() {
        return Err(CliError::Usage("empty X grid".into()));
    }
    let (phi, w, policy) = (&config.phi, &config.w, &config.policy);
    let w0 = w_tilde(w, 0.0)?;
    let zeta2 = zeta_k(2.0)?;
    let phi_half = mellin(phi, Complex64::new(0.5, 0.0))?.re;
    let evaluator = match config.method {
        Method::Poisson => Some(PoissonEvaluator::new(*w, *policy, exec)?),
        _ => None,
    };
    write_preamble(config, out)?;
    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        let y = rule.y_for(x);
        let t = Instant::now();
        let (s2, terms) = match &evaluator {
            Some(e) => {
                let d = e.s2(x, y, phi, exec)?;
                (d.value, d.pairs)
            }
            None => {
                let d = s2_direct(x, y, phi, w, policy, exec)?;
                (d.value, d.pairs)
            }
        };
        let seconds = if config.timings { t.elapsed().as_secs_f64() } else { 0.0 };
        let m0 = m0_with_transform(x, y, phi, w0)?;
        let scale = candidate_scale(x, y, w0, zeta2);
        let row = ScanRow {
            x,
            y,
            s2,
            m0,
            cand_paper_pointwise: scale * phi.eval(0.5),
            cand_mellin: scale * phi_half,
            ratio_s2_m0: s2 / m0,
            err_envelope_theta: error_envelope(x, y),
            seconds,
            terms,
        };
        writeln!(out, "{}", row.to_csv())?;
        out.flush()?;
        rows.push(row);
    }
    Ok(rows)
}
