use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hecke::config::RunConfig;
use hecke::error::{CliError, CliResult};
use hecke::exec::Pool;
use hecke::{report, scan, verify};
use hecke_core::symbols::{quadratic_symbol, quartic_symbol};
use hecke_core::{GaussianInt, SymbolValue};

#[derive(Parser)]
#[command(name = "hecke", version, about = "Quadratic character sums over the Gaussian integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quartic and quadratic residue symbols (a/n).
    Symbol {
        /// Numerator as RE,IM.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Odd-norm denominator as RE,IM.
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Evaluate S2(X, Y) and write a JSON report.
    S2 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sum: SumArgs,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// Evaluate S2 along a grid of X and write CSV.
    Scan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sum: SumArgs,
        /// geometric:START:STOP:COUNT or a comma-separated list.
        #[arg(long)]
        x_grid: Option<String>,
        /// fixed:V or power:ALPHA.
        #[arg(long)]
        y_rule: Option<String>,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// gauss, poisson, series or all.
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Flat key = value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (0: one per core). Defaults to $HECKE_THREADS.
    #[arg(long)]
    threads: Option<String>,
    /// on or off; off writes every timing as 0.
    #[arg(long)]
    timings: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SumArgs {
    /// direct, poisson or both.
    #[arg(long)]
    method: Option<String>,
    /// Support of Phi as LO,HI.
    #[arg(long)]
    phi_support: Option<String>,
    /// Support of W as LO,HI.
    #[arg(long)]
    w_support: Option<String>,
    #[arg(long)]
    eps_tail: Option<String>,
    #[arg(long)]
    k_cap_scale: Option<String>,
}

fn resolve(common: &Common, flags: &[(&str, &Option<String>)]) -> CliResult<RunConfig> {
    let mut config = RunConfig::from_env()?;
    if let Some(path) = &common.config {
        config.apply_file(path)?;
    }
    let shared = [("threads", &common.threads), ("timings", &common.timings)];
    for (key, value) in shared.iter().chain(flags) {
        if let Some(v) = value {
            config.set(key, v).map_err(CliError::Usage)?;
        }
    }
    Ok(config)
}

fn sum_flags(s: &SumArgs) -> [(&'static str, &Option<String>); 5] {
    [
        ("method", &s.method),
        ("phi_support", &s.phi_support),
        ("w_support", &s.w_support),
        ("eps_tail", &s.eps_tail),
        ("k_cap_scale", &s.k_cap_scale),
    ]
}

fn output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_text(path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    let mut out = output(path)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn parse_gint(flag: &str, s: &str) -> CliResult<GaussianInt> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts[..] {
        [re, im] => match (re.parse::<i64>(), im.parse::<i64>()) {
            (Ok(re), Ok(im)) => Ok(GaussianInt::new(re, im)),
            _ => Err(CliError::Usage(format!("--{flag}: expected integers RE,IM, got {s:?}"))),
        },
        _ => Err(CliError::Usage(format!("--{flag}: expected RE,IM, got {s:?}"))),
    }
}

fn symbol_text(v: SymbolValue) -> &'static str {
    match v {
        SymbolValue::Zero => "0",
        SymbolValue::One => "1",
        SymbolValue::MinusOne => "-1",
        SymbolValue::I => "i",
        SymbolValue::MinusI => "-i",
    }
}

fn display_path(p: &Option<PathBuf>) -> String {
    p.as_deref().map_or_else(|| "stdout".into(), |p: &Path| p.display().to_string())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Symbol { a, n } => {
            let (a, n) = (parse_gint("a", &a)?, parse_gint("n", &n)?);
            let quartic = quartic_symbol(a, n)?;
            let quadratic = quadratic_symbol(a, n)?;
            println!("quartic={}", symbol_text(quartic));
            println!("quadratic={}", symbol_text(quadratic));
        }
        Command::S2 { common, sum, x, y } => {
            let mut flags = vec![("x", &x), ("y", &y)];
            flags.extend(sum_flags(&sum));
            let config = resolve(&common, &flags)?;
            let pool = Pool::new(config.threads)?;
            let r = report::run_sum(&config, &pool)?;
            write_text(&common.out, &report::render(&r.to_json()))?;
            if let Some(d) = r.direct {
                eprintln!("s2_direct={}", d.value);
            }
            if let Some(p) = r.poisson {
                eprintln!("s2_poisson={}", p.value);
            }
            if let Some((abs, rel)) = r.discrepancy() {
                eprintln!("discrepancy absolute={abs:e} relative={rel:e}");
            }
        }
        Command::Scan { common, sum, x_grid, y_rule } => {
            let mut flags = vec![("x_grid", &x_grid), ("y_rule", &y_rule)];
            flags.extend(sum_flags(&sum));
            let config = resolve(&common, &flags)?;
            let pool = Pool::new(config.threads)?;
            let mut out = output(&common.out)?;
            let rows = scan::run_scan(&config, &pool, &mut out)?;
            eprintln!("{} rows written to {}", rows.len(), display_path(&common.out));
        }
        Command::Verify { common, suite } => {
            let config = resolve(&common, &[("suite", &suite)])?;
            let pool = Pool::new(config.threads)?;
            let suites = verify::run_suite(config.suite, &config, &pool)?;
            write_text(&common.out, &report::render(&verify::to_json(&config, &suites)))?;
            for s in &suites {
                for c in &s.checks {
                    eprintln!("{}/{}: {}", s.name, c.name, if c.passed { "pass" } else { "FAIL" });
                }
            }
            let failed = verify::failure_count(&suites);
            if failed > 0 {
                return Err(CliError::VerifyFailed(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hecke: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
