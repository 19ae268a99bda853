use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use minitube::io::{
    analyze, bound_record, bound_table, conjecture_record, conjecture_table, ModulusReport,
    RowFailures, TubeSpec, BOUND_HEADER, CONJECTURE_HEADER,
};
use minitube::modulus::{grid_module_estimate, DomainDescriptor, RingDomain};
use minitube::Error;

#[derive(Parser)]
#[command(name = "minitube", version, about = "Minimal tubes over an annulus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a tube config and write a JSON report.
    Analyze {
        config: PathBuf,
        /// Heights at which to cut horizontal sections.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        sections: Vec<f64>,
        /// Points per section polyline.
        #[arg(long, default_value_t = 128)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a sweep as CSV.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Estimate the module of a ring domain on a grid.
    Modulus {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SweepKind {
    /// lambda, lnR0(lambda), mod Gamma(D)(lambda).
    Bound {
        #[arg(long)]
        lambda_min: f64,
        #[arg(long)]
        lambda_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Calibrated two-slit candidates against lnR0.
    Conjecture {
        #[arg(long)]
        q_min: f64,
        #[arg(long)]
        q_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct Meta {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
}

#[derive(Serialize)]
struct Envelope<T> {
    meta: Meta,
    report: T,
}

fn envelope<T>(command: &'static str, report: T) -> Envelope<T> {
    Envelope {
        meta: Meta {
            tool: "minitube",
            version: env!("CARGO_PKG_VERSION"),
            command,
        },
        report,
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_csv<const N: usize>(out: &Path, header: [&str; N], rows: Vec<[String; N]>) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    write_atomic(out, &w.into_inner()?)
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".failures.csv");
    out.with_file_name(name)
}

fn emit_failures(out: &Path, key: &str, failures: &RowFailures) -> Result<()> {
    let path = sidecar(out);
    if failures.is_empty() {
        if path.exists() {
            fs::remove_file(&path)?;
        }
        return Ok(());
    }
    for (x, e) in failures {
        log::warn!("{key}={x}: {e}");
    }
    let rows = failures
        .iter()
        .map(|(x, e)| [minitube::io::fmt_num(*x), e.clone()])
        .collect();
    emit_csv(&path, [key, "error"], rows)
}

/// Errors that mean the data are not a tube satisfying the hypotheses.
fn is_hypothesis_failure(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::NotATube { .. }
                | Error::GaussVanishes { .. }
                | Error::NonPositiveFlux { .. }
                | Error::Unbounded
                | Error::ZeroInAnnulus
        )
    )
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze {
            config,
            sections,
            points,
            out,
        } => {
            let spec = TubeSpec::from_json(&read(&config)?)
                .with_context(|| format!("invalid config {}", config.display()))?;
            let report = analyze(&spec, &sections, points)?;
            let failed = report.hypothesis_failed();
            emit_json(&envelope("analyze", &report), out.as_deref())?;
            if failed {
                log::warn!("hypothesis failure: {:?}", report.verdict);
                return Ok(ExitCode::from(2));
            }
        }
        Command::Sweep { kind } => match kind {
            SweepKind::Bound {
                lambda_min,
                lambda_max,
                steps,
                out,
            } => {
                let (rows, failures) = bound_table(lambda_min, lambda_max, steps)?;
                emit_csv(&out, BOUND_HEADER, rows.iter().map(bound_record).collect())?;
                emit_failures(&out, "lambda", &failures)?;
            }
            SweepKind::Conjecture {
                q_min,
                q_max,
                steps,
                out,
            } => {
                let table = conjecture_table(q_min, q_max, steps)?;
                emit_csv(
                    &out,
                    CONJECTURE_HEADER,
                    table.rows.iter().map(conjecture_record).collect(),
                )?;
                emit_failures(&out, "q", &table.failures)?;
            }
        },
        Command::Modulus { domain, h, out } => {
            let text = read(&domain)?;
            let desc: DomainDescriptor = serde_json::from_str(&text)
                .with_context(|| format!("invalid domain descriptor {}", domain.display()))?;
            let ring = RingDomain::from_descriptor(desc)?;
            let est = grid_module_estimate(&ring, h)?;
            emit_json(&envelope("modulus", ModulusReport::new(h, &est)), out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_hypothesis_failure(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
