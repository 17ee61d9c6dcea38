//! `hyperpoly`: certification tables for hypercontractivity of subordinated
//! orthogonal-polynomial semigroups.
//!
//! Exit status: 0 when every requested certification passes, 1 when one
//! fails or a computation breaks down, 2 on a configuration error.

mod commands;
mod config;
mod table;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commands::Report;
use config::ConfigError;
use table::Table;

#[derive(Parser, Debug)]
#[command(name = "hyperpoly", version, about = "Certification tables for subordinated orthogonal-polynomial semigroups")]
struct Cli {
    /// Output directory, or `-` for stdout.
    #[arg(long, global = true, env = "HYPERPOLY_OUT", default_value = "hyperpoly-out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value = "both")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenfunction L^q norms against explicit sandwich bounds.
    Norms(commands::NormsArgs),
    /// Eigenfunction lower bounds for the subordinated semigroup.
    Bounds(commands::BoundsArgs),
    /// Growth rate of the norm ratio against its limit.
    Rates(commands::RatesArgs),
    /// Poisson subordination kernel identity.
    Kernel(commands::KernelArgs),
    /// Jacobi heat-kernel ultracontractive scaling.
    Ultra(commands::UltraArgs),
    /// Exact bounded / blow-up classification.
    Classify(commands::ClassifyArgs),
    /// Bilinear exponential test along the vertex ray.
    Bilinear(commands::BilinearArgs),
    /// Laguerre multiplier necessary condition.
    Parseval(commands::ParsevalArgs),
    /// Super- and weak-Poincaré rate transfer.
    Poincare(commands::PoincareArgs),
    /// Limit transitions and the degeneration certificate.
    Limits(commands::LimitsArgs),
    /// Run every certification with default parameters.
    CertifyAll(commands::CertifyAllArgs),
}

fn run_command(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Norms(a) => commands::norms(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Rates(a) => commands::rates(a),
        Command::Kernel(a) => commands::kernel(a),
        Command::Ultra(a) => commands::ultra(a),
        Command::Classify(a) => commands::classify(a),
        Command::Bilinear(a) => commands::bilinear(a),
        Command::Parseval(a) => commands::parseval(a),
        Command::Poincare(a) => commands::poincare(a),
        Command::Limits(a) => commands::limits(a),
        Command::CertifyAll(a) => commands::certify_all(a),
    }
}

fn write_tables(tables: &[Table], out: &Path, format: Format) -> Result<()> {
    let csv = matches!(format, Format::Csv | Format::Both);
    let jsonl = matches!(format, Format::Jsonl | Format::Both);
    if out == Path::new("-") {
        let mut stdout = io::stdout().lock();
        for (i, t) in tables.iter().enumerate() {
            if i > 0 {
                writeln!(stdout)?;
            }
            if csv {
                t.write_csv(&mut stdout)?;
            }
            if jsonl {
                t.write_jsonl(&mut stdout)?;
            }
        }
        return Ok(());
    }
    fs::create_dir_all(out)
        .map_err(|e| ConfigError(format!("cannot create output directory {}: {e}", out.display())))?;
    for t in tables {
        if csv {
            let path = out.join(format!("{}.csv", t.name));
            let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            t.write_csv(io::BufWriter::new(file))?;
        }
        if jsonl {
            let path = out.join(format!("{}.jsonl", t.name));
            let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = io::BufWriter::new(file);
            t.write_jsonl(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Rejected inputs, whether caught here or by the library's own checks.
fn is_config_error(e: &anyhow::Error) -> bool {
    use hyperpoly::Error as E;
    e.chain().any(|c| {
        c.is::<ConfigError>()
            || matches!(
                c.downcast_ref::<E>(),
                Some(E::InvalidParameter(_) | E::OutOfDomain { .. } | E::Hypothesis(_) | E::Inconsistent(_))
            )
    })
}

const MAX_FAILING_ROWS: usize = 20;

fn report_failures(report: &Report) {
    for t in &report.tables {
        let failing: Vec<_> = t.failing_rows().collect();
        if failing.is_empty() {
            continue;
        }
        eprintln!("failing rows in {} ({} of {}):", t.name, failing.len(), t.rows.len());
        eprintln!("  {}", t.columns.join(","));
        for row in failing.iter().take(MAX_FAILING_ROWS) {
            eprintln!("  {}", t.csv_line(row));
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run_command(&cli.command).and_then(|report| {
        write_tables(&report.tables, &cli.out, cli.format)?;
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            for note in &report.notes {
                eprintln!("{note}");
            }
            if cli.out != Path::new("-") {
                eprintln!("wrote {} table(s) to {}", report.tables.len(), cli.out.display());
            }
            if report.passed {
                eprintln!("certification passed");
                ExitCode::SUCCESS
            } else {
                report_failures(&report);
                eprintln!("certification failed");
                ExitCode::from(1)
            }
        }
        Err(e) if is_config_error(&e) => {
            eprintln!("configuration error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
