use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use maxface::commands::{self, MeshRequest, RunReport, Subject};
use maxface::roots::{RootCache, DEFAULT_PATH};
use maxface::{error_code, UsageError};

/// Checks and exports for complete maximal surfaces in Lorentz-Minkowski space.
#[derive(Parser, Debug)]
#[command(name = "maxface", version)]
struct Cli {
    /// Root cache for klein-1 and klein-2.
    #[arg(long, global = true, default_value = DEFAULT_PATH)]
    roots: PathBuf,
    /// Add the wall time to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog entries.
    List,
    /// Print an entry's Weierstrass data and expectations.
    Describe { name: String },
    /// Run every check on an entry and compare with its expectations.
    Check {
        /// Catalog entry, `name` or `name:p1,p2,...`.
        name: Option<String>,
        /// Custom Weierstrass data as JSON.
        #[arg(long, conflicts_with = "name")]
        data: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Period report with closed-form cross-checks.
    Periods {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        data: Option<PathBuf>,
    },
    /// Solve h(r) = 0 for the Klein-bottle family.
    SolveKlein {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Include the bracketing scan.
        #[arg(long)]
        scan: bool,
    },
    /// Tabulate h and h' as CSV.
    PlotH {
        #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
        min: f64,
        #[arg(long, default_value_t = 0.95, allow_hyphen_values = true)]
        max: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Output file; stdout when omitted (the report then goes to stderr).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export an OBJ mesh of the surface.
    Mesh {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        data: Option<PathBuf>,
        /// Nodes per direction and sheet.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Inner radius |z|.
        #[arg(long, default_value_t = (-2.5f64).exp())]
        rmin: f64,
        /// Outer radius |z|.
        #[arg(long, default_value_t = 2.5f64.exp())]
        rmax: f64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the singular set to `<out>.singular.json`.
        #[arg(long)]
        singular: bool,
        /// Allow branched data.
        #[arg(long)]
        demo: bool,
    },
    /// Run the full acceptance suite.
    VerifyAll,
}

fn subject(name: Option<String>, data: Option<PathBuf>, roots: &RootCache) -> Result<Subject> {
    match (name, data) {
        (Some(n), None) => Subject::from_catalog(&n, roots),
        (None, Some(p)) => Subject::from_file(&p),
        _ => bail!(UsageError("give a catalog name or --data FILE".into())),
    }
}

fn run(cli: Cli) -> Result<(RunReport, bool)> {
    let roots = RootCache::new(&cli.roots);
    let mut report_to_stderr = false;
    let report = commands::timed(cli.timing, || match cli.command {
        Command::List => Ok(commands::list()),
        Command::Describe { name } => commands::describe(&name, &roots),
        Command::Check { name, data, tol } => commands::check(&subject(name, data, &roots)?, tol),
        Command::Periods { name, data } => commands::periods(&subject(name, data, &roots)?),
        Command::SolveKlein { tol, scan } => commands::solve_klein(tol, scan),
        Command::PlotH { min, max, samples, out } => {
            report_to_stderr = out.is_none();
            commands::plot_h(min, max, samples, out.as_deref())
        }
        Command::Mesh { name, data, grid, rmin, rmax, out, singular, demo } => {
            let s = subject(name, data, &roots)?;
            commands::mesh(&s, &MeshRequest { grid, rmin, rmax, out, singular, demo })
        }
        Command::VerifyAll => commands::verify_all(&roots),
    })?;
    Ok((report, report_to_stderr))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok((report, to_stderr)) => {
            let text = serde_json::to_string_pretty(&report).expect("reports serialize");
            // a closed pipe downstream is not our failure
            let _ = if to_stderr { writeln!(std::io::stderr(), "{text}") } else { writeln!(std::io::stdout(), "{text}") };
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("check failed: {}{}", c.name, if c.detail.is_null() { String::new() } else { format!(": {}", c.detail) });
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e) as u8)
        }
    }
}
