//! arakelov: Hodge–Arakelov numerical invariants of elliptic fibrations.
//!
//! Subcommands: `analyze` (exact pipeline and identity checks), `monodromy`
//! (numeric Picard–Fuchs transport against the Kodaira table), `corpus`
//! (regression table over a directory of family specs). Set `ARAKELOV_LOG`
//! for verbosity.

use std::path::PathBuf;
use std::process::ExitCode;

use arakelov::error::Error;
use arakelov::picard_fuchs::PfOptions;
use clap::{Args, Parser, Subcommand};

mod run;
mod spec;

use run::{EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK};

#[derive(Parser)]
#[command(name = "arakelov", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON (default)
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit a compact text summary
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact pipeline on a family spec and check its identities
    Analyze {
        /// TOML family spec
        spec: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify local monodromy numerically against the Kodaira predictions
    Monodromy {
        /// TOML family spec (weierstrass kind)
        spec: PathBuf,
        /// Residual tolerance for the transport
        #[arg(long)]
        tolerance: Option<f64>,
        /// RK4 steps per loop
        #[arg(long)]
        steps: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every family spec in a directory and print the audit table
    Corpus {
        /// Directory of TOML family specs
        dir: PathBuf,
        /// Residual tolerance for the monodromy column
        #[arg(long)]
        tolerance: Option<f64>,
        /// RK4 steps per loop
        #[arg(long)]
        steps: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn report_text(report: &arakelov::report::Report) -> String {
    let mut out = String::new();
    if let Some(surface) = &report.surface {
        out.push_str(&format!(
            "level {}  delta {}  deg_j {}  N {}  semistable {}  isotrivial {}  euler {}\n",
            surface.level,
            surface.delta,
            surface.deg_j,
            surface.n_singular,
            surface.semistable,
            surface.isotrivial,
            surface.euler_total
        ));
        for f in &surface.fibers {
            out.push_str(&format!(
                "  {:<6} at {} (degree {}, orders {:?}, euler {})\n",
                f.fiber_type, f.place, f.degree, f.orders, f.euler
            ));
        }
    }
    if let Some(checks) = &report.monodromy {
        for c in checks {
            out.push_str(&format!(
                "  monodromy {:<12} predicted {:<4} classified {:<4} trace_err {:.2e} {}\n",
                c.place,
                c.predicted,
                c.classified.as_deref().unwrap_or("-"),
                c.trace_err,
                if c.ok { "ok" } else { "FAIL" }
            ));
        }
    }
    if let Some(apps) = &report.monodromy_apparent {
        for a in apps {
            out.push_str(&format!(
                "  apparent {:<12} deviation {:.2e} {}\n",
                a.place,
                a.deviation,
                if a.ok { "ok" } else { "FAIL" }
            ));
        }
    }
    if let Some(global) = &report.monodromy_global {
        out.push_str(&format!(
            "  global relation over {} loops: residual {:.2e} {}\n",
            global.loops,
            global.residual,
            if global.ok { "ok" } else { "FAIL" }
        ));
    }
    if let Some(triangle) = &report.triangle {
        for c in triangle {
            out.push_str(&format!(
                "  {:<34} lhs {:<8} rhs {:<8} {}\n",
                c.name,
                c.lhs.as_deref().unwrap_or("-"),
                c.rhs.as_deref().unwrap_or("-"),
                if c.ok { "ok" } else { "FAIL" }
            ));
        }
    }
    if let Some(formulas) = &report.formulas {
        for (k, v) in formulas {
            out.push_str(&format!("  {k} = {v}\n"));
        }
    }
    for w in &report.warnings {
        out.push_str(&format!("  warning: {w}\n"));
    }
    out
}

fn finish(outcome: run::Outcome, output: &OutputArgs) -> i32 {
    let text = if output.text {
        report_text(&outcome.report)
    } else {
        outcome.report.to_json()
    };
    if let Err(e) = emit(text, &output.out) {
        eprintln!("error: {e}");
        return EXIT_ERROR;
    }
    if outcome.checks_ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn pf_options(tolerance: Option<f64>, steps: Option<usize>, spec: &spec::SpecFile) -> PfOptions {
    let mut opts = PfOptions::default();
    if let Some(po) = &spec.pf_options {
        if let Some(t) = po.tolerance {
            opts.tolerance = t;
        }
        if let Some(s) = po.steps {
            opts.steps = s;
        }
    }
    if let Some(t) = tolerance {
        opts.tolerance = t;
    }
    if let Some(s) = steps {
        opts.steps = s;
    }
    opts
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ARAKELOV_LOG")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze { spec, output } => match run::load_spec(&spec).and_then(|s| {
            log::info!("analyzing {}", spec.display());
            run::analyze(&s)
        }) {
            Ok(outcome) => finish(outcome, &output),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_ERROR
            }
        },
        Command::Monodromy {
            spec,
            tolerance,
            steps,
            output,
        } => match run::load_spec(&spec).and_then(|s| {
            let opts = pf_options(tolerance, steps, &s);
            log::info!(
                "monodromy for {} at tolerance {} with {} steps",
                spec.display(),
                opts.tolerance,
                opts.steps
            );
            run::monodromy(&s, &opts)
        }) {
            Ok(outcome) => finish(outcome, &output),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_ERROR
            }
        },
        Command::Corpus {
            dir,
            tolerance,
            steps,
            output,
        } => {
            let mut opts = PfOptions::default();
            if let Some(t) = tolerance {
                opts.tolerance = t;
            }
            if let Some(s) = steps {
                opts.steps = s;
            }
            match run::corpus(&dir, &opts) {
                Ok(outcome) => {
                    let text = if output.json {
                        serde_json::to_string_pretty(&outcome.rows).expect("serializable")
                    } else {
                        run::corpus_table(&outcome.rows)
                    };
                    if let Err(e) = emit(text, &output.out) {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_ERROR as u8);
                    }
                    if outcome.checks_ok {
                        EXIT_OK
                    } else {
                        EXIT_CHECK_FAILED
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_ERROR
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
