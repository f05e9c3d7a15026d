//! The `drw` binary: canonical forms, arithmetic, pseudovaluations, and
//! randomized checks for truncated de Rham-Witt differentials.
//!
//! Exit codes: 0 on success, 1 when a check command finds a violation, 2 on
//! usage errors (bad syntax, bad parameters, out-of-range preconditions).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use drw::pseudoval::{self, PseudovalResult};
use drw::{Context, DrwElement};
use drw_cli::checks::{run_axiom_check, run_table_check, CheckSummary};
use drw_cli::expr::{parse_element, parse_rational};
use drw_cli::json::to_dto;
use drw_cli::CliError;

#[derive(Parser)]
#[command(
    name = "drw",
    version,
    about = "Exact arithmetic with truncated de Rham-Witt differentials"
)]
struct Cli {
    /// The prime p.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,

    /// Number of polynomial variables.
    #[arg(long, global = true, default_value_t = 2)]
    nvars: usize,

    /// Truncation length M; scalars live mod p^M.
    #[arg(long, global = true, default_value_t = 6)]
    prec: u32,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for the randomized check commands.
    #[arg(long, global = true, default_value_t = 17)]
    seed: u64,

    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print its canonical form.
    Canon { expr: String },
    /// Multiply two expressions.
    Mul { lhs: String, rhs: String },
    /// Apply the differential to an expression.
    Diff { expr: String },
    /// Apply Frobenius to an expression.
    Frob {
        /// Number of Frobenius applications.
        #[arg(long, default_value_t = 1)]
        m: u32,
        expr: String,
    },
    /// Apply Verschiebung to an expression.
    Versch {
        /// Number of Verschiebung applications.
        #[arg(long, default_value_t = 1)]
        m: u32,
        expr: String,
    },
    /// Evaluate gamma_eps on an expression.
    Gamma {
        #[arg(long)]
        eps: String,
        expr: String,
    },
    /// Evaluate zeta_eps on an expression.
    Zeta {
        #[arg(long)]
        eps: String,
        expr: String,
    },
    /// Check the per-class product margin table on random pairs.
    TableCheck {
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 300)]
        trials: u32,
    },
    /// Run one of the two product-rule counterexamples for gamma.
    Counterexample {
        /// 1 multiplies by d(V^m([X1])), 2 by d(V^m([X2])).
        #[arg(long)]
        which: u8,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        eps: String,
    },
    /// Check the pseudovaluation axioms for zeta on random pairs.
    Axioms {
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 200)]
        trials: u32,
    },
}

struct Outcome {
    output: String,
    ok: bool,
}

impl Outcome {
    fn success(output: String) -> Self {
        Outcome { output, ok: true }
    }
}

fn render_element(x: &DrwElement, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => x.to_string(),
        Format::Json => serde_json::to_string(&to_dto(x))
            .expect("element serialization cannot fail"),
    })
}

fn render_value(result: &PseudovalResult, format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = result.value.render();
            if result.lower_bound_only {
                s.push_str(" (lower bound only)");
            }
            s
        }
        Format::Json => json!({
            "value": result.value.render(),
            "lower_bound_only": result.lower_bound_only,
        })
        .to_string(),
    }
}

fn render_summary(summary: &CheckSummary, what: &str, format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = format!(
                "{} trials, {} failures: {}",
                summary.trials,
                summary.failures,
                if summary.ok() { what } else { "FAILED" }
            );
            if let Some(first) = &summary.first_failure {
                s.push('\n');
                s.push_str(first);
            }
            s
        }
        Format::Json => json!({
            "trials": summary.trials,
            "failures": summary.failures,
            "ok": summary.ok(),
            "first_failure": summary.first_failure,
        })
        .to_string(),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let ctx = Context::new(cli.p, cli.nvars, cli.prec)?;
    let format = cli.format;
    match &cli.command {
        Command::Canon { expr } => {
            let x = parse_element(ctx, expr)?;
            Ok(Outcome::success(render_element(&x, format)?))
        }
        Command::Mul { lhs, rhs } => {
            let x = parse_element(ctx, lhs)?;
            let y = parse_element(ctx, rhs)?;
            Ok(Outcome::success(render_element(&x.mul(&y)?, format)?))
        }
        Command::Diff { expr } => {
            let x = parse_element(ctx, expr)?;
            Ok(Outcome::success(render_element(&x.differential(), format)?))
        }
        Command::Frob { m, expr } => {
            let x = parse_element(ctx, expr)?;
            Ok(Outcome::success(render_element(&x.frobenius_pow(*m), format)?))
        }
        Command::Versch { m, expr } => {
            let x = parse_element(ctx, expr)?;
            Ok(Outcome::success(render_element(&x.verschiebung_pow(*m), format)?))
        }
        Command::Gamma { eps, expr } => {
            let eps = parse_rational(eps)?;
            let x = parse_element(ctx, expr)?;
            let result = pseudoval::gamma(&x, &eps)?;
            Ok(Outcome::success(render_value(&result, format)))
        }
        Command::Zeta { eps, expr } => {
            let eps = parse_rational(eps)?;
            let x = parse_element(ctx, expr)?;
            let result = pseudoval::zeta(&x, &eps)?;
            Ok(Outcome::success(render_value(&result, format)))
        }
        Command::TableCheck { eps, trials } => {
            let eps = parse_rational(eps)?;
            let summary = run_table_check(ctx, &eps, *trials, cli.seed)?;
            Ok(Outcome {
                output: render_summary(&summary, "all margins nonnegative", format),
                ok: summary.ok(),
            })
        }
        Command::Counterexample { which, m, eps } => {
            let eps = parse_rational(eps)?;
            let report = pseudoval::gamma_counterexample(ctx, *which, *m, &eps)?;
            let output = match format {
                Format::Text => {
                    let verdict = if report.holds {
                        "PRODUCT RULE VIOLATED: gamma(x*y) < gamma(x) + gamma(y)"
                    } else {
                        "closed forms did not match; no violation exhibited"
                    };
                    format!(
                        "gamma(x) = {}\ngamma(y) = {}\ngamma(x*y) = {}\ngamma(x) + gamma(y) = {}\n{}",
                        report.gamma_x,
                        report.gamma_y,
                        report.gamma_product,
                        report.sum_bound,
                        verdict
                    )
                }
                Format::Json => json!({
                    "gamma_x": report.gamma_x.to_string(),
                    "gamma_y": report.gamma_y.to_string(),
                    "gamma_product": report.gamma_product.to_string(),
                    "sum_bound": report.sum_bound.to_string(),
                    "violated": report.holds,
                })
                .to_string(),
            };
            Ok(Outcome { output, ok: report.holds })
        }
        Command::Axioms { eps, trials } => {
            let eps = parse_rational(eps)?;
            let summary = run_axiom_check(ctx, &eps, *trials, cli.seed)?;
            Ok(Outcome {
                output: render_summary(&summary, "all axioms hold", format),
                ok: summary.ok(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, outcome.output + "\n") {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => println!("{}", outcome.output),
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
