//! tginv: tensor generalized inverses and reverse-order-law checks from the command line.
//!
//! Exit codes: 0 all checks passed, 1 checks failed, 2 input or shape error,
//! 3 numerical error.

mod commands;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tensor_ginv::io::{tensor_to_json, to_pretty};
use tensor_ginv::Error;

use report::{error_json, exit_code_for, Report, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(name = "tginv", version, about = "Tensor Moore-Penrose inverses and reverse-order-law checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input tensor file; repeat for several operands, in order.
    #[arg(short = 'i', long = "input", global = true)]
    pub inputs: Vec<PathBuf>,

    /// Row-side weight M.
    #[arg(long, global = true)]
    pub weight_m: Option<PathBuf>,

    /// Column-side weight N.
    #[arg(long, global = true)]
    pub weight_n: Option<PathBuf>,

    /// Middle weight P for products.
    #[arg(long, global = true)]
    pub weight_p: Option<PathBuf>,

    /// Residual tolerance for checks.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive)]
    pub tol: f64,

    /// Relative singular-value cutoff; the default is the machine-precision rule.
    #[arg(long, global = true, value_parser = positive)]
    pub rank_tol: Option<f64>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output path for tensors or the report.
    #[arg(short = 'o', long, global = true)]
    pub out: Option<PathBuf>,

    /// Accept Hermitian invertible weights that are not positive definite.
    #[arg(long, global = true)]
    pub allow_non_hpd: bool,

    /// Write the JSON report instead of bare tensors.
    #[arg(long, global = true)]
    pub emit_report: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Moore-Penrose inverse of one tensor.
    Pinv,
    /// Weighted Moore-Penrose inverse; needs --weight-m and --weight-n.
    Wpinv,
    /// Tensor SVD factors U, D, V.
    Svd,
    /// Full-rank decomposition factors F, G.
    Frd,
    /// Einstein product of two tensors.
    Product,
    /// Weighted conjugate transpose N^{-1} A^* M.
    Hash,
    /// Unweighted reverse-order law for A and B.
    CheckRol,
    /// Weighted reverse-order law for A and B with weights M, N, P.
    CheckWrol,
    /// Triple-product reverse-order law for U, V, W with weights M, N.
    CheckTriple,
    /// Runs the identity catalog on seeded random instances.
    Identities {
        /// Run only this catalog entry.
        #[arg(long)]
        case: Option<String>,
        /// Instances per entry.
        #[arg(long, default_value_t = 50)]
        instances: usize,
    },
    /// Penrose residuals of a candidate inverse X of A.
    Verify,
    /// Emits a seeded random tensor.
    Gen {
        #[arg(long, value_enum, default_value_t = GenKind::Tensor)]
        kind: GenKind,
        /// Row modes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<usize>,
        /// Column modes, comma separated; defaults to the row modes.
        #[arg(long, value_delimiter = ',')]
        cols: Option<Vec<usize>>,
        /// Reshaping rank for `--kind rank`.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Runs the built-in weighted product example and indefinite-weight counterexample.
    Fixtures,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Tensor,
    Hpd,
    Unitary,
    Rank,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pinv => "pinv",
            Command::Wpinv => "wpinv",
            Command::Svd => "svd",
            Command::Frd => "frd",
            Command::Product => "product",
            Command::Hash => "hash",
            Command::CheckRol => "check-rol",
            Command::CheckWrol => "check-wrol",
            Command::CheckTriple => "check-triple",
            Command::Identities { .. } => "identities",
            Command::Verify => "verify",
            Command::Gen { .. } => "gen",
            Command::Fixtures => "fixtures",
        }
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `out.json` with output `U` becomes `out.U.json`.
fn sibling(out: &Path, name: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "json".into());
    out.with_file_name(format!("{stem}.{name}.{ext}"))
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Error> {
    let command = cli.command.name();
    let out = cli.out.as_deref();
    if cli.emit_report || report.outputs.is_empty() {
        return write_text(out, &to_pretty(&report.to_json(command)));
    }
    if report.outputs.len() == 1 {
        let t = report.outputs.values().next().expect("one output");
        return write_text(out, &to_pretty(&tensor_to_json(t)));
    }
    match out {
        Some(p) => {
            for (name, t) in &report.outputs {
                write_text(Some(&sibling(p, name)), &to_pretty(&tensor_to_json(t)))?;
            }
            Ok(())
        }
        None => {
            let all = report.outputs.iter().map(|(k, t)| (k.clone(), tensor_to_json(t))).collect();
            write_text(None, &to_pretty(&serde_json::Value::Object(all)))
        }
    }
}

fn summarize(command: &str, report: &Report) {
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let marginal = if c.marginal { " (marginal)" } else { "" };
        eprintln!("{verdict} {} max residual {:.3e} tol {:.1e}{marginal}", c.name, c.max_residual(), c.tolerance);
    }
    eprintln!("{command}: {}", if report.passed() { "pass" } else { "fail" });
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let code = match commands::run(&cli) {
        Ok(report) => {
            summarize(command, &report);
            match emit(&cli, &report) {
                Ok(()) => report.exit_code(),
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_INPUT
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if cli.emit_report {
                if let Err(w) = write_text(cli.out.as_deref(), &to_pretty(&error_json(command, &e))) {
                    eprintln!("error: {w}");
                }
            }
            exit_code_for(&e)
        }
    };
    ExitCode::from(code as u8)
}
