use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use qverify::frontend::{
    check_vars, load_truth_table, parse_formula, parse_pattern, run_sweep, write_csv, Axis, SweepConfig,
};
use qverify::sim::DEFAULT_MAX_QUBITS;
use qverify::{CompiledFormula, Error, ErrorBudget, EvalOptions, Formula};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "qverify", version, about = "Exact simulation of quantum verification for prenex formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one formula on one free-variable assignment and compare with brute force.
    Verify(VerifyArgs),
    /// Sweep M, the variable width or the table density and print CSV.
    Sweep(SweepArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Formula file in the prefix DSL.
    #[arg(long)]
    formula: PathBuf,
    /// Truth-table file.
    #[arg(long)]
    oracle: PathBuf,
    /// Amplification blocks per quantifier.
    #[arg(long = "M", default_value_t = 3)]
    blocks: usize,
    /// Free-variable value, `name=value`; repeat for each free variable.
    #[arg(long = "assign", value_name = "NAME=VALUE")]
    assign: Vec<String>,
    /// Also write the report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Sample the output bit this many times (display only).
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
    max_qubits: usize,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// One of M, n, density.
    #[arg(long)]
    axis: String,
    /// Comma-separated axis values.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// Quantifier letters, outermost first (A = forall, E = exists).
    #[arg(long, default_value = "E")]
    pattern: String,
    /// Bits per generated variable.
    #[arg(long, default_value_t = 2)]
    width: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Exact number of ones per generated table (overrides --density).
    #[arg(long)]
    solutions: Option<u64>,
    /// Instances per axis value.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "M", default_value_t = 3)]
    blocks: usize,
    /// Fixed formula file instead of generated instances (axis M only).
    #[arg(long, requires = "oracle")]
    formula: Option<PathBuf>,
    #[arg(long, requires = "formula")]
    oracle: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
    max_qubits: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Sweep(args) => sweep(args).map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_instance(formula: &PathBuf, oracle: &PathBuf) -> Result<(Formula, qverify::TruthTableOracle)> {
    let text = fs::read_to_string(formula).with_context(|| format!("reading {}", formula.display()))?;
    let formula_ast = parse_formula(&text)?;
    let table = load_truth_table(oracle).with_context(|| format!("loading {}", oracle.display()))?;
    check_vars(&table, &formula_ast)?;
    Ok((formula_ast, table))
}

fn parse_assignment(formula: &Formula, assign: &[String]) -> Result<Vec<u64>> {
    let mut values = vec![None; formula.free().len()];
    for a in assign {
        let Some((name, value)) = a.split_once('=') else {
            bail!("assignment `{a}` is not of the form name=value");
        };
        let (name, value) = (name.trim(), value.trim());
        let slot = formula
            .free()
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))?;
        let parsed = match value.strip_prefix("0x") {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => match value.strip_prefix("0b") {
                Some(bin) => u64::from_str_radix(bin, 2),
                None => value.parse(),
            },
        }
        .with_context(|| format!("bad value in `{a}`"))?;
        values[slot] = Some(parsed);
    }
    formula
        .free()
        .iter()
        .zip(values)
        .map(|(v, x)| x.ok_or_else(|| Error::UnboundVariable(v.name.clone()).into()))
        .collect()
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let (formula, table) = load_instance(&args.formula, &args.oracle)?;
    let assignment = parse_assignment(&formula, &args.assign)?;
    let budget = ErrorBudget::from_blocks(args.blocks)?;
    let compiled = CompiledFormula::new(&formula, &table, &budget)?;
    compiled.estimate().check_fits(args.max_qubits)?;
    let opts = EvalOptions {
        max_qubits: args.max_qubits,
        backend: None,
    };
    let report = compiled.evaluate(&assignment, &opts)?;
    let mut json = serde_json::to_value(&report)?;
    if let Some(shots) = args.shots.filter(|&s| s > 0) {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let ones = (0..shots).filter(|_| rng.gen_bool(report.gamma_prob)).count();
        json["samples"] = serde_json::json!({ "shots": shots, "seed": args.seed, "ones": ones });
    }
    let text = serde_json::to_string_pretty(&json)?;
    if let Some(path) = &args.json {
        fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{text}");
    Ok(if report.agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn sweep(args: SweepArgs) -> Result<()> {
    let axis: Axis = args.axis.parse()?;
    let fixed = match (&args.formula, &args.oracle) {
        (Some(f), Some(o)) => Some(load_instance(f, o)?),
        _ => None,
    };
    let cfg = SweepConfig {
        axis,
        values: args.values,
        pattern: parse_pattern(&args.pattern)?,
        width: args.width,
        blocks: args.blocks,
        density: args.density,
        solutions: args.solutions,
        seeds: args.seeds,
        seed: args.seed,
        max_qubits: args.max_qubits,
        fixed,
    };
    let rows = run_sweep(&cfg)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    write_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}
