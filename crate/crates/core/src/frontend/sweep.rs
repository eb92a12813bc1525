use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classical::{random_instance, InstanceSpec, TruthTableOracle};
use crate::compiler::{CompiledFormula, EvalOptions};
use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier, Variable};
use crate::gadgets::ErrorBudget;

pub const CSV_HEADER: &str = "axis,margin_mean,agree_rate,depth,paper_depth,parallel,wall_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Blocks,
    Width,
    Density,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" => Ok(Axis::Blocks),
            "n" => Ok(Axis::Width),
            "density" => Ok(Axis::Density),
            _ => Err(Error::BadAxis(s.to_string())),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Blocks => "M",
            Axis::Width => "n",
            Axis::Density => "density",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub axis: Axis,
    pub values: Vec<f64>,
    /// Quantifiers of the generated formulas, outermost first.
    pub pattern: Vec<Quantifier>,
    /// Width of each generated variable.
    pub width: usize,
    pub blocks: usize,
    pub density: f64,
    /// Exact number of ones per table; overrides `density`.
    pub solutions: Option<u64>,
    /// Instances per axis value.
    pub seeds: u64,
    pub seed: u64,
    pub max_qubits: usize,
    /// Use this instance instead of generated ones (axis M only).
    pub fixed: Option<(Formula, TruthTableOracle)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub margin_mean: f64,
    pub agree_rate: f64,
    pub depth: u64,
    pub paper_depth: f64,
    pub parallel: u64,
    pub wall_ms: f64,
}

pub fn parse_pattern(s: &str) -> Result<Vec<Quantifier>> {
    s.chars()
        .enumerate()
        .map(|(i, c)| match c {
            'A' | 'a' => Ok(Quantifier::Forall),
            'E' | 'e' => Ok(Quantifier::Exists),
            _ => Err(Error::Parse {
                line: 1,
                column: i + 1,
                message: format!("pattern letters are A and E, found {c:?}"),
            }),
        })
        .collect()
}

fn generated_formula(pattern: &[Quantifier], width: usize) -> Result<Formula> {
    Formula::new(
        vec![],
        pattern
            .iter()
            .enumerate()
            .map(|(i, &q)| (q, Variable::new(format!("x{}", i + 1), width)))
            .collect(),
    )
}

fn instance(formula: &Formula, density: f64, solutions: Option<u64>, seed: u64) -> Result<TruthTableOracle> {
    match solutions {
        Some(t) => {
            let n = formula.arity();
            let size = 1usize << n;
            if t as usize > size {
                return Err(Error::LengthMismatch {
                    expected: size,
                    found: t as usize,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bits = vec![false; size];
            for i in sample(&mut rng, size, t as usize) {
                bits[i] = true;
            }
            TruthTableOracle::new(n, bits)
        }
        None => Ok(random_instance(&InstanceSpec {
            formula: formula.clone(),
            density,
            seed,
        })?
        .1),
    }
}

/// Evaluates every instance for every axis value, in axis order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.fixed.is_some() && cfg.axis != Axis::Blocks {
        return Err(Error::BadAxis(format!("{} (a fixed instance only sweeps M)", cfg.axis)));
    }
    let mut rows = Vec::with_capacity(cfg.values.len());
    for &value in &cfg.values {
        let start = Instant::now();
        let (mut blocks, mut width, mut density) = (cfg.blocks, cfg.width, cfg.density);
        match cfg.axis {
            Axis::Blocks => blocks = value as usize,
            Axis::Width => width = value as usize,
            Axis::Density => density = value,
        }
        let budget = ErrorBudget::from_blocks(blocks)?;
        let instances: Vec<(Formula, TruthTableOracle)> = match &cfg.fixed {
            Some(fixed) => vec![fixed.clone()],
            None => {
                let formula = generated_formula(&cfg.pattern, width)?;
                (0..cfg.seeds)
                    .map(|i| Ok((formula.clone(), instance(&formula, density, cfg.solutions, cfg.seed + i)?)))
                    .collect::<Result<_>>()?
            }
        };
        let opts = EvalOptions {
            max_qubits: cfg.max_qubits,
            backend: None,
        };
        let (mut margin, mut agree) = (0.0, 0usize);
        let mut last = None;
        for (formula, table) in &instances {
            let compiled = CompiledFormula::new(formula, table, &budget)?;
            compiled.estimate().check_fits(cfg.max_qubits)?;
            let report = compiled.evaluate(&vec![0; formula.free().len()], &opts)?;
            margin += report.margin();
            agree += report.agree as usize;
            last = Some(report);
        }
        let count = instances.len().max(1) as f64;
        let report = last.ok_or_else(|| Error::BadAxis("sweep has no instances".into()))?;
        rows.push(SweepRow {
            axis_value: value,
            margin_mean: margin / count,
            agree_rate: agree as f64 / count,
            depth: report.oracle_layer_depth,
            paper_depth: report.paper_depth_bound,
            parallel: report.max_parallel_queries,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(rows)
}

pub fn write_csv(rows: &[SweepRow], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.3}",
            r.axis_value, r.margin_mean, r.agree_rate, r.depth, r.paper_depth, r.parallel, r.wall_ms
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_names() {
        assert_eq!("M".parse::<Axis>().unwrap(), Axis::Blocks);
        assert_eq!("density".parse::<Axis>().unwrap(), Axis::Density);
        assert!(matches!("k".parse::<Axis>(), Err(Error::BadAxis(_))));
    }

    #[test]
    fn exact_solution_counts() {
        let f = generated_formula(&[Quantifier::Exists], 3).unwrap();
        for t in 0..=8 {
            assert_eq!(instance(&f, 0.0, Some(t), 4).unwrap().count_ones(), t);
        }
    }
}
