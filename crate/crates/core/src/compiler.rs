//! Compiles a prenex formula into nested searches, one per quantifier, and
//! evaluates it against brute force.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::classical::{classical_eval, free_prefix, iterations_for, TruthTableOracle};
use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier};
use crate::gadgets::{negated, BitOracle, ErrorBudget};
use crate::search::{run_auto, run_dense, run_factored, Backend, Outcome, SearchSpec};
use crate::sim::{bits_for, Gate, OracleCall, ProgramBuilder, UnitaryProgram, DEFAULT_MAX_QUBITS};

/// Program deciding `formula` on the free-variable inputs: output XORed
/// with 1 exactly when the formula holds (up to the search error).
pub fn compile(formula: &Formula, table: &TruthTableOracle, budget: &ErrorBudget) -> Result<UnitaryProgram> {
    if formula.arity() != table.num_bits() {
        return Err(Error::ArityMismatch {
            expected: table.num_bits(),
            found: formula.arity(),
        });
    }
    let base = BitOracle::table(table.clone());
    let prefix = formula.prefix();
    let context_at = |level: usize| -> Vec<(String, usize)> {
        formula
            .variables()
            .take(formula.free().len() + level)
            .map(|v| (v.name.clone(), v.width))
            .collect()
    };
    if prefix.is_empty() {
        return passthrough(&base, &context_at(0));
    }
    let mut oracle: Arc<BitOracle> = base;
    for level in (0..prefix.len()).rev() {
        let (q, var) = &prefix[level];
        let forall = *q == Quantifier::Forall;
        let inner = if forall { negated(&oracle)? } else { oracle.clone() };
        let context = context_at(level);
        let program = SearchSpec {
            oracle: &inner,
            context: &context,
            var: &var.name,
            n: var.width,
            budget,
            negate: forall,
        }
        .build()?;
        if level == 0 {
            return Ok(program);
        }
        oracle = BitOracle::program(program)?;
    }
    unreachable!("prefix is non-empty")
}

fn passthrough(oracle: &Arc<BitOracle>, inputs: &[(String, usize)]) -> Result<UnitaryProgram> {
    let mut b = ProgramBuilder::new();
    let mut qs = Vec::new();
    for (name, w) in inputs {
        qs.extend_from_slice(b.input(name.clone(), *w).qubits());
    }
    let out = b.output("gamma");
    b.push(Gate::Oracle(OracleCall {
        oracle: oracle.clone(),
        inputs: qs,
        target: out,
        ancillas: Vec::new(),
        layer: None,
        inverse: false,
    }))?;
    Ok(b.finish())
}

/// Costs of the compiled program, derived without building it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceEstimate {
    /// Width of the whole program as one dense state.
    pub qubits_needed: usize,
    /// Widest state the factored backend allocates.
    pub simulated_width: usize,
    pub oracle_layer_depth: u64,
    pub full_oracle_depth: u64,
    pub max_parallel_queries: u64,
    pub total_base_queries: u64,
    /// Iteration bound m for each quantifier, outermost first.
    pub m_per_level: Vec<u64>,
    /// 2^{n/2} with n the total bound width.
    pub paper_depth_bound: f64,
    /// (M·n)^k.
    pub paper_parallel_bound: u64,
}

impl ResourceEstimate {
    /// Fails when the factored simulation would not fit in `max_qubits`.
    pub fn check_fits(&self, max_qubits: usize) -> Result<()> {
        if self.simulated_width > max_qubits {
            return Err(Error::WidthExceeded {
                requested: self.simulated_width,
                cap: max_qubits,
            });
        }
        Ok(())
    }
}

pub fn estimate_resources(formula: &Formula, budget: &ErrorBudget) -> ResourceEstimate {
    let blocks = budget.blocks() as u64;
    let mut depth = 1u64;
    let mut full = 1u64;
    let mut parallel = 1u64;
    let mut total = 1u64;
    let mut anc = 0usize;
    let mut live_anc = 0usize;
    let mut block_width = 0usize;
    let mut m_per_level = Vec::new();
    for (_, var) in formula.prefix().iter().rev() {
        let m = iterations_for(var.width);
        let c = bits_for(m);
        block_width = c + var.width + 1 + live_anc;
        depth *= m;
        full *= 2 * (m + 1);
        parallel *= blocks;
        total *= 2 * blocks * (m + 1);
        let per_block = c + var.width + 1;
        anc = blocks as usize * (per_block + anc) + blocks as usize + 1 + 1;
        live_anc = blocks as usize * (per_block + live_anc) + 1;
        m_per_level.push(m);
    }
    m_per_level.reverse();
    let free = formula.free_width();
    let n = formula.bound_width() as u64;
    let k = formula.k() as u32;
    ResourceEstimate {
        qubits_needed: free + 1 + anc,
        simulated_width: if k == 0 { free + 1 } else { free + 1 + block_width },
        oracle_layer_depth: depth,
        full_oracle_depth: full,
        max_parallel_queries: parallel,
        total_base_queries: total,
        m_per_level,
        paper_depth_bound: 2f64.powf(n as f64 / 2.0),
        paper_parallel_bound: (blocks * n).saturating_pow(k),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub max_qubits: usize,
    /// `None` picks factored execution for searches and dense otherwise.
    pub backend: Option<Backend>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_qubits: DEFAULT_MAX_QUBITS,
            backend: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssignedValue {
    pub name: String,
    pub value: u64,
}

/// Outcome of one verification run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub formula: String,
    pub assignment: Vec<AssignedValue>,
    #[serde(rename = "M")]
    pub blocks: usize,
    pub m_per_level: Vec<u64>,
    pub gamma_prob: f64,
    pub decided: bool,
    pub classical_truth: bool,
    pub agree: bool,
    pub zero_fidelity: f64,
    pub qubits_used: usize,
    pub simulated_width: usize,
    pub oracle_layer_depth: u64,
    pub full_oracle_depth: u64,
    pub max_parallel_queries: u64,
    pub total_base_queries: u64,
    pub paper_depth_bound: f64,
    pub paper_parallel_bound: u64,
    pub backend: Backend,
    pub wall_time_ms: f64,
}

impl RunReport {
    /// Distance of `gamma_prob` from 1/2 on the side of the true answer;
    /// negative when the decision is wrong.
    pub fn margin(&self) -> f64 {
        if self.classical_truth {
            self.gamma_prob - 0.5
        } else {
            0.5 - self.gamma_prob
        }
    }
}

/// A formula compiled once and evaluated on any number of assignments.
#[derive(Debug)]
pub struct CompiledFormula {
    formula: Formula,
    table: TruthTableOracle,
    budget: ErrorBudget,
    program: UnitaryProgram,
    estimate: ResourceEstimate,
}

impl CompiledFormula {
    pub fn new(formula: &Formula, table: &TruthTableOracle, budget: &ErrorBudget) -> Result<Self> {
        Ok(CompiledFormula {
            formula: formula.clone(),
            table: table.clone(),
            budget: *budget,
            program: compile(formula, table, budget)?,
            estimate: estimate_resources(formula, budget),
        })
    }

    pub fn program(&self) -> &UnitaryProgram {
        &self.program
    }

    pub fn estimate(&self) -> &ResourceEstimate {
        &self.estimate
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Runs the program on `assignment` (free-variable values in
    /// declaration order) and compares with brute force.
    pub fn evaluate(&self, assignment: &[u64], opts: &EvalOptions) -> Result<RunReport> {
        let start = Instant::now();
        let input = free_prefix(&self.formula, assignment)?;
        let classical_truth = classical_eval(&self.formula, &self.table, assignment)?;
        let outcome = self.run(input, opts)?;
        let stats = self.program.stats();
        let decided = outcome.gamma_prob > 0.5;
        Ok(RunReport {
            formula: self.formula.to_string(),
            assignment: self
                .formula
                .free()
                .iter()
                .zip(assignment)
                .map(|(v, &value)| AssignedValue {
                    name: v.name.clone(),
                    value,
                })
                .collect(),
            blocks: self.budget.blocks(),
            m_per_level: self.estimate.m_per_level.clone(),
            gamma_prob: outcome.gamma_prob,
            decided,
            classical_truth,
            agree: decided == classical_truth,
            zero_fidelity: outcome.zero_fidelity,
            qubits_used: self.program.num_qubits(),
            simulated_width: outcome.simulated_width,
            oracle_layer_depth: stats.oracle_layer_depth,
            full_oracle_depth: stats.full_oracle_depth,
            max_parallel_queries: stats.max_parallel_queries,
            total_base_queries: stats.total_base_queries,
            paper_depth_bound: self.estimate.paper_depth_bound,
            paper_parallel_bound: self.estimate.paper_parallel_bound,
            backend: outcome.backend,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }

    fn run(&self, input: u64, opts: &EvalOptions) -> Result<Outcome> {
        match opts.backend {
            None => {
                self.estimate.check_fits(opts.max_qubits)?;
                run_auto(&self.program, input, opts.max_qubits)
            }
            Some(Backend::Dense) => Ok(run_dense(&self.program, input, opts.max_qubits, false)?.0),
            Some(Backend::Factored) => {
                let r = run_factored(&self.program, input, opts.max_qubits)?;
                Ok(Outcome {
                    gamma_prob: r.gamma_prob,
                    zero_fidelity: r.zero_fidelity,
                    simulated_width: r.simulated_width,
                    backend: Backend::Factored,
                })
            }
        }
    }
}

/// Compiles and evaluates in one step.
pub fn evaluate(
    formula: &Formula,
    table: &TruthTableOracle,
    assignment: &[u64],
    budget: &ErrorBudget,
    opts: &EvalOptions,
) -> Result<RunReport> {
    let estimate = estimate_resources(formula, budget);
    if opts.backend.is_none() {
        estimate.check_fits(opts.max_qubits)?;
    }
    CompiledFormula::new(formula, table, budget)?.evaluate(assignment, opts)
}
