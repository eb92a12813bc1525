//! The measurement-free existence decider and its execution backends.

mod build;
mod factored;

use serde::Serialize;

pub use build::{build_search, SearchSpec};
pub use factored::{run_factored, FactoredRun};

use crate::error::{Error, Result};
use crate::sim::{Engine, Gate, UnitaryProgram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// One dense state over every qubit of the program.
    Dense,
    /// One dense state per distinct block; see [`run_factored`].
    Factored,
}

/// Result of running a program on a single input with exact readout.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub gamma_prob: f64,
    /// Probability that every qubit other than inputs and output reads 0.
    pub zero_fidelity: f64,
    pub simulated_width: usize,
    pub backend: Backend,
}

/// Runs the whole program on one dense state. With `elide` set, nested
/// searches replace their combiner by a classical permutation (this
/// program's own combiner always runs gate by gate).
pub fn run_dense(program: &UnitaryProgram, input: u64, max_qubits: usize, elide: bool) -> Result<(Outcome, Engine)> {
    factored::check_input(program, input)?;
    let output = program
        .output()
        .ok_or_else(|| Error::BadIndex("program has no output qubit".into()))?;
    let mut engine = Engine::for_program(program, max_qubits)?;
    let w = program.inputs().len();
    for (i, &q) in program.inputs().iter().enumerate() {
        if (input >> (w - 1 - i)) & 1 == 1 {
            engine.apply(&Gate::x(q))?;
        }
    }
    engine.set_elide_nested(elide);
    engine.run(program)?;
    let outcome = Outcome {
        gamma_prob: engine.state().probability_of(&[output], 1),
        zero_fidelity: engine.zero_fidelity(&program.ancillas())?,
        simulated_width: program.num_qubits(),
        backend: Backend::Dense,
    };
    Ok((outcome, engine))
}

/// Factored execution when the program is a search, dense otherwise.
pub fn run_auto(program: &UnitaryProgram, input: u64, max_qubits: usize) -> Result<Outcome> {
    if program.search_layout().is_some() {
        let r = run_factored(program, input, max_qubits)?;
        Ok(Outcome {
            gamma_prob: r.gamma_prob,
            zero_fidelity: r.zero_fidelity,
            simulated_width: r.simulated_width,
            backend: Backend::Factored,
        })
    } else {
        Ok(run_dense(program, input, max_qubits, true)?.0)
    }
}

/// Measured costs of a search beside the costs stated for it.
#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub gamma_prob: f64,
    pub zero_fidelity: f64,
    /// Elementary gates with nested programs inlined.
    pub steps: u64,
    pub oracle_layers: u64,
    pub max_parallel_queries: u64,
    pub total_queries: u64,
    pub qubits_used: usize,
    /// M(n+2)+2.
    pub paper_qubit_formula: usize,
    pub simulated_width: usize,
    pub backend: Backend,
}

impl SearchReport {
    pub fn new(program: &UnitaryProgram, outcome: &Outcome) -> Self {
        let stats = program.stats();
        let (m, n) = program
            .search_layout()
            .and_then(|l| l.blocks.first().map(|b| (l.blocks.len(), b.target.width())))
            .unwrap_or((0, 0));
        SearchReport {
            gamma_prob: outcome.gamma_prob,
            zero_fidelity: outcome.zero_fidelity,
            steps: stats.gate_count,
            oracle_layers: stats.oracle_layer_depth,
            max_parallel_queries: stats.max_parallel_queries,
            total_queries: stats.total_base_queries,
            qubits_used: program.num_qubits(),
            paper_qubit_formula: m * (n + 2) + 2,
            simulated_width: outcome.simulated_width,
            backend: outcome.backend,
        }
    }
}

/// Report for a program already run on `engine`.
pub fn search_report(program: &UnitaryProgram, engine: &Engine) -> Result<SearchReport> {
    let output = program
        .output()
        .ok_or_else(|| Error::BadIndex("program has no output qubit".into()))?;
    let outcome = Outcome {
        gamma_prob: engine.state().probability_of(&[output], 1),
        zero_fidelity: engine.zero_fidelity(&program.ancillas())?,
        simulated_width: engine.num_qubits(),
        backend: Backend::Dense,
    };
    Ok(SearchReport::new(program, &outcome))
}
