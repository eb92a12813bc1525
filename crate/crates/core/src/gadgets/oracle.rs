use std::sync::Arc;

use crate::classical::TruthTableOracle;
use crate::error::{Error, Result};
use crate::sim::{Gate, OracleCall, ProgramBuilder, UnitaryProgram};

/// A reversible predicate |a, b⟩ → |a, b ⊕ p(a)⟩: either an explicit table
/// (one base query per call) or a program with inputs and an output qubit.
#[derive(Debug)]
pub enum BitOracle {
    Table(TruthTableOracle),
    Program(UnitaryProgram),
}

impl BitOracle {
    pub fn table(t: TruthTableOracle) -> Arc<Self> {
        Arc::new(BitOracle::Table(t))
    }

    pub fn program(p: UnitaryProgram) -> Result<Arc<Self>> {
        if p.output().is_none() {
            return Err(Error::BadIndex("oracle program has no output qubit".into()));
        }
        Ok(Arc::new(BitOracle::Program(p)))
    }

    pub fn input_width(&self) -> usize {
        match self {
            BitOracle::Table(t) => t.num_bits(),
            BitOracle::Program(p) => p.inputs().len(),
        }
    }

    /// Private work qubits a caller must provide, zeroed.
    pub fn ancilla_width(&self) -> usize {
        match self {
            BitOracle::Table(_) => 0,
            BitOracle::Program(p) => p.num_qubits() - p.inputs().len() - 1,
        }
    }

    pub fn as_program(&self) -> Option<&UnitaryProgram> {
        match self {
            BitOracle::Program(p) => Some(p),
            BitOracle::Table(_) => None,
        }
    }

    /// Sequential Grover-iterate layers per call.
    pub fn depth(&self) -> u64 {
        self.program_stat(|s| s.oracle_layer_depth)
    }

    /// Sequential oracle layers per call, counting readout and uncompute.
    pub fn full_depth(&self) -> u64 {
        self.program_stat(|s| s.full_oracle_depth)
    }

    pub fn parallel_queries(&self) -> u64 {
        self.program_stat(|s| s.max_parallel_queries)
    }

    pub fn total_queries(&self) -> u64 {
        self.program_stat(|s| s.total_base_queries)
    }

    pub fn gate_count(&self) -> u64 {
        self.program_stat(|s| s.gate_count)
    }

    fn program_stat(&self, f: impl Fn(&crate::sim::ProgramStats) -> u64) -> u64 {
        match self {
            BitOracle::Table(_) => 1,
            BitOracle::Program(p) => f(&p.stats()),
        }
    }
}

/// Oracle computing the negation of `inner`: one call, then NOT on the output.
pub fn negated(inner: &Arc<BitOracle>) -> Result<Arc<BitOracle>> {
    let mut b = ProgramBuilder::new();
    let inputs = b.input("a", inner.input_width());
    let out = b.output("b");
    let anc = b.alloc("inner", inner.ancilla_width());
    b.push(Gate::Oracle(OracleCall {
        oracle: inner.clone(),
        inputs: inputs.qubits().to_vec(),
        target: out,
        ancillas: anc.qubits().to_vec(),
        layer: None,
        inverse: false,
    }))?;
    b.push(Gate::x(out))?;
    BitOracle::program(b.finish())
}
