use num_complex::Complex64 as C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

use super::gate::Gate;
use super::program::UnitaryProgram;
use super::register::{Qubit, Register};
use super::state::{mask_of, pattern, StateVector};
use crate::error::{Error, Result};
use crate::gadgets::BitOracle;

pub const DEFAULT_MAX_QUBITS: usize = 28;

/// Owns one dense state and applies gates and programs to it.
#[derive(Clone, Debug)]
pub struct Engine {
    state: StateVector,
    max_qubits: usize,
    registers: Vec<Register>,
    base_queries: u64,
    elide_nested: bool,
    /// Qubits whose 1-branch is known to carry no amplitude. Kernels skip
    /// those index ranges, which keeps freshly allocated ancillas cheap.
    zero: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    /// An engine with no qubits (a single amplitude equal to 1).
    pub fn new() -> Self {
        Self::with_max_qubits(DEFAULT_MAX_QUBITS)
    }

    pub fn with_max_qubits(max_qubits: usize) -> Self {
        Engine {
            state: StateVector::zero(0),
            max_qubits,
            registers: Vec::new(),
            base_queries: 0,
            elide_nested: false,
            zero: 0,
        }
    }

    pub fn from_state(state: StateVector, max_qubits: usize) -> Result<Self> {
        if state.num_qubits() > max_qubits {
            return Err(Error::WidthExceeded {
                requested: state.num_qubits(),
                cap: max_qubits,
            });
        }
        Ok(Engine {
            state,
            max_qubits,
            registers: Vec::new(),
            base_queries: 0,
            elide_nested: false,
            zero: 0,
        })
    }

    /// A zeroed engine with one register per register of `program`.
    pub fn for_program(program: &UnitaryProgram, max_qubits: usize) -> Result<Self> {
        let mut e = Self::with_max_qubits(max_qubits);
        e.reserve(program.num_qubits())?;
        e.registers = program.registers().to_vec();
        Ok(e)
    }

    fn reserve(&mut self, extra: usize) -> Result<usize> {
        let start = self.state.num_qubits();
        if start + extra > self.max_qubits {
            return Err(Error::WidthExceeded {
                requested: start + extra,
                cap: self.max_qubits,
            });
        }
        self.state.extend(extra);
        self.zero |= ((1usize << extra) - 1) << start;
        Ok(start)
    }

    /// Appends `width` fresh |0⟩ qubits as a named register.
    pub fn alloc_register(&mut self, width: usize, name: &str) -> Result<Register> {
        let start = self.reserve(width)?;
        let reg = Register::new(name, (start..start + width).collect());
        self.registers.push(reg.clone());
        Ok(reg)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    pub fn num_qubits(&self) -> usize {
        self.state.num_qubits()
    }

    pub fn max_qubits(&self) -> usize {
        self.max_qubits
    }

    /// Base-predicate evaluations performed so far.
    pub fn base_queries(&self) -> u64 {
        self.base_queries
    }

    /// When set, nested SEARCH programs run with their combiner replaced by
    /// the equivalent classical permutation and its scratch qubits unused.
    pub fn set_elide_nested(&mut self, on: bool) {
        self.elide_nested = on;
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits())?;
        self.exec(gate, None);
        Ok(())
    }

    pub fn run(&mut self, program: &UnitaryProgram) -> Result<()> {
        self.check_fits(program)?;
        for g in program.gates() {
            self.exec(g, None);
        }
        Ok(())
    }

    pub fn run_inverse(&mut self, program: &UnitaryProgram) -> Result<()> {
        self.check_fits(program)?;
        for g in program.inverse_gate_list() {
            self.exec(g, None);
        }
        Ok(())
    }

    /// Runs gates already validated against this engine's width.
    pub(crate) fn run_gates(&mut self, gates: &[Gate]) {
        for g in gates {
            self.exec(g, None);
        }
    }

    fn check_fits(&self, program: &UnitaryProgram) -> Result<()> {
        if program.num_qubits() > self.num_qubits() {
            return Err(Error::BadIndex(format!(
                "program uses {} qubits, engine has {}",
                program.num_qubits(),
                self.num_qubits()
            )));
        }
        Ok(())
    }

    /// XORs `value` into `reg`; on a zeroed register this writes the value.
    pub fn write_value(&mut self, reg: &Register, value: u64) -> Result<()> {
        if value > reg.max_value() {
            return Err(Error::ValueOutOfRange {
                value,
                width: reg.width(),
            });
        }
        let w = reg.width();
        for (i, &q) in reg.qubits().iter().enumerate() {
            if (value >> (w - 1 - i)) & 1 == 1 {
                self.apply(&Gate::x(q))?;
            }
        }
        Ok(())
    }

    pub fn probability_of(&self, reg: &Register, value: u64) -> Result<f64> {
        if value > reg.max_value() {
            return Err(Error::ValueOutOfRange {
                value,
                width: reg.width(),
            });
        }
        self.check_live(reg.qubits())?;
        Ok(self.state.probability_of(reg.qubits(), value))
    }

    /// Probability that every listed qubit reads 0.
    pub fn zero_fidelity(&self, qubits: &[Qubit]) -> Result<f64> {
        self.check_live(qubits)?;
        Ok(self.state.probability_where(mask_of(qubits), 0))
    }

    fn check_live(&self, qubits: &[Qubit]) -> Result<()> {
        let n = self.num_qubits();
        let mut seen = 0usize;
        for &q in qubits {
            if q >= n || seen >> q & 1 == 1 {
                return Err(Error::BadIndex(format!("qubit {q} is dead or repeated")));
            }
            seen |= 1 << q;
        }
        Ok(())
    }

    fn exec(&mut self, gate: &Gate, map: Option<&[Qubit]>) {
        let m = |q: Qubit| map.map_or(q, |m| m[q]);
        let zero = self.zero;
        let known_zero = |q: Qubit| zero >> q & 1 == 1;
        match gate {
            Gate::Unitary {
                target,
                controls,
                matrix,
            } => {
                let mut ctrls = Vec::with_capacity(controls.len());
                for c in controls {
                    let q = m(c.qubit);
                    if !known_zero(q) {
                        ctrls.push((q, c.on));
                    } else if c.on {
                        return;
                    }
                }
                let t = m(*target);
                if known_zero(t) && matrix[1][0] != ZERO {
                    self.zero &= !(1 << t);
                }
                self.state.apply_matrix(t, &ctrls, matrix, self.zero & !(1 << t));
            }
            Gate::Permutation { qubits, map: perm } => {
                let qs: Vec<Qubit> = qubits.iter().map(|&q| m(q)).collect();
                let qmask = mask_of(&qs);
                let inside = zero & qmask;
                let mut reached = 0;
                for (v, &w) in perm.iter().enumerate() {
                    if pattern(&qs, v as u64) & inside == 0 {
                        reached |= pattern(&qs, w as u64);
                    }
                }
                self.zero &= !reached;
                self.state.apply_permutation(&qs, perm, zero & !qmask);
            }
            Gate::Phase { qubits, entries } => {
                let qs: Vec<Qubit> = qubits.iter().map(|&q| m(q)).collect();
                let entries: &[(u64, C64)] = entries;
                self.state.apply_phases(&qs, entries, zero);
            }
            Gate::Oracle(call) => {
                let inputs: Vec<Qubit> = call.inputs.iter().map(|&q| m(q)).collect();
                let target = m(call.target);
                match call.oracle.as_ref() {
                    BitOracle::Table(t) => {
                        self.base_queries += 1;
                        let live_in = zero & mask_of(&inputs);
                        let fires = t
                            .bits()
                            .iter()
                            .enumerate()
                            .any(|(a, &on)| on && pattern(&inputs, a as u64) & live_in == 0);
                        if !fires {
                            return;
                        }
                        self.zero &= !(1 << target);
                        self.state
                            .apply_xor_table(&inputs, target, t.bits(), self.zero);
                    }
                    BitOracle::Program(p) => {
                        let ancillas: Vec<Qubit> = call
                            .ancillas
                            .iter()
                            .map(|&q| if q == usize::MAX { q } else { m(q) })
                            .collect();
                        let local = p.call_map(&inputs, target, &ancillas);
                        for g in p.gates_for(self.elide_nested, call.inverse) {
                            self.exec(g, Some(&local));
                        }
                    }
                }
            }
        }
    }
}
