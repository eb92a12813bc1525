use std::ops::Range;
use std::sync::OnceLock;

use serde::Serialize;

use super::gate::{Gate, LayerId};
use super::register::{Qubit, Register};
use super::state::pattern;
use crate::error::{Error, Result};
use crate::gadgets::BitOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LayerKind {
    /// The `j`-th Grover iterate of every block.
    Iterate(u32),
    /// The oracle write that produces each block's σ bit.
    Readout,
}

/// A set of oracle invocations that run simultaneously.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layer {
    pub kind: LayerKind,
    pub uncompute: bool,
}

/// Query and depth accounting measured from a built program. Nested oracle
/// programs contribute their own counts recursively.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProgramStats {
    /// Forward Grover-iterate layers; nested layers multiply.
    pub oracle_layer_depth: u64,
    /// Every sequential oracle layer, including readout and uncompute.
    pub full_oracle_depth: u64,
    /// Largest number of base-predicate evaluations in one layer.
    pub max_parallel_queries: u64,
    pub total_base_queries: u64,
    /// Elementary gates after inlining nested programs.
    pub gate_count: u64,
}

/// Where the pieces of a SEARCH program live, so it can be executed one
/// independent block at a time.
#[derive(Clone, Debug)]
pub struct SearchLayout {
    pub var: String,
    pub m: u64,
    pub blocks: Vec<BlockLayout>,
    pub sigmas: Vec<Qubit>,
    /// Qubits used by every block and returned exactly to |0⟩ after each use.
    pub shared: Vec<Qubit>,
    pub combiner: Range<usize>,
    pub combiner_scratch: Vec<Qubit>,
    pub uncompute: Range<usize>,
    /// Gates after the uncompute pass (output negation for ∀).
    pub tail: Range<usize>,
}

#[derive(Clone, Debug)]
pub struct BlockLayout {
    pub gates: Range<usize>,
    /// Qubits private to the block.
    pub qubits: Vec<Qubit>,
    pub sigma: Qubit,
    pub counter: Register,
    pub target: Register,
}

/// An ordered list of gates over a fixed set of qubits, optionally usable as
/// a bit oracle (`inputs` are only read, `output` is XORed with the result).
#[derive(Debug)]
pub struct UnitaryProgram {
    num_qubits: usize,
    registers: Vec<Register>,
    inputs: Vec<Qubit>,
    output: Option<Qubit>,
    gates: Vec<Gate>,
    layers: Vec<Layer>,
    search: Option<SearchLayout>,
    stats: OnceLock<ProgramStats>,
    inverse_gates: OnceLock<Vec<Gate>>,
    elided: OnceLock<Option<ElidedPlan>>,
    elided_live: OnceLock<Vec<bool>>,
    all_live: OnceLock<Vec<bool>>,
}

/// The program with its combiner replaced by the classical function it
/// computes; valid whenever the combiner's scratch starts at zero.
#[derive(Debug)]
struct ElidedPlan {
    gates: Vec<Gate>,
    inverse: Vec<Gate>,
}

impl UnitaryProgram {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name() == name)
    }

    pub fn inputs(&self) -> &[Qubit] {
        &self.inputs
    }

    pub fn output(&self) -> Option<Qubit> {
        self.output
    }

    /// Every qubit that is neither an input nor the output, ascending.
    pub fn ancillas(&self) -> Vec<Qubit> {
        (0..self.num_qubits)
            .filter(|q| !self.inputs.contains(q) && Some(*q) != self.output)
            .collect()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn search_layout(&self) -> Option<&SearchLayout> {
        self.search.as_ref()
    }

    /// The program run backwards with every gate inverted.
    pub fn inverse(&self) -> UnitaryProgram {
        UnitaryProgram {
            num_qubits: self.num_qubits,
            registers: self.registers.clone(),
            inputs: self.inputs.clone(),
            output: self.output,
            gates: self.inverse_gate_list().to_vec(),
            layers: self.layers.clone(),
            search: None,
            stats: OnceLock::new(),
            inverse_gates: OnceLock::new(),
            elided: OnceLock::new(),
            elided_live: OnceLock::new(),
            all_live: OnceLock::new(),
        }
    }

    pub(crate) fn inverse_gate_list(&self) -> &[Gate] {
        self.inverse_gates
            .get_or_init(|| self.gates.iter().rev().map(Gate::inverse).collect())
    }

    pub fn stats(&self) -> ProgramStats {
        *self.stats.get_or_init(|| self.measure())
    }

    fn measure(&self) -> ProgramStats {
        #[derive(Default, Clone, Copy)]
        struct Acc {
            depth: u64,
            full: u64,
            width: u64,
        }
        let mut tagged = vec![Acc::default(); self.layers.len()];
        let mut stats = ProgramStats::default();
        for gate in &self.gates {
            let Gate::Oracle(call) = gate else {
                stats.gate_count += 1;
                continue;
            };
            let o = &call.oracle;
            stats.total_base_queries += o.total_queries();
            stats.gate_count += o.gate_count();
            match call.layer {
                Some(LayerId(id)) => {
                    let acc = &mut tagged[id as usize];
                    acc.depth = acc.depth.max(o.depth());
                    acc.full = acc.full.max(o.full_depth());
                    acc.width += o.parallel_queries();
                }
                None => {
                    stats.oracle_layer_depth += o.depth();
                    stats.full_oracle_depth += o.full_depth();
                    stats.max_parallel_queries = stats.max_parallel_queries.max(o.parallel_queries());
                }
            }
        }
        for (layer, acc) in self.layers.iter().zip(&tagged) {
            if acc.width == 0 {
                continue;
            }
            if matches!(layer.kind, LayerKind::Iterate(_)) && !layer.uncompute {
                stats.oracle_layer_depth += acc.depth;
            }
            stats.full_oracle_depth += acc.full;
            stats.max_parallel_queries = stats.max_parallel_queries.max(acc.width);
        }
        stats
    }

    /// Gate list used when this program runs as a nested oracle.
    pub(crate) fn gates_for(&self, elide: bool, inverse: bool) -> &[Gate] {
        match (elide.then(|| self.elided_plan()).flatten(), inverse) {
            (Some(plan), false) => &plan.gates,
            (Some(plan), true) => &plan.inverse,
            (None, false) => &self.gates,
            (None, true) => self.inverse_gate_list(),
        }
    }

    /// Whether each local qubit is touched when the program runs with
    /// combiners elided.
    pub(crate) fn live_qubits(&self, elide: bool) -> &[bool] {
        if !elide {
            return self.all_live.get_or_init(|| vec![true; self.num_qubits]);
        }
        self.elided_live.get_or_init(|| {
            let mut live = vec![false; self.num_qubits];
            for g in self.gates_for(true, false) {
                mark_live(g, &mut live, true);
            }
            live
        })
    }

    fn elided_plan(&self) -> Option<&ElidedPlan> {
        self.elided.get_or_init(|| self.build_elided()).as_ref()
    }

    fn build_elided(&self) -> Option<ElidedPlan> {
        let layout = self.search.as_ref()?;
        let output = self.output?;
        let table = combiner_table(
            &self.gates[layout.combiner.clone()],
            &layout.sigmas,
            &layout.combiner_scratch,
            output,
        )
        .ok()?;
        if !table.clean.iter().all(|&c| c) {
            return None;
        }
        let mut qubits = layout.sigmas.clone();
        qubits.push(output);
        let map: Vec<u32> = (0..1u32 << qubits.len())
            .map(|v| if table.out[(v >> 1) as usize] { v ^ 1 } else { v })
            .collect();
        let fused = Gate::permutation(qubits, map).ok()?;
        let mut gates = self.gates[..layout.combiner.start].to_vec();
        gates.push(fused);
        gates.extend_from_slice(&self.gates[layout.combiner.end..]);
        let inverse = gates.iter().rev().map(Gate::inverse).collect();
        Some(ElidedPlan { gates, inverse })
    }

    /// Local-to-caller qubit map for an invocation with the given wiring.
    pub(crate) fn call_map(&self, inputs: &[Qubit], target: Qubit, ancillas: &[Qubit]) -> Vec<Qubit> {
        let mut map = vec![usize::MAX; self.num_qubits];
        for (&local, &q) in self.inputs.iter().zip(inputs) {
            map[local] = q;
        }
        if let Some(out) = self.output {
            map[out] = target;
        }
        for (local, &q) in self.ancillas().into_iter().zip(ancillas) {
            map[local] = q;
        }
        map
    }
}

/// Marks qubits touched by `gate`; nested programs contribute only the
/// ancillas their (possibly elided) plan uses.
pub(crate) fn mark_live(gate: &Gate, live: &mut [bool], elide: bool) {
    match gate {
        Gate::Oracle(call) => {
            for &q in call.inputs.iter().chain(std::iter::once(&call.target)) {
                live[q] = true;
            }
            match call.oracle.as_ref() {
                BitOracle::Table(_) => {}
                BitOracle::Program(p) => {
                    let inner = p.live_qubits(elide);
                    for (local, &q) in p.ancillas().into_iter().zip(&call.ancillas) {
                        if inner[local] {
                            live[q] = true;
                        }
                    }
                }
            }
        }
        g => {
            for q in g.qubits() {
                live[q] = true;
            }
        }
    }
}

/// Classical behaviour of a combiner on every σ pattern (big-endian over
/// `sigmas`) with scratch and output starting at zero.
pub(crate) struct CombinerTable {
    pub out: Vec<bool>,
    /// Scratch returned to zero and σ bits untouched.
    pub clean: Vec<bool>,
}

pub(crate) fn combiner_table(
    gates: &[Gate],
    sigmas: &[Qubit],
    scratch: &[Qubit],
    output: Qubit,
) -> Result<CombinerTable> {
    let wires: Vec<Qubit> = sigmas
        .iter()
        .chain(scratch)
        .chain(std::iter::once(&output))
        .copied()
        .collect();
    let max = wires.iter().copied().max().unwrap_or(0);
    let mut local = vec![usize::MAX; max + 1];
    for (i, &q) in wires.iter().enumerate() {
        local[q] = i;
    }
    let mut remapped = Vec::with_capacity(gates.len());
    for g in gates {
        if g.qubits().iter().any(|&q| q > max || local[q] == usize::MAX) {
            return Err(Error::NotFactorable(
                "combiner touches qubits outside σ, scratch and output".into(),
            ));
        }
        remapped.push(g.remap(&local));
    }
    let m = sigmas.len();
    let sig_local: Vec<usize> = (0..m).collect();
    let scratch_mask: usize = (m..m + scratch.len()).fold(0, |a, q| a | (1 << q));
    let out_bit = 1usize << (m + scratch.len());
    let mut out = Vec::with_capacity(1 << m);
    let mut clean = Vec::with_capacity(1 << m);
    for s in 0..1u64 << m {
        let start = pattern(&sig_local, s);
        let mut idx = start;
        for g in &remapped {
            idx = g.apply_classical(idx).ok_or_else(|| {
                Error::NotFactorable("combiner contains a non-classical gate".into())
            })?;
        }
        out.push(idx & out_bit != 0);
        clean.push(idx & scratch_mask == 0 && idx & ((1 << m) - 1) == start);
    }
    Ok(CombinerTable { out, clean })
}

/// Incrementally assembles a [`UnitaryProgram`].
#[derive(Debug, Default)]
pub struct ProgramBuilder {
    num_qubits: usize,
    registers: Vec<Register>,
    inputs: Vec<Qubit>,
    output: Option<Qubit>,
    gates: Vec<Gate>,
    layers: Vec<Layer>,
    search: Option<SearchLayout>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn alloc(&mut self, name: impl Into<String>, width: usize) -> Register {
        let qubits = (self.num_qubits..self.num_qubits + width).collect();
        self.num_qubits += width;
        let reg = Register::new(name, qubits);
        self.registers.push(reg.clone());
        reg
    }

    pub fn alloc_qubit(&mut self, name: impl Into<String>) -> Qubit {
        self.alloc(name, 1).qubit(0)
    }

    /// Allocates a register the program only reads.
    pub fn input(&mut self, name: impl Into<String>, width: usize) -> Register {
        let reg = self.alloc(name, width);
        self.inputs.extend_from_slice(reg.qubits());
        reg
    }

    /// Allocates the qubit the program XORs its result into.
    pub fn output(&mut self, name: impl Into<String>) -> Qubit {
        let q = self.alloc_qubit(name);
        self.output = Some(q);
        q
    }

    pub fn layer(&mut self, kind: LayerKind) -> LayerId {
        self.layers.push(Layer {
            kind,
            uncompute: false,
        });
        LayerId(self.layers.len() as u32 - 1)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Appends the inverse of `range` in reverse order. Oracle calls land in
    /// fresh layers marked as uncompute.
    pub fn push_inverse_of(&mut self, range: Range<usize>) -> Result<()> {
        let mut mirrored: Vec<Option<LayerId>> = vec![None; self.layers.len()];
        for i in range.rev() {
            let mut g = self.gates[i].inverse();
            if let Gate::Oracle(call) = &mut g {
                if let Some(LayerId(id)) = call.layer {
                    let id = id as usize;
                    let m = *mirrored[id].get_or_insert_with(|| {
                        self.layers.push(Layer {
                            kind: self.layers[id].kind,
                            uncompute: !self.layers[id].uncompute,
                        });
                        LayerId(self.layers.len() as u32 - 1)
                    });
                    call.layer = Some(m);
                }
            }
            self.gates.push(g);
        }
        Ok(())
    }

    pub fn set_search_layout(&mut self, layout: SearchLayout) {
        self.search = Some(layout);
    }

    pub fn search_layout_mut(&mut self) -> Option<&mut SearchLayout> {
        self.search.as_mut()
    }

    pub fn finish(self) -> UnitaryProgram {
        UnitaryProgram {
            num_qubits: self.num_qubits,
            registers: self.registers,
            inputs: self.inputs,
            output: self.output,
            gates: self.gates,
            layers: self.layers,
            search: self.search,
            stats: OnceLock::new(),
            inverse_gates: OnceLock::new(),
            elided: OnceLock::new(),
            elided_live: OnceLock::new(),
            all_live: OnceLock::new(),
        }
    }
}
