//! Block-wise execution of SEARCH programs.
//!
//! Before the combiner runs, the M blocks act on disjoint qubits (plus a
//! work qubit each returns to |0⟩), so the state is a product of one factor
//! per block. Each factor is simulated on its own small engine, the
//! combiner is evaluated classically over all σ patterns, and the final
//! readout follows from the per-block probabilities q_i = P(σ_i = 1):
//!
//! * P(out = g) = Σ_{σ : out(σ) = g} Π_i q_i^{σ_i} (1 − q_i)^{1 − σ_i}
//! * after uncompute, block i contributes ⟨ψ_i|Π_{σ_i}|ψ_i⟩ to the overlap
//!   with the zero state, so the ancilla zero fidelity is
//!   Σ_g (Σ_{σ : clean, out(σ) = g} Π_i q_i^{σ_i} (1 − q_i)^{1 − σ_i})².

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::gadgets::BitOracle;
use crate::sim::{combiner_table, pattern, Engine, Gate, Qubit, UnitaryProgram, PAULI_X};

/// Shared qubits must come back to |0⟩ to this precision.
const SHARED_RESTORE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct FactoredRun {
    pub gamma_prob: f64,
    pub zero_fidelity: f64,
    /// P(σ_i = 1) for each block.
    pub block_success: Vec<f64>,
    /// Widest dense state simulated.
    pub simulated_width: usize,
    /// Blocks that needed their own simulation after deduplication.
    pub distinct_blocks: usize,
}

/// Runs `program` on input value `input` (big-endian over its inputs).
pub fn run_factored(program: &UnitaryProgram, input: u64, max_qubits: usize) -> Result<FactoredRun> {
    let layout = program
        .search_layout()
        .ok_or_else(|| Error::NotFactorable("program has no search layout".into()))?;
    let output = program
        .output()
        .ok_or_else(|| Error::NotFactorable("program has no output".into()))?;
    check_input(program, input)?;
    check_structure(program)?;

    let gates = program.gates();
    let mut seen: Vec<(Vec<Gate>, usize, f64)> = Vec::new();
    let mut block_success = Vec::with_capacity(layout.blocks.len());
    let mut simulated_width = 0;
    for block in &layout.blocks {
        let (canon, width, sigma) = localize(program, &gates[block.gates.clone()], block.sigma)?;
        simulated_width = simulated_width.max(width);
        let q = match seen.iter().find(|(g, w, _)| *w == width && *g == canon) {
            Some(&(_, _, q)) => q,
            None => {
                let q = simulate_block(program, &canon, width, sigma, input, max_qubits)?;
                seen.push((canon, width, q));
                q
            }
        };
        block_success.push(q);
    }

    let table = combiner_table(
        &gates[layout.combiner.clone()],
        &layout.sigmas,
        &layout.combiner_scratch,
        output,
    )?;
    let m = layout.blocks.len();
    let mut p_out = [0.0f64; 2];
    let mut overlap = [0.0f64; 2];
    for s in 0..1usize << m {
        let w: f64 = (0..m)
            .map(|i| {
                let bit = (s >> (m - 1 - i)) & 1 == 1;
                if bit {
                    block_success[i]
                } else {
                    1.0 - block_success[i]
                }
            })
            .product();
        let g = table.out[s] as usize;
        p_out[g] += w;
        if table.clean[s] {
            overlap[g] += w;
        }
    }
    let flips = layout.tail.len() % 2 == 1;
    let gamma_prob = if flips { p_out[0] } else { p_out[1] };
    Ok(FactoredRun {
        gamma_prob: gamma_prob.clamp(0.0, 1.0),
        zero_fidelity: (overlap[0].powi(2) + overlap[1].powi(2)).clamp(0.0, 1.0),
        block_success,
        simulated_width,
        distinct_blocks: seen.len(),
    })
}

pub(crate) fn check_input(program: &UnitaryProgram, input: u64) -> Result<()> {
    let w = program.inputs().len();
    if w < 64 && input >> w != 0 {
        return Err(Error::ValueOutOfRange { value: input, width: w });
    }
    Ok(())
}

/// Qubits a gate touches when nested programs run with combiners elided,
/// in wire order.
fn touched(gate: &Gate) -> Vec<Qubit> {
    match gate {
        Gate::Oracle(call) => {
            let mut qs: Vec<Qubit> = call.inputs.clone();
            qs.push(call.target);
            if let BitOracle::Program(p) = call.oracle.as_ref() {
                let live = p.live_qubits(true);
                qs.extend(
                    p.ancillas()
                        .into_iter()
                        .zip(&call.ancillas)
                        .filter(|(local, _)| live[*local])
                        .map(|(_, &q)| q),
                );
            }
            qs
        }
        g => g.qubits(),
    }
}

/// Renumbers a block onto a compact local register: inputs, shared qubits,
/// then every other live qubit in order of first use.
fn localize(program: &UnitaryProgram, gates: &[Gate], sigma: Qubit) -> Result<(Vec<Gate>, usize, Qubit)> {
    let layout = program.search_layout().expect("checked by caller");
    let mut map = vec![usize::MAX; program.num_qubits()];
    let mut next = 0;
    for &q in program.inputs().iter().chain(&layout.shared) {
        map[q] = next;
        next += 1;
    }
    for g in gates {
        for q in touched(g) {
            if map[q] == usize::MAX {
                map[q] = next;
                next += 1;
            }
        }
    }
    if map[sigma] == usize::MAX {
        map[sigma] = next;
        next += 1;
    }
    Ok((gates.iter().map(|g| g.remap(&map)).collect(), next, map[sigma]))
}

fn simulate_block(
    program: &UnitaryProgram,
    gates: &[Gate],
    width: usize,
    sigma: Qubit,
    input: u64,
    max_qubits: usize,
) -> Result<f64> {
    let n_in = program.inputs().len();
    let n_shared = program.search_layout().map_or(0, |l| l.shared.len());
    let mut engine = Engine::with_max_qubits(max_qubits);
    engine.alloc_register(width, "block")?;
    let inputs: Vec<Qubit> = (0..n_in).collect();
    let start = pattern(&inputs, input);
    for q in (0..n_in).filter(|q| start >> q & 1 == 1) {
        engine.apply(&Gate::x(q))?;
    }
    engine.set_elide_nested(true);
    engine.run_gates(gates);
    let shared: Vec<Qubit> = (n_in..n_in + n_shared).collect();
    let fidelity = engine.zero_fidelity(&shared)?;
    if fidelity < 1.0 - SHARED_RESTORE_TOLERANCE {
        return Err(Error::NotFactorable(format!(
            "shared qubits not restored after a block (fidelity {fidelity})"
        )));
    }
    Ok(engine.state().probability_of(&[sigma], 1))
}

fn same_up_to_layer(a: &Gate, b: &Gate) -> bool {
    match (a, b) {
        (Gate::Oracle(x), Gate::Oracle(y)) => {
            let mut y = y.clone();
            y.layer = x.layer;
            *x == y
        }
        _ => a == b,
    }
}

/// Verifies the assumptions the block-wise evaluation rests on.
fn check_structure(program: &UnitaryProgram) -> Result<()> {
    let layout = program.search_layout().expect("checked by caller");
    let gates = program.gates();
    let fail = |msg: &str| Err(Error::NotFactorable(msg.to_string()));

    let mut pos = 0;
    let mut owned_all = HashSet::new();
    let common: HashSet<Qubit> = program.inputs().iter().chain(&layout.shared).copied().collect();
    for block in &layout.blocks {
        if block.gates.start != pos {
            return fail("blocks are not contiguous");
        }
        pos = block.gates.end;
        let owned: HashSet<Qubit> = block.qubits.iter().copied().collect();
        for &q in &owned {
            if common.contains(&q) || !owned_all.insert(q) {
                return fail("blocks share private qubits");
            }
        }
        for g in &gates[block.gates.clone()] {
            if g.qubits().iter().any(|q| !owned.contains(q) && !common.contains(q)) {
                return fail("a block touches qubits outside its factor");
            }
        }
    }
    if pos != layout.combiner.start {
        return fail("combiner does not follow the blocks");
    }
    if layout.uncompute.start != layout.combiner.end || layout.uncompute.len() != pos {
        return fail("uncompute range does not mirror the blocks");
    }
    for k in 0..pos {
        let mirrored = gates[pos - 1 - k].inverse();
        if !same_up_to_layer(&gates[layout.uncompute.start + k], &mirrored) {
            return fail("uncompute is not the inverse of the blocks");
        }
    }
    if layout.tail.start != layout.uncompute.end || layout.tail.end != gates.len() {
        return fail("unexpected gates after uncompute");
    }
    let output = program.output();
    for g in &gates[layout.tail.clone()] {
        let ok = matches!(g, Gate::Unitary { target, controls, matrix }
            if Some(*target) == output && controls.is_empty() && *matrix == PAULI_X);
        if !ok {
            return fail("tail may only negate the output");
        }
    }
    Ok(())
}
