//! Reusable unitary building blocks. `emit_*` functions append to a
//! [`ProgramBuilder`]; the plain-named functions build standalone programs.

mod budget;
mod oracle;

use std::sync::Arc;

pub use budget::ErrorBudget;
pub use oracle::{negated, BitOracle};

use crate::error::{Error, Result};
use crate::sim::{
    bits_for, ry, Control, Gate, LayerId, OracleCall, ProgramBuilder, Qubit, Register,
    UnitaryProgram,
};

/// Where and how a block invokes its oracle: fixed leading inputs
/// (`context`) followed by the searched register, plus private ancillas.
#[derive(Clone, Copy, Debug)]
pub struct OracleSite<'a> {
    pub oracle: &'a Arc<BitOracle>,
    pub context: &'a [Qubit],
    pub ancillas: &'a [Qubit],
}

impl OracleSite<'_> {
    pub fn call(&self, target: &Register, out: Qubit, layer: Option<LayerId>) -> Result<Gate> {
        let width = self.context.len() + target.width();
        if width != self.oracle.input_width() {
            return Err(Error::WidthMismatch {
                expected: self.oracle.input_width(),
                found: width,
            });
        }
        Ok(Gate::Oracle(OracleCall {
            oracle: self.oracle.clone(),
            inputs: self.context.iter().chain(target.qubits()).copied().collect(),
            target: out,
            ancillas: self.ancillas.to_vec(),
            layer,
            inverse: false,
        }))
    }
}

/// Uniform superposition over counter values 1..=m from |0⟩.
pub fn emit_prep_uniform_range(b: &mut ProgramBuilder, m: u64, counter: &Register) -> Result<()> {
    if m == 0 || bits_for(m) > counter.width() {
        return Err(Error::WidthTooSmall {
            needed_value: m,
            width: counter.width(),
        });
    }
    split(b, counter, m, 0, 0)
}

fn split(b: &mut ProgramBuilder, counter: &Register, m: u64, depth: usize, prefix: u64) -> Result<()> {
    let w = counter.width();
    if depth == w {
        return Ok(());
    }
    let count = |p: u64, d: usize| -> u64 {
        let r = w - d;
        let lo = (p << r).max(1);
        let hi = ((p + 1) << r) - 1;
        if lo > hi || lo > m {
            0
        } else {
            hi.min(m) - lo + 1
        }
    };
    let node = count(prefix, depth);
    let n0 = count(prefix << 1, depth + 1);
    let n1 = count((prefix << 1) | 1, depth + 1);
    let controls: Vec<Control> = (0..depth)
        .map(|i| Control {
            qubit: counter.qubit(i),
            on: (prefix >> (depth - 1 - i)) & 1 == 1,
        })
        .collect();
    if n1 > 0 {
        let theta = 2.0 * (n0 as f64 / node as f64).sqrt().acos();
        b.push(Gate::Unitary {
            target: counter.qubit(depth),
            controls,
            matrix: ry(theta),
        })?;
    }
    if n0 > 0 {
        split(b, counter, m, depth + 1, prefix << 1)?;
    }
    if n1 > 0 {
        split(b, counter, m, depth + 1, (prefix << 1) | 1)?;
    }
    Ok(())
}

fn emit_w(b: &mut ProgramBuilder, target: &Register) -> Result<()> {
    for &q in target.qubits() {
        b.push(Gate::h(q))?;
    }
    Ok(())
}

/// One Grover iterate W·F0·W·F_p on `target`. `work` must be |0⟩ and is
/// returned to |0⟩.
pub fn emit_grover_iterate(
    b: &mut ProgramBuilder,
    site: OracleSite<'_>,
    target: &Register,
    work: Qubit,
    layer: Option<LayerId>,
) -> Result<()> {
    let call = site.call(target, work, layer)?;
    b.push(Gate::x(work))?;
    b.push(Gate::h(work))?;
    b.push(call)?;
    b.push(Gate::h(work))?;
    b.push(Gate::x(work))?;
    emit_w(b, target)?;
    b.push(Gate::phase_flip(target.qubits().to_vec(), [0]))?;
    emit_w(b, target)
}

/// W on `target`, then iterate `j` applied on the branches where the counter
/// reads at least `j`, for `j = 1..=m`. The condition is folded into phase
/// gates around an unconditioned oracle call: with `work` in |+⟩ the XOR
/// oracle acts trivially, so only the branches flipped to |−⟩ pick up p(x).
pub fn emit_controlled_grover_power(
    b: &mut ProgramBuilder,
    counter: &Register,
    m: u64,
    site: OracleSite<'_>,
    target: &Register,
    work: Qubit,
    layers: Option<&[LayerId]>,
) -> Result<()> {
    if m == 0 || bits_for(m) > counter.width() {
        return Err(Error::WidthTooSmall {
            needed_value: m,
            width: counter.width(),
        });
    }
    let layer = |j: u64| layers.map(|l| l[j as usize - 1]);
    emit_w(b, target)?;
    emit_grover_iterate(b, site, target, work, layer(1))?;
    let n = target.width();
    let top = counter.max_value();
    let mut cw = counter.qubits().to_vec();
    cw.push(work);
    let mut ct = counter.qubits().to_vec();
    ct.extend_from_slice(target.qubits());
    for j in 2..=m {
        let flip_work = Gate::phase_flip(cw.clone(), (j..=top).map(|v| (v << 1) | 1));
        b.push(Gate::h(work))?;
        b.push(flip_work.clone())?;
        b.push(site.call(target, work, layer(j))?)?;
        b.push(flip_work)?;
        b.push(Gate::h(work))?;
        emit_w(b, target)?;
        b.push(Gate::phase_flip(ct.clone(), (j..=top).map(|v| v << n)))?;
        emit_w(b, target)?;
    }
    Ok(())
}

/// c ^= r AND s, then r ^= s AND NOT c.
pub fn emit_f_step(b: &mut ProgramBuilder, result: Qubit, controller: Qubit, subject: Qubit) -> Result<()> {
    for g in f_step_gates(result, controller, subject) {
        b.push(g)?;
    }
    Ok(())
}

fn f_step_gates(r: Qubit, c: Qubit, s: Qubit) -> [Gate; 2] {
    [
        Gate::mcx(vec![Control::on(r), Control::on(s)], c),
        Gate::mcx(vec![Control::on(s), Control::off(c)], r),
    ]
}

/// Writes OR(σ) into `output` using `scratch` (M+1 zeroed qubits), which is
/// restored exactly.
pub fn emit_exists(b: &mut ProgramBuilder, sigmas: &[Qubit], scratch: &[Qubit], output: Qubit) -> Result<()> {
    let m = sigmas.len();
    if scratch.len() != m + 1 {
        return Err(Error::WidthMismatch {
            expected: m + 1,
            found: scratch.len(),
        });
    }
    let result = scratch[m];
    for i in 0..m {
        emit_f_step(b, result, scratch[i], sigmas[i])?;
    }
    b.push(Gate::cx(result, output))?;
    for i in (0..m).rev() {
        let [g1, g2] = f_step_gates(result, scratch[i], sigmas[i]);
        b.push(g2)?;
        b.push(g1)?;
    }
    Ok(())
}

pub fn emit_not(b: &mut ProgramBuilder, q: Qubit) -> Result<()> {
    b.push(Gate::x(q))
}

/// Program over register `counter` preparing values 1..=m uniformly.
pub fn prep_uniform_range(m: u64, width: usize) -> Result<UnitaryProgram> {
    let mut b = ProgramBuilder::new();
    let counter = b.alloc("counter", width);
    emit_prep_uniform_range(&mut b, m, &counter)?;
    Ok(b.finish())
}

/// One iterate over an `n`-qubit register `x`, with registers `work` and
/// `inner` (the oracle's ancillas).
pub fn grover_iterate(oracle: &Arc<BitOracle>, n: usize) -> Result<UnitaryProgram> {
    let mut b = ProgramBuilder::new();
    let x = b.alloc("x", n);
    let work = b.alloc_qubit("work");
    let inner = b.alloc("inner", oracle.ancilla_width());
    let site = OracleSite {
        oracle,
        context: &[],
        ancillas: inner.qubits(),
    };
    emit_grover_iterate(&mut b, site, &x, work, None)?;
    Ok(b.finish())
}

/// Registers `counter`, `x`, `work`, `inner`; the counter is left for the
/// caller to prepare.
pub fn controlled_grover_power(
    m: u64,
    counter_width: usize,
    oracle: &Arc<BitOracle>,
    n: usize,
) -> Result<UnitaryProgram> {
    let mut b = ProgramBuilder::new();
    let counter = b.alloc("counter", counter_width);
    let x = b.alloc("x", n);
    let work = b.alloc_qubit("work");
    let inner = b.alloc("inner", oracle.ancilla_width());
    let site = OracleSite {
        oracle,
        context: &[],
        ancillas: inner.qubits(),
    };
    emit_controlled_grover_power(&mut b, &counter, m, site, &x, work, None)?;
    Ok(b.finish())
}

/// The three-qubit step on qubits 0 (result), 1 (controller), 2 (subject).
pub fn f_step() -> UnitaryProgram {
    let mut b = ProgramBuilder::new();
    let r = b.alloc_qubit("result");
    let c = b.alloc_qubit("controller");
    let s = b.alloc_qubit("subject");
    emit_f_step(&mut b, r, c, s).expect("three distinct qubits");
    b.finish()
}

/// Registers `sigma` (M) and `ancilla` (M+2); OR lands in the last ancilla.
pub fn exists_gadget(m: usize) -> Result<UnitaryProgram> {
    let mut b = ProgramBuilder::new();
    let sigma = b.alloc("sigma", m);
    let anc = b.alloc("ancilla", m + 2);
    emit_exists(&mut b, sigma.qubits(), &anc.qubits()[..m + 1], anc.qubit(m + 1))?;
    Ok(b.finish())
}

pub fn not_gate() -> UnitaryProgram {
    let mut b = ProgramBuilder::new();
    let q = b.alloc_qubit("q");
    emit_not(&mut b, q).expect("live qubit");
    b.finish()
}
