use std::sync::Arc;

use crate::classical::iterations_for;
use crate::error::{Error, Result};
use crate::gadgets::{
    emit_controlled_grover_power, emit_exists, emit_not, emit_prep_uniform_range, BitOracle,
    ErrorBudget, OracleSite,
};
use crate::sim::{bits_for, BlockLayout, LayerKind, ProgramBuilder, Register, SearchLayout, UnitaryProgram};

/// Decides ∃x p(x) with `oracle` over an `n`-bit search register and no
/// other inputs.
pub fn build_search(oracle: &Arc<BitOracle>, n: usize, budget: &ErrorBudget) -> Result<UnitaryProgram> {
    SearchSpec {
        oracle,
        context: &[],
        var: "x",
        n,
        budget,
        negate: false,
    }
    .build()
}

/// A search over the last `n` input bits of `oracle`; the leading inputs
/// are passed through as the program's own inputs.
#[derive(Clone, Copy, Debug)]
pub struct SearchSpec<'a> {
    pub oracle: &'a Arc<BitOracle>,
    /// Names and widths of the pass-through inputs, in oracle input order.
    pub context: &'a [(String, usize)],
    pub var: &'a str,
    pub n: usize,
    pub budget: &'a ErrorBudget,
    /// Flip the output after uncomputation (∀ as ¬∃¬).
    pub negate: bool,
}

impl SearchSpec<'_> {
    pub fn build(&self) -> Result<UnitaryProgram> {
        let budget = ErrorBudget::new(self.budget.p_err(), self.budget.epsilon(), self.budget.blocks())?;
        if self.n == 0 {
            return Err(Error::ZeroWidth(self.var.to_string()));
        }
        let ctx_width: usize = self.context.iter().map(|(_, w)| w).sum();
        if ctx_width + self.n != self.oracle.input_width() {
            return Err(Error::WidthMismatch {
                expected: self.oracle.input_width(),
                found: ctx_width + self.n,
            });
        }
        let blocks = budget.blocks();
        let m = iterations_for(self.n);
        let c = bits_for(m);

        let mut b = ProgramBuilder::new();
        let mut context = Vec::with_capacity(ctx_width);
        for (name, w) in self.context {
            context.extend_from_slice(b.input(name.clone(), *w).qubits());
        }
        let output = b.output("gamma");
        let work = b.alloc_qubit("work");
        let sigma = b.alloc("sigma", blocks);
        let scratch = b.alloc("exists", blocks + 1);
        let iterate_layers: Vec<_> = (1..=m).map(|j| b.layer(LayerKind::Iterate(j as u32))).collect();
        let readout = b.layer(LayerKind::Readout);

        let mut layouts = Vec::with_capacity(blocks);
        for i in 0..blocks {
            let counter = b.alloc(format!("b{i}.counter"), c);
            let target = b.alloc(format!("b{i}.{}", self.var), self.n);
            let inner = b.alloc(format!("b{i}.inner"), self.oracle.ancilla_width());
            let site = OracleSite {
                oracle: self.oracle,
                context: &context,
                ancillas: inner.qubits(),
            };
            let start = b.len();
            emit_prep_uniform_range(&mut b, m, &counter)?;
            emit_controlled_grover_power(&mut b, &counter, m, site, &target, work, Some(&iterate_layers))?;
            b.push(site.call(&target, sigma.qubit(i), Some(readout))?)?;
            let qubits = [&counter, &target, &inner]
                .iter()
                .flat_map(|r: &&Register| r.qubits().iter().copied())
                .chain(std::iter::once(sigma.qubit(i)))
                .collect();
            layouts.push(BlockLayout {
                gates: start..b.len(),
                qubits,
                sigma: sigma.qubit(i),
                counter,
                target,
            });
        }
        let combiner_start = b.len();
        emit_exists(&mut b, sigma.qubits(), scratch.qubits(), output)?;
        let combiner = combiner_start..b.len();
        b.push_inverse_of(0..combiner_start)?;
        let uncompute = combiner.end..b.len();
        if self.negate {
            emit_not(&mut b, output)?;
        }
        let tail = uncompute.end..b.len();
        b.set_search_layout(SearchLayout {
            var: self.var.to_string(),
            m,
            blocks: layouts,
            sigmas: sigma.qubits().to_vec(),
            shared: vec![work],
            combiner,
            combiner_scratch: scratch.qubits().to_vec(),
            uncompute,
            tail,
        });
        Ok(b.finish())
    }
}
