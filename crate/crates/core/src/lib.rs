//! Exact simulation of measurement-free quantum verification for prenex
//! formulas over an opaque predicate.
//!
//! Each quantifier becomes a search: M independent blocks run Grover
//! iterations with a counter-selected iteration count, write one witness
//! bit each, OR those bits into the output and uncompute everything else.
//! Inner quantifiers are nested searches called as oracles; `forall` is
//! handled as the negation of an `exists` over the negated predicate.

pub mod classical;
pub mod compiler;
pub mod error;
pub mod formula;
pub mod frontend;
pub mod gadgets;
pub mod search;
pub mod sim;

pub use classical::TruthTableOracle;
pub use compiler::{compile, estimate_resources, evaluate, CompiledFormula, EvalOptions, ResourceEstimate, RunReport};
pub use error::{Error, Result};
pub use formula::{Formula, Quantifier, Variable};
pub use gadgets::{BitOracle, ErrorBudget};
