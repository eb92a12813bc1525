//! Dense statevector simulation: registers, gates, programs and the engine
//! that runs them.

mod engine;
mod gate;
mod program;
mod register;
mod state;

pub use engine::{Engine, DEFAULT_MAX_QUBITS};
pub use gate::{ry, Control, Gate, LayerId, OracleCall, HADAMARD, PAULI_X};
pub use program::{
    BlockLayout, Layer, LayerKind, ProgramBuilder, ProgramStats, SearchLayout, UnitaryProgram,
};
pub(crate) use program::combiner_table;
pub use register::{bits_for, Qubit, Register};
pub use state::{pattern, read_value, Mat2, StateVector, NORM_TOLERANCE};
