use std::collections::HashSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::register::Qubit;
use super::state::{pattern, read_value, Mat2};
use crate::error::{Error, Result};
use crate::gadgets::BitOracle;

const C0: C64 = C64 { re: 0.0, im: 0.0 };
const C1: C64 = C64 { re: 1.0, im: 0.0 };

pub const HADAMARD: Mat2 = [
    [C64 { re: FRAC_1_SQRT_2, im: 0.0 }, C64 { re: FRAC_1_SQRT_2, im: 0.0 }],
    [C64 { re: FRAC_1_SQRT_2, im: 0.0 }, C64 { re: -FRAC_1_SQRT_2, im: 0.0 }],
];
pub const PAULI_X: Mat2 = [[C0, C1], [C1, C0]];

pub fn ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]
}

fn adjoint(m: &Mat2) -> Mat2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

/// A control wire: the gate acts only where `qubit` reads `on`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Control {
    pub qubit: Qubit,
    pub on: bool,
}

impl Control {
    pub fn on(qubit: Qubit) -> Self {
        Control { qubit, on: true }
    }

    pub fn off(qubit: Qubit) -> Self {
        Control { qubit, on: false }
    }
}

/// Index into a program's oracle-layer table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LayerId(pub u32);

/// One invocation of a bit oracle, |a, b⟩ → |a, b ⊕ p(a)⟩.
#[derive(Clone, Debug)]
pub struct OracleCall {
    pub oracle: Arc<BitOracle>,
    /// Qubits read as the oracle's input, big-endian.
    pub inputs: Vec<Qubit>,
    pub target: Qubit,
    /// Private work qubits handed to a nested program, in the program's
    /// ancilla order. Empty for truth-table oracles.
    pub ancillas: Vec<Qubit>,
    pub layer: Option<LayerId>,
    pub inverse: bool,
}

impl PartialEq for OracleCall {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.oracle, &other.oracle)
            && self.inputs == other.inputs
            && self.target == other.target
            && self.ancillas == other.ancillas
            && self.layer == other.layer
            && self.inverse == other.inverse
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// 2×2 unitary on `target`, applied where every control holds.
    Unitary {
        target: Qubit,
        controls: Vec<Control>,
        matrix: Mat2,
    },
    /// Basis relabeling: register value `v` over `qubits` becomes `map[v]`.
    Permutation { qubits: Vec<Qubit>, map: Arc<[u32]> },
    /// Diagonal gate; register values not listed keep phase 1.
    Phase {
        qubits: Vec<Qubit>,
        entries: Arc<[(u64, C64)]>,
    },
    Oracle(OracleCall),
}

impl Gate {
    pub fn single(target: Qubit, matrix: Mat2) -> Gate {
        Gate::Unitary {
            target,
            controls: Vec::new(),
            matrix,
        }
    }

    pub fn h(q: Qubit) -> Gate {
        Gate::single(q, HADAMARD)
    }

    pub fn x(q: Qubit) -> Gate {
        Gate::single(q, PAULI_X)
    }

    pub fn cx(control: Qubit, target: Qubit) -> Gate {
        Gate::mcx(vec![Control::on(control)], target)
    }

    pub fn mcx(controls: Vec<Control>, target: Qubit) -> Gate {
        Gate::Unitary {
            target,
            controls,
            matrix: PAULI_X,
        }
    }

    pub fn permutation(qubits: Vec<Qubit>, map: Vec<u32>) -> Result<Gate> {
        if map.len() != 1usize << qubits.len() {
            return Err(Error::WidthMismatch {
                expected: 1 << qubits.len(),
                found: map.len(),
            });
        }
        let mut seen = vec![false; map.len()];
        for &v in &map {
            let slot = seen
                .get_mut(v as usize)
                .ok_or_else(|| Error::BadIndex(format!("permutation image {v} out of range")))?;
            if *slot {
                return Err(Error::BadIndex(format!("permutation maps twice onto {v}")));
            }
            *slot = true;
        }
        Ok(Gate::Permutation {
            qubits,
            map: map.into(),
        })
    }

    /// Phase −1 on each listed register value.
    pub fn phase_flip(qubits: Vec<Qubit>, values: impl IntoIterator<Item = u64>) -> Gate {
        Gate::Phase {
            qubits,
            entries: values.into_iter().map(|v| (v, -C1)).collect(),
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Unitary {
                target,
                controls,
                matrix,
            } => Gate::Unitary {
                target: *target,
                controls: controls.clone(),
                matrix: adjoint(matrix),
            },
            Gate::Permutation { qubits, map } => {
                let mut inv = vec![0u32; map.len()];
                for (v, &w) in map.iter().enumerate() {
                    inv[w as usize] = v as u32;
                }
                Gate::Permutation {
                    qubits: qubits.clone(),
                    map: inv.into(),
                }
            }
            Gate::Phase { qubits, entries } => Gate::Phase {
                qubits: qubits.clone(),
                entries: entries.iter().map(|&(v, p)| (v, p.conj())).collect(),
            },
            Gate::Oracle(call) => Gate::Oracle(OracleCall {
                inverse: !call.inverse,
                ..call.clone()
            }),
        }
    }

    /// Every qubit the gate reads or writes, including nested ancillas.
    pub fn qubits(&self) -> Vec<Qubit> {
        match self {
            Gate::Unitary {
                target, controls, ..
            } => controls
                .iter()
                .map(|c| c.qubit)
                .chain(std::iter::once(*target))
                .collect(),
            Gate::Permutation { qubits, .. } | Gate::Phase { qubits, .. } => qubits.clone(),
            Gate::Oracle(call) => call
                .inputs
                .iter()
                .chain(std::iter::once(&call.target))
                .chain(&call.ancillas)
                .copied()
                .collect(),
        }
    }

    /// Rewrites every qubit index through `map`.
    pub fn remap(&self, map: &[Qubit]) -> Gate {
        let m = |q: &Qubit| map[*q];
        match self {
            Gate::Unitary {
                target,
                controls,
                matrix,
            } => Gate::Unitary {
                target: map[*target],
                controls: controls
                    .iter()
                    .map(|c| Control {
                        qubit: map[c.qubit],
                        on: c.on,
                    })
                    .collect(),
                matrix: *matrix,
            },
            Gate::Permutation { qubits, map: perm } => Gate::Permutation {
                qubits: qubits.iter().map(m).collect(),
                map: perm.clone(),
            },
            Gate::Phase { qubits, entries } => Gate::Phase {
                qubits: qubits.iter().map(m).collect(),
                entries: entries.clone(),
            },
            Gate::Oracle(call) => Gate::Oracle(OracleCall {
                inputs: call.inputs.iter().map(m).collect(),
                target: map[call.target],
                ancillas: call.ancillas.iter().map(m).collect(),
                ..call.clone()
            }),
        }
    }

    /// Checks that all wires are below `num_qubits` and pairwise distinct.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        let mut seen = HashSet::with_capacity(qs.len());
        for q in qs {
            if q >= num_qubits {
                return Err(Error::BadIndex(format!(
                    "qubit {q} is not live (width {num_qubits})"
                )));
            }
            if !seen.insert(q) {
                return Err(Error::BadIndex(format!("qubit {q} used twice by one gate")));
            }
        }
        if let Gate::Oracle(call) = self {
            let oracle = &call.oracle;
            if call.inputs.len() != oracle.input_width() {
                return Err(Error::WidthMismatch {
                    expected: oracle.input_width(),
                    found: call.inputs.len(),
                });
            }
            if call.ancillas.len() != oracle.ancilla_width() {
                return Err(Error::WidthMismatch {
                    expected: oracle.ancilla_width(),
                    found: call.ancillas.len(),
                });
            }
        }
        Ok(())
    }

    /// Applies the gate to a classical basis index, if the gate maps basis
    /// states to basis states without phases. Returns `None` otherwise.
    pub fn apply_classical(&self, index: usize) -> Option<usize> {
        match self {
            Gate::Unitary {
                target,
                controls,
                matrix,
            } if *matrix == PAULI_X => {
                let fires = controls
                    .iter()
                    .all(|c| ((index >> c.qubit) & 1 == 1) == c.on);
                Some(if fires { index ^ (1 << target) } else { index })
            }
            Gate::Permutation { qubits, map } => {
                let v = read_value(qubits, index);
                let cleared = index & !pattern(qubits, (1u64 << qubits.len()) - 1);
                Some(cleared | pattern(qubits, map[v as usize] as u64))
            }
            Gate::Oracle(call) => match call.oracle.as_ref() {
                BitOracle::Table(t) => {
                    let a = read_value(&call.inputs, index);
                    Some(if t.get(a as usize) {
                        index ^ (1 << call.target)
                    } else {
                        index
                    })
                }
                BitOracle::Program(_) => None,
            },
            _ => None,
        }
    }
}
