use serde::Serialize;

pub type Qubit = usize;

/// A named, ordered group of qubits. The first listed qubit is the most
/// significant bit of the register's integer value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Register {
    name: String,
    qubits: Vec<Qubit>,
}

impl Register {
    pub fn new(name: impl Into<String>, qubits: Vec<Qubit>) -> Self {
        Register {
            name: name.into(),
            qubits,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn width(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubit(&self, i: usize) -> Qubit {
        self.qubits[i]
    }

    /// Largest value the register can hold.
    pub fn max_value(&self) -> u64 {
        if self.width() >= 64 {
            u64::MAX
        } else {
            (1u64 << self.width()) - 1
        }
    }
}

/// Number of bits needed to write `value` in binary.
pub fn bits_for(value: u64) -> usize {
    (u64::BITS - value.leading_zeros()) as usize
}
