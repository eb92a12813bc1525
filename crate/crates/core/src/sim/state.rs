//! Dense amplitude storage and the gate kernels that act on it.
//!
//! Basis index `i` encodes qubit `q` in bit `q` of `i` (qubit 0 is the least
//! significant bit). Register values are read big-endian over the register's
//! qubit list; see [`pattern`].

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type Mat2 = [[C64; 2]; 2];

const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const PAULI_X_MAT: Mat2 = [[ZERO, ONE], [ONE, ZERO]];

/// Tolerance used when validating caller-supplied amplitude vectors.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// The all-zero basis state on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1usize << num_qubits];
        amps[index] = ONE;
        StateVector { num_qubits, amps }
    }

    /// Wraps an amplitude vector. The length must be a power of two and the
    /// vector must be normalized within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "length {} is not a power of two",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(StateVector {
            num_qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.len(), other.len(), "inner product of mismatched states");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// L2 distance ‖self − other‖.
    pub fn distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.len(), other.len(), "distance between mismatched states");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Tensor `extra` fresh qubits in |0⟩ onto the top of the state.
    pub(crate) fn extend(&mut self, extra: usize) {
        self.num_qubits += extra;
        self.amps.resize(1usize << self.num_qubits, ZERO);
    }

    /// Sum of |amplitude|² over indices `i` with `i & mask == value`.
    pub fn probability_where(&self, mask: usize, value: usize) -> f64 {
        let mut total = 0.0;
        for_each_free(self.amps.len(), mask, |i| total += self.amps[i | value].norm_sqr());
        total
    }

    /// Probability that the big-endian register over `qubits` reads `value`.
    pub fn probability_of(&self, qubits: &[usize], value: u64) -> f64 {
        self.probability_where(mask_of(qubits), pattern(qubits, value))
    }

    /// Applies `m` to `target` on the indices where every control holds.
    /// Indices with any `skip` bit set are left alone; callers pass qubits
    /// whose 1-branch is known to carry no amplitude.
    pub(crate) fn apply_matrix(&mut self, target: usize, controls: &[(usize, bool)], m: &Mat2, skip: usize) {
        let bit = 1usize << target;
        let mut mask = bit | skip;
        let mut value = 0;
        for &(q, on) in controls {
            mask |= 1 << q;
            if on {
                value |= 1 << q;
            }
        }
        let amps = &mut self.amps;
        let len = amps.len();
        let real = m.iter().flatten().all(|c| c.im == 0.0);
        if m[0][1] == ZERO && m[1][0] == ZERO {
            for (d, off) in [(m[0][0], 0), (m[1][1], bit)] {
                if d == ONE {
                    continue;
                }
                if d == -ONE {
                    for_each_free(len, mask, |i| {
                        let k = i | value | off;
                        amps[k] = -amps[k];
                    });
                } else {
                    for_each_free(len, mask, |i| amps[i | value | off] *= d);
                }
            }
        } else if *m == PAULI_X_MAT {
            for_each_free(len, mask, |i| amps.swap(i | value, i | value | bit));
        } else if real {
            let [[a, b], [c, d]] = [[m[0][0].re, m[0][1].re], [m[1][0].re, m[1][1].re]];
            for_each_free(len, mask, |i| {
                let i0 = i | value;
                let i1 = i0 | bit;
                let (x, y) = (amps[i0], amps[i1]);
                amps[i0] = C64::new(a * x.re + b * y.re, a * x.im + b * y.im);
                amps[i1] = C64::new(c * x.re + d * y.re, c * x.im + d * y.im);
            });
        } else {
            for_each_free(len, mask, |i| {
                let i0 = i | value;
                let i1 = i0 | bit;
                let (x, y) = (amps[i0], amps[i1]);
                amps[i0] = m[0][0] * x + m[0][1] * y;
                amps[i1] = m[1][0] * x + m[1][1] * y;
            });
        }
    }

    /// Multiplies each listed register value by its phase; unlisted values
    /// are left alone.
    pub(crate) fn apply_phases(&mut self, qubits: &[usize], entries: &[(u64, C64)], skip: usize) {
        let mask = mask_of(qubits) | skip;
        let amps = &mut self.amps;
        let len = amps.len();
        for &(v, phase) in entries {
            let pat = pattern(qubits, v);
            if pat & skip != 0 || phase == ONE {
                continue;
            }
            if phase == -ONE {
                for_each_free(len, mask, |i| amps[i | pat] = -amps[i | pat]);
            } else {
                for_each_free(len, mask, |i| amps[i | pat] *= phase);
            }
        }
    }

    /// Relabels basis states: register value `v` becomes `map[v]`.
    pub(crate) fn apply_permutation(&mut self, qubits: &[usize], map: &[u32], skip: usize) {
        let moved: Vec<u32> = (0..map.len() as u32)
            .filter(|&v| map[v as usize] != v)
            .collect();
        if moved.is_empty() {
            return;
        }
        let pats: Vec<usize> = (0..map.len() as u64).map(|v| pattern(qubits, v)).collect();
        let mut buf = vec![ZERO; moved.len()];
        let amps = &mut self.amps;
        for_each_free(amps.len(), mask_of(qubits) | skip, |base| {
            for (slot, &v) in buf.iter_mut().zip(&moved) {
                *slot = amps[base | pats[v as usize]];
            }
            for (amp, &v) in buf.iter().zip(&moved) {
                amps[base | pats[map[v as usize] as usize]] = *amp;
            }
        });
    }

    /// |a, b⟩ → |a, b ⊕ table[a]⟩ with `a` read big-endian from `inputs`.
    pub(crate) fn apply_xor_table(&mut self, inputs: &[usize], target: usize, table: &[bool], skip: usize) {
        let tbit = 1usize << target;
        let mask = mask_of(inputs) | tbit | skip;
        let amps = &mut self.amps;
        let len = amps.len();
        for (a, _) in table.iter().enumerate().filter(|(_, &on)| on) {
            let pat = pattern(inputs, a as u64);
            if pat & skip != 0 {
                continue;
            }
            for_each_free(len, mask, |i| amps.swap(i | pat, i | pat | tbit));
        }
    }
}

/// Basis-index bit pattern of `value` written big-endian into `qubits`.
pub fn pattern(qubits: &[usize], value: u64) -> usize {
    let w = qubits.len();
    qubits
        .iter()
        .enumerate()
        .filter(|(i, _)| (value >> (w - 1 - i)) & 1 == 1)
        .fold(0, |acc, (_, &q)| acc | (1 << q))
}

/// Big-endian register value of `qubits` in basis index `index`.
pub fn read_value(qubits: &[usize], index: usize) -> u64 {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((index >> q) & 1) as u64)
}

pub(crate) fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |acc, &q| acc | (1 << q))
}

/// Calls `f` on every index below `len` whose bits under `mask` are zero,
/// in increasing order. Runs of consecutive indices are visited in an inner
/// loop so the common low-bit case stays tight.
#[inline]
fn for_each_free(len: usize, mask: usize, mut f: impl FnMut(usize)) {
    let run = 1usize << (mask | len).trailing_zeros();
    let outer = mask | (run - 1);
    let mut base = 0;
    while base < len {
        for i in base..base + run {
            f(i);
        }
        base = ((base | outer) + 1) & !outer;
    }
}
