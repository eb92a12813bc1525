//! Brute-force ground truth: truth tables, quantified evaluation, counting,
//! seeded instance generation and the closed-form Grover success curve.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier, Variable};

/// Explicit table of a predicate on `num_bits` input bits. Entry `i` is the
/// value on the input whose big-endian bit string is `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTableOracle {
    num_bits: usize,
    table: Vec<bool>,
    vars: Option<Vec<Variable>>,
}

impl TruthTableOracle {
    pub fn new(num_bits: usize, table: Vec<bool>) -> Result<Self> {
        if table.len() != 1usize << num_bits {
            return Err(Error::LengthMismatch {
                expected: 1 << num_bits,
                found: table.len(),
            });
        }
        Ok(TruthTableOracle {
            num_bits,
            table,
            vars: None,
        })
    }

    pub fn from_fn(num_bits: usize, f: impl Fn(usize) -> bool) -> Self {
        TruthTableOracle {
            num_bits,
            table: (0..1usize << num_bits).map(f).collect(),
            vars: None,
        }
    }

    /// Parses a string of `0`/`1`, index 0 first. Length must be a power of two.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let table = s
            .chars()
            .enumerate()
            .map(|(position, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::BadCharacter { ch, position }),
            })
            .collect::<Result<Vec<_>>>()?;
        if !table.len().is_power_of_two() {
            return Err(Error::LengthMismatch {
                expected: table.len().next_power_of_two(),
                found: table.len(),
            });
        }
        Self::new(table.len().trailing_zeros() as usize, table)
    }

    /// Attaches the variable declaration the table was written against.
    pub fn with_vars(mut self, vars: Vec<Variable>) -> Result<Self> {
        let w: usize = vars.iter().map(|v| v.width).sum();
        if w != self.num_bits {
            return Err(Error::VarsMismatch(format!(
                "declared width {w} but table has {} bits",
                self.num_bits
            )));
        }
        self.vars = Some(vars);
        Ok(self)
    }

    pub fn vars(&self) -> Option<&[Variable]> {
        self.vars.as_deref()
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn bits(&self) -> &[bool] {
        &self.table
    }

    pub fn get(&self, index: usize) -> bool {
        self.table[index]
    }

    pub fn count_ones(&self) -> u64 {
        self.table.iter().filter(|&&b| b).count() as u64
    }

    pub fn to_bit_string(&self) -> String {
        self.table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

fn check_arity(formula: &Formula, table: &TruthTableOracle) -> Result<()> {
    if formula.arity() != table.num_bits() {
        return Err(Error::ArityMismatch {
            expected: table.num_bits(),
            found: formula.arity(),
        });
    }
    Ok(())
}

/// Packs free-variable values into the leading bits of a table index.
pub fn free_prefix(formula: &Formula, assignment: &[u64]) -> Result<u64> {
    if assignment.len() != formula.free().len() {
        let missing = formula
            .free()
            .get(assignment.len())
            .map_or_else(|| "extra value".to_string(), |v| v.name.clone());
        return Err(Error::UnboundVariable(missing));
    }
    let mut idx = 0u64;
    for (v, &value) in formula.free().iter().zip(assignment) {
        if value >> v.width != 0 {
            return Err(Error::ValueOutOfRange {
                value,
                width: v.width,
            });
        }
        idx = (idx << v.width) | value;
    }
    Ok(idx)
}

/// Truth of `formula` under `assignment` (free-variable values in order).
pub fn classical_eval(formula: &Formula, table: &TruthTableOracle, assignment: &[u64]) -> Result<bool> {
    check_arity(formula, table)?;
    let start = free_prefix(formula, assignment)?;
    Ok(eval_level(formula.prefix(), table, start))
}

fn eval_level(prefix: &[(Quantifier, Variable)], table: &TruthTableOracle, idx: u64) -> bool {
    let Some(((q, v), rest)) = prefix.split_first() else {
        return table.get(idx as usize);
    };
    let mut values = (0..1u64 << v.width).map(|x| eval_level(rest, table, (idx << v.width) | x));
    match q {
        Quantifier::Forall => values.all(|b| b),
        Quantifier::Exists => values.any(|b| b),
    }
}

/// Number of table entries equal to 1 whose leading `prefix_bits` bits are
/// `prefix`.
pub fn count_solutions(table: &TruthTableOracle, prefix: u64, prefix_bits: usize) -> u64 {
    let rest = table.num_bits() - prefix_bits;
    let start = (prefix as usize) << rest;
    table.bits()[start..start + (1 << rest)]
        .iter()
        .filter(|&&b| b)
        .count() as u64
}

#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub formula: Formula,
    /// Probability that each table entry is 1.
    pub density: f64,
    pub seed: u64,
}

/// Deterministic random table for `spec.formula`.
pub fn random_instance(spec: &InstanceSpec) -> Result<(Formula, TruthTableOracle)> {
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(Error::InvalidDensity(spec.density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.formula.arity();
    let table = (0..1usize << n).map(|_| rng.gen_bool(spec.density)).collect();
    let vars = spec.formula.variables().cloned().collect();
    let oracle = TruthTableOracle::new(n, table)?.with_vars(vars)?;
    Ok((spec.formula.clone(), oracle))
}

/// Marked-set probability after `j` Grover iterates from the uniform state
/// over `n` items with `t` marked.
pub fn closed_form_success(n: u64, t: u64, j: u64) -> f64 {
    if t == 0 {
        return 0.0;
    }
    let theta = (t as f64 / n as f64).sqrt().asin();
    ((2 * j + 1) as f64 * theta).sin().powi(2)
}

/// Average of [`closed_form_success`] over `j = 1..=m`: one block of a
/// search with an iteration count uniform on `1..m`.
pub fn block_success(n: u64, t: u64, m: u64) -> f64 {
    (1..=m).map(|j| closed_form_success(n, t, j)).sum::<f64>() / m as f64
}

/// Smallest integer `m` with `m² ≥ 2^bits`.
pub fn iterations_for(bits: usize) -> u64 {
    let n = 1u128 << bits;
    let mut m = (n as f64).sqrt().ceil() as u128;
    while m * m < n {
        m += 1;
    }
    while m > 0 && (m - 1) * (m - 1) >= n {
        m -= 1;
    }
    m as u64
}
