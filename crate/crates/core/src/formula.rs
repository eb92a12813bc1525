use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Variable {
    pub name: String,
    pub width: usize,
}

impl Variable {
    pub fn new(name: impl Into<String>, width: usize) -> Self {
        Variable {
            name: name.into(),
            width,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name, self.width)
    }
}

/// A prenex formula `Q1 x1 … Qk xk : p(z, x1, …, xk)` over a single opaque
/// predicate. The predicate's input is the free variables followed by the
/// bound ones, each big-endian, first declared most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Formula {
    free: Vec<Variable>,
    prefix: Vec<(Quantifier, Variable)>,
}

impl Formula {
    pub fn new(free: Vec<Variable>, prefix: Vec<(Quantifier, Variable)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in free.iter().chain(prefix.iter().map(|(_, v)| v)) {
            if v.width == 0 {
                return Err(Error::ZeroWidth(v.name.clone()));
            }
            if !seen.insert(v.name.as_str()) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Formula { free, prefix })
    }

    pub fn free(&self) -> &[Variable] {
        &self.free
    }

    pub fn prefix(&self) -> &[(Quantifier, Variable)] {
        &self.prefix
    }

    /// Number of quantifiers.
    pub fn k(&self) -> usize {
        self.prefix.len()
    }

    /// Total bound width.
    pub fn bound_width(&self) -> usize {
        self.prefix.iter().map(|(_, v)| v.width).sum()
    }

    pub fn free_width(&self) -> usize {
        self.free.iter().map(|v| v.width).sum()
    }

    /// Input width of the predicate.
    pub fn arity(&self) -> usize {
        self.free_width() + self.bound_width()
    }

    /// Free variables then bound variables, in predicate input order.
    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.free.iter().chain(self.prefix.iter().map(|(_, v)| v))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.free {
            write!(f, "free {v} ")?;
        }
        for (q, v) in &self.prefix {
            write!(f, "{q} {v} ")?;
        }
        f.write_str(": p")
    }
}
