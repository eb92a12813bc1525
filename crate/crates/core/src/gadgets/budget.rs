use serde::Serialize;

use crate::error::{Error, Result};

/// Target error of a unitary decider and the block count that buys it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorBudget {
    p_err: f64,
    epsilon: f64,
    blocks: usize,
}

impl ErrorBudget {
    pub fn new(p_err: f64, epsilon: f64, blocks: usize) -> Result<Self> {
        if !(p_err > 0.0 && p_err <= 1.0) {
            return Err(Error::BudgetInvalid(format!("p_err {p_err} not in (0, 1]")));
        }
        if !(epsilon > 0.0) {
            return Err(Error::BudgetInvalid(format!("epsilon {epsilon} must be positive")));
        }
        if epsilon > p_err / 2.0 {
            return Err(Error::BudgetInvalid(format!(
                "epsilon {epsilon} exceeds p_err/2 = {}",
                p_err / 2.0
            )));
        }
        let needed = (1.0 / epsilon).log2() - 1e-9;
        if blocks == 0 || (blocks as f64) < needed {
            return Err(Error::BudgetInvalid(format!(
                "M = {blocks} is below log2(1/epsilon) = {:.3}",
                needed
            )));
        }
        Ok(ErrorBudget {
            p_err,
            epsilon,
            blocks,
        })
    }

    /// The budget whose block count is exactly `blocks`: ε = 2^−M and
    /// p_err = 2ε.
    pub fn from_blocks(blocks: usize) -> Result<Self> {
        let epsilon = 0.5f64.powi(blocks as i32);
        Self::new((2.0 * epsilon).min(1.0), epsilon, blocks)
    }

    /// Smallest block count meeting `epsilon`.
    pub fn from_epsilon(p_err: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::BudgetInvalid(format!("epsilon {epsilon} must be positive")));
        }
        let blocks = ((1.0 / epsilon).log2() - 1e-9).ceil().max(1.0) as usize;
        Self::new(p_err, epsilon, blocks)
    }

    pub fn p_err(&self) -> f64 {
        self.p_err
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }
}
