use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SumsetError};
use crate::set::IntegerSet;
use crate::sumset::ksum_count;

/// Exact comparison of `|(k+1)∧A| / |k∧A|` against `(n−k)/(k+1)`, stored as
/// the cross-products `(k+1)·|(k+1)∧A|` and `(n−k)·|k∧A|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioVerdict {
    pub set: IntegerSet,
    pub n: usize,
    pub k: usize,
    pub size_k: u64,
    pub size_k1: u64,
    pub lhs_cross: u64,
    pub rhs_cross: u64,
    pub holds: bool,
    pub equality: bool,
    /// `n ≥ (k² + 7k)/2`
    pub hyp_theorem: bool,
    /// `n > 2k`
    pub hyp_question: bool,
}

impl RatioVerdict {
    pub fn from_sizes(set: IntegerSet, k: usize, size_k: u64, size_k1: u64) -> Result<Self> {
        let n = set.len();
        if k == 0 || k >= n {
            return Err(SumsetError::KOutOfRange {
                k,
                max: n.saturating_sub(1),
            });
        }
        let lhs_cross = (k as u64 + 1)
            .checked_mul(size_k1)
            .ok_or_else(|| SumsetError::overflow("(k+1)·|(k+1)∧A|"))?;
        let rhs_cross = ((n - k) as u64)
            .checked_mul(size_k)
            .ok_or_else(|| SumsetError::overflow("(n−k)·|k∧A|"))?;
        Ok(RatioVerdict {
            set,
            n,
            k,
            size_k,
            size_k1,
            lhs_cross,
            rhs_cross,
            holds: lhs_cross <= rhs_cross,
            equality: lhs_cross == rhs_cross,
            hyp_theorem: theorem_hypothesis(n, k),
            hyp_question: question_hypothesis(n, k),
        })
    }

    /// A verdict refuting the open question: bound violated although `n > 2k`.
    pub fn is_counterexample(&self) -> bool {
        !self.holds && self.hyp_question
    }

    /// Orders verdicts by the exact value of `lhs_cross / rhs_cross`.
    pub fn cmp_ratio(&self, other: &RatioVerdict) -> Ordering {
        compare_fractions(
            (self.lhs_cross, self.rhs_cross),
            (other.lhs_cross, other.rhs_cross),
        )
    }

    /// Recomputes the verdict from scratch and checks every stored field.
    pub fn reverify(&self) -> Result<bool> {
        Ok(ratio_check(&self.set, self.k)? == *self)
    }
}

/// `|(k+1)∧A|·(k+1)` versus `|k∧A|·(n−k)`, for `1 ≤ k ≤ n−1`.
pub fn ratio_check(set: &IntegerSet, k: usize) -> Result<RatioVerdict> {
    let n = set.len();
    if k == 0 || k >= n {
        return Err(SumsetError::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    let size_k = ksum_count(set, k)?;
    let size_k1 = ksum_count(set, k + 1)?;
    RatioVerdict::from_sizes(set.clone(), k, size_k, size_k1)
}

/// `n ≥ (k² + 7k)/2`, evaluated as `2n ≥ k² + 7k`.
pub fn theorem_hypothesis(n: usize, k: usize) -> bool {
    2 * n as u128 >= (k as u128) * (k as u128) + 7 * k as u128
}

pub fn question_hypothesis(n: usize, k: usize) -> bool {
    n > 2 * k
}

/// Compares `a.0/a.1` with `b.0/b.1` for positive denominators.
pub fn compare_fractions(a: (u64, u64), b: (u64, u64)) -> Ordering {
    let left = a.0 as u128 * b.1 as u128;
    let right = b.0 as u128 * a.1 as u128;
    left.cmp(&right)
}
