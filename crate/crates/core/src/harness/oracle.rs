//! Brute-force ground truth: walks every k-subset directly.
//!
//! Nothing here may call into the DP kernels or their helpers; every other
//! module is tested against this one.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Result, SumsetError};
use crate::set::IntegerSet;

pub const DEFAULT_ORACLE_THRESHOLD: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub sums: BTreeSet<i64>,
    /// Exact (uncapped) number of k-subsets per sum.
    pub multiplicities: BTreeMap<i64, u64>,
}

pub fn brute_force_oracle(set: &IntegerSet, k: usize) -> Result<OracleResult> {
    brute_force_oracle_with_limit(set, k, DEFAULT_ORACLE_THRESHOLD)
}

pub fn brute_force_oracle_with_limit(
    set: &IntegerSet,
    k: usize,
    threshold: u128,
) -> Result<OracleResult> {
    let a = set.elements();
    let n = a.len();
    if k > n {
        return Err(SumsetError::KOutOfRange { k, max: n });
    }
    let required = choose(n as u128, k as u128);
    if required > threshold {
        return Err(SumsetError::ThresholdExceeded {
            what: "brute-force oracle",
            required,
            threshold,
        });
    }
    let mut multiplicities = BTreeMap::new();
    walk(a, k, 0, 0, &mut multiplicities);
    let sums = multiplicities.keys().copied().collect();
    Ok(OracleResult {
        sums,
        multiplicities,
    })
}

fn walk(a: &[i64], remaining: usize, start: usize, acc: i64, out: &mut BTreeMap<i64, u64>) {
    if remaining == 0 {
        *out.entry(acc).or_insert(0) += 1;
        return;
    }
    // leave room for the remaining picks
    for i in start..=a.len() - remaining {
        walk(a, remaining - 1, i + 1, acc + a[i], out);
    }
}

// Multiplicative formula; saturates rather than overflowing.
fn choose(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 1..=k {
        r = match r.checked_mul(n - k + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntegerSet {
        IntegerSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn hand_checked_instances() {
        let gp = brute_force_oracle(&set(&[1, 2, 4, 8]), 2).unwrap();
        assert_eq!(
            gp.sums.into_iter().collect::<Vec<_>>(),
            vec![3, 5, 6, 9, 10, 12]
        );
        assert!(gp.multiplicities.values().all(|&m| m == 1));

        let ap = brute_force_oracle(&set(&[1, 2, 3, 4, 5]), 2).unwrap();
        for s in [5, 6, 7] {
            assert_eq!(ap.multiplicities[&s], 2);
        }
        for s in [3, 4, 8, 9] {
            assert_eq!(ap.multiplicities[&s], 1);
        }

        let full = brute_force_oracle(&set(&[-4, 1, 9]), 3).unwrap();
        assert_eq!(full.multiplicities, BTreeMap::from([(6, 1)]));
        let none = brute_force_oracle(&set(&[-4, 1, 9]), 0).unwrap();
        assert_eq!(none.multiplicities, BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn guards() {
        let big = IntegerSet::new((1..=40).collect()).unwrap();
        assert!(matches!(
            brute_force_oracle(&big, 10),
            Err(SumsetError::ThresholdExceeded { .. })
        ));
        assert!(matches!(
            brute_force_oracle(&set(&[1]), 2),
            Err(SumsetError::KOutOfRange { .. })
        ));
        assert_eq!(choose(40, 10), 847_660_528);
    }
}
