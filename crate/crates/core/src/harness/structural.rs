//! Closed-form facts about `|k∧A|` that hold for whole families of sets.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::ratio::RatioVerdict;
use crate::set::{binomial, IntegerSet};
use crate::sumset::ksum_count;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructuralKind {
    /// `|k∧A| = |(n−k)∧A|`
    Symmetry,
    /// `|k∧A| = k(n−k)+1` for arithmetic progressions.
    ApClosedForm,
    /// `|k∧A| = C(n,k)` for geometric progressions with `|r| ≥ 2`.
    GpDistinctSums,
    /// `(k+1)|(k+1)∧A| = (n−k)|k∧A|` for geometric progressions with `|r| ≥ 2`.
    GpEquality,
    /// Equality in the ratio bound at `k = (n−1)/2`, odd `n`.
    MiddleEquality,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralCheck {
    pub kind: StructuralKind,
    pub k: usize,
    pub expected: u128,
    pub actual: u128,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub set: IntegerSet,
    pub n: usize,
    /// `|k∧A|` for `k = 0..=n`.
    pub sizes: Vec<u64>,
    /// Common difference, when `A` is an arithmetic progression (`n ≥ 2`).
    pub ap_difference: Option<i64>,
    /// `(a0, r)` when `A` is a geometric progression with integer `|r| ≥ 2`.
    pub gp_parameters: Option<(i64, i64)>,
    pub checks: Vec<StructuralCheck>,
    pub all_pass: bool,
}

/// Common difference of `A`, if its elements are equally spaced.
pub fn detect_ap(set: &IntegerSet) -> Option<i64> {
    let a = set.elements();
    if a.len() < 2 {
        return None;
    }
    let d = a[1] - a[0];
    a.windows(2).all(|w| w[1] - w[0] == d).then_some(d)
}

/// `(a0, r)` such that `A = {a0·r^i}` with integer `|r| ≥ 2`. Terms are
/// ordered by absolute value, which is strictly increasing in that regime, so
/// negative ratios are recognized as well.
pub fn detect_gp(set: &IntegerSet) -> Option<(i64, i64)> {
    let mut a = set.elements().to_vec();
    if a.len() < 2 || a.contains(&0) {
        return None;
    }
    a.sort_by_key(|x| x.unsigned_abs());
    if a[1] % a[0] != 0 {
        return None;
    }
    let r = a[1] / a[0];
    if r.unsigned_abs() < 2 {
        return None;
    }
    a.windows(2)
        .all(|w| w[0].checked_mul(r) == Some(w[1]))
        .then_some((a[0], r))
}

pub fn structural_checks(set: &IntegerSet) -> Result<StructuralReport> {
    let n = set.len();
    let sizes = (0..=n)
        .map(|k| ksum_count(set, k))
        .collect::<Result<Vec<_>>>()?;
    let ap_difference = detect_ap(set);
    let gp_parameters = detect_gp(set);
    let mut checks = Vec::new();

    for k in 0..=n {
        checks.push(check(
            StructuralKind::Symmetry,
            k,
            sizes[n - k] as u128,
            sizes[k] as u128,
        ));
    }
    if ap_difference.is_some() {
        for (k, &size) in sizes.iter().enumerate() {
            let expected = (k * (n - k) + 1) as u128;
            checks.push(check(
                StructuralKind::ApClosedForm,
                k,
                expected,
                size as u128,
            ));
        }
    }
    if gp_parameters.is_some() {
        for (k, &size) in sizes.iter().enumerate() {
            checks.push(check(
                StructuralKind::GpDistinctSums,
                k,
                binomial(n, k),
                size as u128,
            ));
        }
        for k in 1..n {
            let v = RatioVerdict::from_sizes(set.clone(), k, sizes[k], sizes[k + 1])?;
            checks.push(check(
                StructuralKind::GpEquality,
                k,
                v.rhs_cross as u128,
                v.lhs_cross as u128,
            ));
        }
    }
    if n % 2 == 1 && n >= 3 {
        let k = (n - 1) / 2;
        let v = RatioVerdict::from_sizes(set.clone(), k, sizes[k], sizes[k + 1])?;
        checks.push(check(
            StructuralKind::MiddleEquality,
            k,
            v.rhs_cross as u128,
            v.lhs_cross as u128,
        ));
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(StructuralReport {
        set: set.clone(),
        n,
        sizes,
        ap_difference,
        gp_parameters,
        checks,
        all_pass,
    })
}

fn check(kind: StructuralKind, k: usize, expected: u128, actual: u128) -> StructuralCheck {
    StructuralCheck {
        kind,
        k,
        expected,
        actual,
        pass: expected == actual,
    }
}
