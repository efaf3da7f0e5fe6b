//! The canonical integer set `A` that every other module operates on.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SumsetError};

/// A finite set of distinct 64-bit integers kept in strictly increasing order.
///
/// Construction rejects duplicates and guarantees that `n * max|a|` fits in an
/// `i64`, so every partial sum of distinct elements is representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerSet {
    elements: Vec<i64>,
}

impl IntegerSet {
    /// Builds a set from elements in any order. Duplicates are an error.
    pub fn new(mut elements: Vec<i64>) -> Result<Self> {
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(SumsetError::DuplicateElement(w[0]));
        }
        Self::from_sorted(elements)
    }

    /// Builds a set from elements that must already be strictly increasing.
    pub fn from_sorted(elements: Vec<i64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(SumsetError::EmptySet);
        }
        for (i, w) in elements.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(SumsetError::DuplicateElement(w[0]));
            }
            if w[0] > w[1] {
                return Err(SumsetError::NotSorted { index: i + 1 });
            }
        }
        let max_abs = elements.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0) as u128;
        let bound = max_abs * elements.len() as u128;
        if bound > i64::MAX as u128 {
            return Err(SumsetError::overflow(format!(
                "n * max|a| = {bound} exceeds the 64-bit range"
            )));
        }
        Ok(IntegerSet { elements })
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Always false for a constructed set; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, value: i64) -> bool {
        self.elements.binary_search(&value).is_ok()
    }

    pub fn min(&self) -> i64 {
        self.elements[0]
    }

    pub fn max(&self) -> i64 {
        self.elements[self.elements.len() - 1]
    }

    /// Sum of all elements. Cannot overflow by the construction invariant.
    pub fn total(&self) -> i64 {
        self.elements.iter().sum()
    }

    /// The set with `value` removed, or `None` when removal would leave it empty.
    pub fn without(&self, value: i64) -> Result<Option<IntegerSet>> {
        let idx = self
            .elements
            .binary_search(&value)
            .map_err(|_| SumsetError::ExcludeNotInSet(value))?;
        if self.elements.len() == 1 {
            return Ok(None);
        }
        let mut rest = self.elements.clone();
        rest.remove(idx);
        Ok(Some(IntegerSet { elements: rest }))
    }

    /// Returns `c * A + d`, checking every element and the construction bound.
    pub fn affine(&self, c: i64, d: i64) -> Result<IntegerSet> {
        if c == 0 {
            return Err(SumsetError::InvalidParameters(
                "dilation factor must be nonzero".into(),
            ));
        }
        let mapped = self
            .elements
            .iter()
            .map(|&a| {
                a.checked_mul(c)
                    .and_then(|x| x.checked_add(d))
                    .ok_or_else(|| SumsetError::overflow("affine image of the set"))
            })
            .collect::<Result<Vec<_>>>()?;
        IntegerSet::new(mapped)
    }

    /// Checks `0 <= k <= n`.
    pub fn check_order(&self, k: usize) -> Result<()> {
        if k > self.len() {
            return Err(SumsetError::KOutOfRange { k, max: self.len() });
        }
        Ok(())
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for IntegerSet {
    type Err = SumsetError;

    /// Parses comma-separated integers. Surrounding braces and whitespace are accepted.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut elements = Vec::new();
        for part in trimmed.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(SumsetError::parse(s, "empty element"));
            }
            let value = part
                .parse::<i64>()
                .map_err(|e| SumsetError::parse(s, format!("{part:?}: {e}")))?;
            elements.push(value);
        }
        IntegerSet::new(elements)
    }
}

impl TryFrom<Vec<i64>> for IntegerSet {
    type Error = SumsetError;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        IntegerSet::new(v)
    }
}

impl TryFrom<&[i64]> for IntegerSet {
    type Error = SumsetError;

    fn try_from(v: &[i64]) -> Result<Self> {
        IntegerSet::new(v.to_vec())
    }
}

impl Serialize for IntegerSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntegerSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(deserializer)?;
        IntegerSet::new(v).map_err(serde::de::Error::custom)
    }
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let num = (n - i) as u128;
        match acc.checked_mul(num) {
            Some(v) => acc = v / (i as u128 + 1),
            None => {
                let g = gcd(acc, i as u128 + 1);
                let reduced = (acc / g).checked_mul(num / ((i as u128 + 1) / g));
                match reduced {
                    Some(v) => acc = v,
                    None => return u128::MAX,
                }
            }
        }
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_sorts() {
        let a: IntegerSet = "5, 1,3".parse().unwrap();
        assert_eq!(a.elements(), &[1, 3, 5]);
        assert_eq!(a.to_string(), "1,3,5");
        let b: IntegerSet = "{-2,7}".parse().unwrap();
        assert_eq!(b.elements(), &[-2, 7]);
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert_eq!(
            "1,2,2".parse::<IntegerSet>(),
            Err(SumsetError::DuplicateElement(2))
        );
        assert!(matches!(
            "1,x".parse::<IntegerSet>(),
            Err(SumsetError::Parse { .. })
        ));
        assert!(matches!(
            "1,,2".parse::<IntegerSet>(),
            Err(SumsetError::Parse { .. })
        ));
        assert_eq!(IntegerSet::new(vec![]), Err(SumsetError::EmptySet));
        assert_eq!(
            IntegerSet::from_sorted(vec![3, 1]),
            Err(SumsetError::NotSorted { index: 1 })
        );
    }

    #[test]
    fn overflow_guard() {
        assert!(IntegerSet::new(vec![i64::MAX / 2, 1]).is_ok());
        assert!(matches!(
            IntegerSet::new(vec![i64::MAX / 2 + 1, 1]),
            Err(SumsetError::Overflow(_))
        ));
        assert!(matches!(
            IntegerSet::new(vec![i64::MIN, 0]),
            Err(SumsetError::Overflow(_))
        ));
    }

    #[test]
    fn without_and_affine() {
        let a = IntegerSet::new(vec![1, 2, 3]).unwrap();
        assert_eq!(a.without(2).unwrap().unwrap().elements(), &[1, 3]);
        assert_eq!(a.without(9), Err(SumsetError::ExcludeNotInSet(9)));
        assert_eq!(IntegerSet::new(vec![4]).unwrap().without(4), Ok(None));
        assert_eq!(a.affine(-2, 1).unwrap().elements(), &[-5, -3, -1]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(40, 10), 847_660_528);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(200, 100), u128::MAX);
        assert_eq!(
            binomial(120, 60),
            96_614_908_840_363_322_603_893_139_521_372_656
        );
    }
}
