//! Restricted k-fold sumsets `k∧A`: the set of integers expressible as a sum
//! of exactly `k` distinct elements of `A`.
//!
//! The kernels run a layered subset-sum DP. Layer `j` holds the achievable sums
//! of `j` distinct elements seen so far, indexed by offset from the smallest
//! possible `j`-sum (the sum of the `j` smallest elements), so negative
//! elements need no special handling. Presence uses bit arrays, multiplicities
//! use saturating counters. When the value spread is too wide for dense
//! layers, a hash-map kernel with the same recurrence takes over.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::bits::BitArray;
use crate::error::{Result, SumsetError};
use crate::set::{binomial, IntegerSet};

/// Default bound on `C(n, k)` for [`enumerate_representations`].
pub const DEFAULT_ENUMERATION_THRESHOLD: u128 = 2_000_000;

/// Default saturation bound for multiplicities: enough to separate unique
/// sums from repeated ones.
pub const DEFAULT_CAP: u32 = 2;

// Dense layers are used while their total footprint stays under these.
const DENSE_BIT_LIMIT: u128 = 1 << 31;
const DENSE_COUNTER_LIMIT: u128 = 1 << 25;

/// Achievable `k`-sums mapped to their representation count, saturated at `cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumMultiplicityTable {
    pub k: usize,
    pub cap: u32,
    /// Excluded element, if the table was built over `A ∖ {exclude}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclude: Option<i64>,
    #[serde(with = "pairs")]
    pub entries: BTreeMap<i64, u32>,
}

impl SumMultiplicityTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, sum: i64) -> Option<u32> {
        self.entries.get(&sum).copied()
    }

    pub fn sums(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    /// Sums with exactly one representation.
    pub fn unique(&self) -> Vec<i64> {
        self.entries
            .iter()
            .filter(|(_, &m)| m == 1)
            .map(|(&s, _)| s)
            .collect()
    }

    /// Sums with at least two representations. Requires `cap >= 2` to be meaningful.
    pub fn repeated(&self) -> Vec<i64> {
        self.entries
            .iter()
            .filter(|(_, &m)| m >= 2)
            .map(|(&s, _)| s)
            .collect()
    }
}

/// Every `k`-subset of `A`, grouped under its sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationList {
    pub k: usize,
    #[serde(with = "pairs")]
    pub groups: BTreeMap<i64, Vec<Vec<i64>>>,
}

impl RepresentationList {
    pub fn subset_count(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn sums(&self) -> impl Iterator<Item = i64> + '_ {
        self.groups.keys().copied()
    }

    pub fn representations(&self, sum: i64) -> &[Vec<i64>] {
        self.groups.get(&sum).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// `k∧A` as a sorted vector.
pub fn ksum_set(set: &IntegerSet, k: usize) -> Result<Vec<i64>> {
    set.check_order(k)?;
    let plan = LayerPlan::new(set.elements(), k);
    if plan.total_width() <= DENSE_BIT_LIMIT {
        let layer = dense_presence(set.elements(), &plan);
        Ok(layer.ones().map(|i| plan.lo[k] + i as i64).collect())
    } else {
        let layer = sparse_counts(set.elements(), k, 1);
        let mut v: Vec<i64> = layer.into_keys().collect();
        v.sort_unstable();
        Ok(v)
    }
}

/// `|k∧A|` without materializing the sums.
pub fn ksum_count(set: &IntegerSet, k: usize) -> Result<u64> {
    set.check_order(k)?;
    let plan = LayerPlan::new(set.elements(), k);
    if plan.total_width() <= DENSE_BIT_LIMIT {
        Ok(dense_presence(set.elements(), &plan).count_ones())
    } else {
        Ok(sparse_counts(set.elements(), k, 1).len() as u64)
    }
}

/// Representation counts of `k`-sums, saturating at `cap`, optionally over
/// `A ∖ {exclude}`.
pub fn ksum_multiplicity(
    set: &IntegerSet,
    k: usize,
    cap: u32,
    exclude: Option<i64>,
) -> Result<SumMultiplicityTable> {
    if cap == 0 {
        return Err(SumsetError::InvalidCap(cap));
    }
    let elements: Vec<i64> = match exclude {
        Some(x) => {
            if !set.contains(x) {
                return Err(SumsetError::ExcludeNotInSet(x));
            }
            set.elements().iter().copied().filter(|&a| a != x).collect()
        }
        None => set.elements().to_vec(),
    };
    if k > elements.len() {
        return Err(SumsetError::KOutOfRange {
            k,
            max: elements.len(),
        });
    }
    let entries = multiplicities(&elements, k, cap);
    Ok(SumMultiplicityTable {
        k,
        cap,
        exclude,
        entries,
    })
}

pub(crate) fn multiplicities(elements: &[i64], k: usize, cap: u32) -> BTreeMap<i64, u32> {
    let plan = LayerPlan::new(elements, k);
    if cap <= 2 && plan.total_width().saturating_mul(2) <= DENSE_BIT_LIMIT {
        let (ge1, ge2) = dense_two_level(elements, &plan);
        ge1.ones()
            .map(|i| {
                let m = if cap >= 2 && ge2.get(i) { 2 } else { 1 };
                (plan.lo[k] + i as i64, m)
            })
            .collect()
    } else if plan.total_width() <= DENSE_COUNTER_LIMIT {
        let counts = dense_counts(elements, &plan, cap);
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (plan.lo[k] + i as i64, c))
            .collect()
    } else {
        sparse_counts(elements, k, cap).into_iter().collect()
    }
}

/// Lists every `k`-subset under its sum, refusing when `C(n, k)` exceeds
/// [`DEFAULT_ENUMERATION_THRESHOLD`].
pub fn enumerate_representations(set: &IntegerSet, k: usize) -> Result<RepresentationList> {
    enumerate_representations_with_limit(set, k, DEFAULT_ENUMERATION_THRESHOLD)
}

pub fn enumerate_representations_with_limit(
    set: &IntegerSet,
    k: usize,
    threshold: u128,
) -> Result<RepresentationList> {
    set.check_order(k)?;
    let n = set.len();
    let required = binomial(n, k);
    if required > threshold {
        return Err(SumsetError::ThresholdExceeded {
            what: "representation enumeration",
            required,
            threshold,
        });
    }
    let a = set.elements();
    let mut groups: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
    for_each_combination(n, k, |idx| {
        let subset: Vec<i64> = idx.iter().map(|&i| a[i]).collect();
        let sum = subset.iter().sum();
        groups.entry(sum).or_default().push(subset);
    });
    Ok(RepresentationList { k, groups })
}

/// Calls `f` with every strictly increasing index tuple of length `k` over
/// `0..n`, in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Per-layer value ranges for a DP targeting layer `k`.
struct LayerPlan {
    k: usize,
    /// `lo[j]`: sum of the `j` smallest elements.
    lo: Vec<i64>,
    /// Number of integers in `[lo[j], hi[j]]`.
    width: Vec<u128>,
}

impl LayerPlan {
    fn new(elements: &[i64], k: usize) -> Self {
        // elements are sorted ascending for every caller
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let n = elements.len();
        let mut lo = vec![0i64; k + 1];
        let mut hi = vec![0i64; k + 1];
        for j in 1..=k {
            lo[j] = lo[j - 1] + elements[j - 1];
            hi[j] = hi[j - 1] + elements[n - j];
        }
        let width = (0..=k)
            .map(|j| (hi[j] as i128 - lo[j] as i128 + 1) as u128)
            .collect();
        LayerPlan { k, lo, width }
    }

    fn total_width(&self) -> u128 {
        self.width.iter().sum()
    }

    /// Layers touched when folding in element `i` of `n`: a layer must be
    /// reachable with `i + 1` elements and completable to `k` with the rest.
    fn active(&self, i: usize, n: usize) -> std::ops::RangeInclusive<usize> {
        let top = self.k.min(i + 1);
        let bottom = (self.k + i + 1).saturating_sub(n).max(1);
        bottom..=top
    }

    fn shift(&self, j: usize, a: i64) -> i64 {
        a + self.lo[j - 1] - self.lo[j]
    }
}

fn dense_presence(elements: &[i64], plan: &LayerPlan) -> BitArray {
    let n = elements.len();
    let mut layers: Vec<BitArray> = plan
        .width
        .iter()
        .map(|&w| BitArray::new(w as usize))
        .collect();
    layers[0].set(0);
    let mut scratch = BitArray::new(0);
    for (i, &a) in elements.iter().enumerate() {
        for j in plan.active(i, n).rev() {
            if scratch.len() != layers[j].len() {
                scratch = BitArray::new(layers[j].len());
            }
            scratch.assign_shifted(&layers[j - 1], plan.shift(j, a));
            layers[j].or_assign(&scratch);
        }
    }
    layers.swap_remove(plan.k)
}

/// Bit arrays for "at least one" and "at least two" representations.
fn dense_two_level(elements: &[i64], plan: &LayerPlan) -> (BitArray, BitArray) {
    let n = elements.len();
    let mut ge1: Vec<BitArray> = plan
        .width
        .iter()
        .map(|&w| BitArray::new(w as usize))
        .collect();
    let mut ge2 = ge1.clone();
    ge1[0].set(0);
    let mut s1 = BitArray::new(0);
    let mut s2 = BitArray::new(0);
    for (i, &a) in elements.iter().enumerate() {
        for j in plan.active(i, n).rev() {
            let len = ge1[j].len();
            if s1.len() != len {
                s1 = BitArray::new(len);
                s2 = BitArray::new(len);
            }
            let shift = plan.shift(j, a);
            s1.assign_shifted(&ge1[j - 1], shift);
            s2.assign_shifted(&ge2[j - 1], shift);
            // a sum already present that is reached again becomes repeated
            ge2[j].or_and_assign(&ge1[j], &s1);
            ge2[j].or_assign(&s2);
            ge1[j].or_assign(&s1);
        }
    }
    (ge1.swap_remove(plan.k), ge2.swap_remove(plan.k))
}

fn dense_counts(elements: &[i64], plan: &LayerPlan, cap: u32) -> Vec<u32> {
    let n = elements.len();
    let mut layers: Vec<Vec<u32>> = plan.width.iter().map(|&w| vec![0u32; w as usize]).collect();
    layers[0][0] = 1;
    for (i, &a) in elements.iter().enumerate() {
        for j in plan.active(i, n).rev() {
            let shift = plan.shift(j, a);
            let (below, above) = layers.split_at_mut(j);
            let src = &below[j - 1];
            let dst = &mut above[0];
            for (x, &c) in src.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let y = x as i64 + shift;
                if y < 0 || y as usize >= dst.len() {
                    continue;
                }
                let slot = &mut dst[y as usize];
                *slot = slot.saturating_add(c).min(cap);
            }
        }
    }
    layers.swap_remove(plan.k)
}

fn sparse_counts(elements: &[i64], k: usize, cap: u32) -> HashMap<i64, u32> {
    let n = elements.len();
    let plan = LayerPlan {
        k,
        lo: vec![0; k + 1],
        width: Vec::new(),
    };
    let mut layers: Vec<HashMap<i64, u32>> = vec![HashMap::new(); k + 1];
    layers[0].insert(0, 1);
    for (i, &a) in elements.iter().enumerate() {
        for j in plan.active(i, n).rev() {
            let (below, above) = layers.split_at_mut(j);
            for (&s, &c) in below[j - 1].iter() {
                let slot = above[0].entry(s + a).or_insert(0);
                *slot = slot.saturating_add(c).min(cap);
            }
        }
    }
    layers.swap_remove(k)
}

mod pairs {
    //! Maps with integer keys serialize as `[[key, value], ...]`.
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<V: Serialize, S: Serializer>(
        map: &BTreeMap<i64, V>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(map.iter())
    }

    pub fn deserialize<'de, V: Deserialize<'de>, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<i64, V>, D::Error> {
        let v = Vec::<(i64, V)>::deserialize(deserializer)?;
        Ok(v.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntegerSet {
        IntegerSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ap_two_sums() {
        let got = ksum_set(&set(&[1, 2, 3, 4, 5]), 2).unwrap();
        assert_eq!(got, vec![3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(got.len(), 2 * (5 - 2) + 1);
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(
            ksum_set(&set(&[1, 2, 4, 8]), 2).unwrap(),
            vec![3, 5, 6, 9, 10, 12]
        );
    }

    #[test]
    fn boundary_orders() {
        let a = set(&[-3, 4, 10]);
        assert_eq!(ksum_set(&a, 0).unwrap(), vec![0]);
        assert_eq!(ksum_set(&a, 3).unwrap(), vec![11]);
        assert_eq!(
            ksum_set(&a, 4),
            Err(SumsetError::KOutOfRange { k: 4, max: 3 })
        );
        let t = ksum_multiplicity(&a, 3, 5, None).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(11, 1)]));
    }

    #[test]
    fn multiplicity_cap_two() {
        let t = ksum_multiplicity(&set(&[1, 2, 3, 4, 5]), 2, 2, None).unwrap();
        let want = BTreeMap::from([(3, 1), (4, 1), (5, 2), (6, 2), (7, 2), (8, 1), (9, 1)]);
        assert_eq!(t.entries, want);
        assert_eq!(t.unique(), vec![3, 4, 8, 9]);
        assert_eq!(t.repeated(), vec![5, 6, 7]);
    }

    #[test]
    fn multiplicity_with_exclusion() {
        let t = ksum_multiplicity(&set(&[1, 2, 3, 4, 5]), 2, 2, Some(5)).unwrap();
        assert_eq!(t.get(5), Some(2));
        assert_eq!(t.get(9), None);
        assert_eq!(t.sums().collect::<Vec<_>>(), vec![3, 4, 5, 6, 7]);
        assert_eq!(
            ksum_multiplicity(&set(&[1, 2]), 1, 2, Some(7)),
            Err(SumsetError::ExcludeNotInSet(7))
        );
        assert_eq!(
            ksum_multiplicity(&set(&[1, 2]), 2, 2, Some(1)),
            Err(SumsetError::KOutOfRange { k: 2, max: 1 })
        );
        assert_eq!(
            ksum_multiplicity(&set(&[1, 2]), 1, 0, None),
            Err(SumsetError::InvalidCap(0))
        );
    }

    #[test]
    fn exact_counts_with_large_cap() {
        // {1..6}, k=3: 9 = 1+2+6 = 1+3+5 = 2+3+4
        let t = ksum_multiplicity(&set(&[1, 2, 3, 4, 5, 6]), 3, 100, None).unwrap();
        assert_eq!(t.get(9), Some(3));
        assert_eq!(t.get(6), Some(1));
        assert_eq!(
            t.entries.values().map(|&c| c as u128).sum::<u128>(),
            binomial(6, 3)
        );
        let t1 = ksum_multiplicity(&set(&[1, 2, 3, 4, 5, 6]), 3, 1, None).unwrap();
        assert!(t1.entries.values().all(|&c| c == 1));
        assert_eq!(t1.len(), 10);
    }

    #[test]
    fn representations() {
        let r = enumerate_representations(&set(&[1, 2, 3, 4]), 2).unwrap();
        let want: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::from([
            (3, vec![vec![1, 2]]),
            (4, vec![vec![1, 3]]),
            (5, vec![vec![1, 4], vec![2, 3]]),
            (6, vec![vec![2, 4]]),
            (7, vec![vec![3, 4]]),
        ]);
        assert_eq!(r.groups, want);
        let empty = enumerate_representations(&set(&[1, 2, 3, 4]), 0).unwrap();
        assert_eq!(empty.groups, BTreeMap::from([(0, vec![vec![]])]));
    }

    #[test]
    fn representation_threshold() {
        let a = IntegerSet::new((1..=40).collect()).unwrap();
        match enumerate_representations(&a, 10) {
            Err(SumsetError::ThresholdExceeded { required, .. }) => {
                assert_eq!(required, 847_660_528)
            }
            other => panic!("expected threshold error, got {other:?}"),
        }
    }

    #[test]
    fn wide_spread_uses_sparse_kernel() {
        // spread ~ 2^61 forces the hash-map path
        let a = set(&[-(1 << 60), -5, 0, 7, 1 << 60]);
        assert_eq!(
            ksum_set(&a, 2).unwrap(),
            vec![
                -(1 << 60) - 5,
                -(1 << 60),
                -(1 << 60) + 7,
                -5,
                0,
                2,
                7,
                (1 << 60) - 5,
                1 << 60,
                (1 << 60) + 7
            ]
        );
        assert_eq!(ksum_count(&a, 2).unwrap(), 10);
        let t = ksum_multiplicity(&a, 2, 2, None).unwrap();
        assert_eq!(t.get(0), Some(1));
        assert_eq!(t.len(), 10);
        let b = set(&[-(1 << 60), -1, 0, 1, 1 << 60]);
        let t = ksum_multiplicity(&b, 2, 2, None).unwrap();
        assert_eq!(t.get(0), Some(2));
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0;
        for_each_combination(3, 0, |c| {
            assert!(c.is_empty());
            count += 1
        });
        assert_eq!(count, 1);
    }
}
