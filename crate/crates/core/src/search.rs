//! Searches over integer sets for large `|(k+1)∧A| / |k∧A|` ratios and for
//! sets violating the ratio bound while `n > 2k`.
//!
//! Exhaustive mode walks every `n`-subset of `{1, …, M}`; it is split into
//! chunks by the first two elements and merged deterministically, so results
//! do not depend on scheduling. Stochastic mode is a seeded hill climber with
//! random restarts.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SumsetError};
use crate::harness::generate::{check_range, random_set_with};
use crate::harness::ratio::{ratio_check, RatioVerdict};
use crate::set::{binomial, IntegerSet};

pub const DEFAULT_SEARCH_BUDGET: u128 = 50_000_000;
pub const DEFAULT_PATIENCE: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Stochastic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SearchSpace {
    Exhaustive {
        universe: u64,
        n: usize,
        k: usize,
        /// Only sets with minimum 1 and coprime gaps were evaluated.
        canonical: bool,
    },
    Stochastic {
        n: usize,
        k: usize,
        lo: i64,
        hi: i64,
        budget: u64,
        patience: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub mode: SearchMode,
    pub space: SearchSpace,
    pub instances_checked: u64,
    /// Largest exact ratio found; ties go to the lexicographically smallest set.
    pub best: Option<RatioVerdict>,
    /// Sets with `n > 2k` violating the bound, sorted by set.
    pub counterexamples: Vec<RatioVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepted_steps: Option<u64>,
    /// Every evaluated verdict, when requested.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub instances: Vec<RatioVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl SearchReport {
    /// The report with timing removed; identical runs serialize identically.
    pub fn without_timing(&self) -> SearchReport {
        SearchReport {
            wall_time_ms: None,
            ..self.clone()
        }
    }

    /// Re-derives every certificate from scratch.
    pub fn certificates_verify(&self) -> Result<bool> {
        for c in &self.counterexamples {
            if !c.reverify()? || !c.is_counterexample() {
                return Ok(false);
            }
        }
        if let Some(b) = &self.best {
            if !b.reverify()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveParams {
    pub universe: u64,
    pub n: usize,
    pub k: usize,
    pub budget: u128,
    pub canonical: bool,
    pub record_instances: bool,
}

impl ExhaustiveParams {
    pub fn new(universe: u64, n: usize, k: usize) -> Self {
        ExhaustiveParams {
            universe,
            n,
            k,
            budget: DEFAULT_SEARCH_BUDGET,
            canonical: false,
            record_instances: false,
        }
    }
}

/// Best-and-counterexample accumulator shared by both modes.
#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    best: Option<RatioVerdict>,
    counterexamples: Vec<RatioVerdict>,
    instances: Vec<RatioVerdict>,
}

impl Tally {
    fn record(&mut self, v: RatioVerdict, keep: bool) {
        self.checked += 1;
        if v.is_counterexample() {
            self.counterexamples.push(v.clone());
        }
        if keep {
            self.instances.push(v.clone());
        }
        self.consider_best(v);
    }

    fn consider_best(&mut self, v: RatioVerdict) {
        let better = match &self.best {
            None => true,
            Some(b) => match v.cmp_ratio(b) {
                Ordering::Greater => true,
                Ordering::Equal => v.set < b.set,
                Ordering::Less => false,
            },
        };
        if better {
            self.best = Some(v);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.counterexamples.extend(other.counterexamples);
        self.instances.extend(other.instances);
        if let Some(b) = other.best {
            self.consider_best(b);
        }
        self
    }
}

fn sort_verdicts(v: &mut Vec<RatioVerdict>) {
    v.sort_by(|a, b| a.set.cmp(&b.set).then(a.k.cmp(&b.k)));
    v.dedup_by(|a, b| a.set == b.set && a.k == b.k);
}

/// Number of sets an exhaustive run over `{1..M}` would evaluate without pruning.
pub fn exhaustive_size(universe: u64, n: usize) -> u128 {
    binomial(universe as usize, n)
}

/// Evaluates every `n`-subset of `{1, …, M}` (or its canonical representatives).
pub fn exhaustive_search(params: &ExhaustiveParams) -> Result<SearchReport> {
    let started = Instant::now();
    let ExhaustiveParams {
        universe,
        n,
        k,
        budget,
        canonical,
        record_instances,
    } = *params;
    if k == 0 || k >= n {
        return Err(SumsetError::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    if n as u64 > universe {
        return Err(SumsetError::InvalidParameters(format!(
            "cannot choose {n} distinct elements from {{1..{universe}}}"
        )));
    }
    if universe > i64::MAX as u64 / n as u64 {
        return Err(SumsetError::overflow("universe bound"));
    }
    let required = exhaustive_size(universe, n);
    if required > budget {
        return Err(SumsetError::ThresholdExceeded {
            what: "exhaustive search",
            required,
            threshold: budget,
        });
    }

    let m = universe as usize;
    let prefix_len = n.min(2);
    let mut prefixes = Vec::new();
    crate::sumset::for_each_combination(m, prefix_len, |p| {
        // prefix must leave room for the remaining elements
        if p.last().is_none_or(|&last| m - 1 - last >= n - prefix_len) {
            prefixes.push(p.to_vec());
        }
    });
    if canonical {
        prefixes.retain(|p| p[0] == 0);
    }

    let tally = prefixes
        .par_iter()
        .map(|prefix| -> Result<Tally> {
            let mut tally = Tally::default();
            let start = prefix.last().map_or(0, |&l| l + 1);
            let rest = n - prefix_len;
            let mut elements: Vec<i64> = Vec::with_capacity(n);
            let mut failure = None;
            crate::sumset::for_each_combination(m - start, rest, |tail| {
                if failure.is_some() {
                    return;
                }
                elements.clear();
                elements.extend(prefix.iter().map(|&i| i as i64 + 1));
                elements.extend(tail.iter().map(|&i| (i + start) as i64 + 1));
                if canonical && gaps_gcd(&elements) != 1 {
                    return;
                }
                match IntegerSet::from_sorted(elements.clone()).and_then(|a| ratio_check(&a, k)) {
                    Ok(v) => tally.record(v, record_instances),
                    Err(e) => failure = Some(e),
                }
            });
            match failure {
                Some(e) => Err(e),
                None => Ok(tally),
            }
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Tally::default(), Tally::merge);

    let mut counterexamples = tally.counterexamples;
    sort_verdicts(&mut counterexamples);
    let mut instances = tally.instances;
    sort_verdicts(&mut instances);
    Ok(SearchReport {
        mode: SearchMode::Exhaustive,
        space: SearchSpace::Exhaustive {
            universe,
            n,
            k,
            canonical,
        },
        instances_checked: tally.checked,
        best: tally.best,
        counterexamples,
        seed: None,
        restarts: None,
        accepted_steps: None,
        instances,
        wall_time_ms: Some(started.elapsed().as_millis() as u64),
    })
}

fn gaps_gcd(sorted: &[i64]) -> i64 {
    sorted.windows(2).fold(0, |g, w| gcd(g, w[1] - w[0]))
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochasticParams {
    pub n: usize,
    pub k: usize,
    pub lo: i64,
    pub hi: i64,
    pub seed: u64,
    /// Total number of ratio evaluations.
    pub budget: u64,
    /// Consecutive non-improving proposals before a restart.
    pub patience: u64,
    pub record_instances: bool,
}

impl StochasticParams {
    pub fn new(n: usize, k: usize, lo: i64, hi: i64, seed: u64, budget: u64) -> Self {
        StochasticParams {
            n,
            k,
            lo,
            hi,
            seed,
            budget,
            patience: DEFAULT_PATIENCE,
            record_instances: false,
        }
    }
}

/// Hill-climber progress, for observers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClimbEvent {
    /// A fresh random starting set.
    Restart {
        set: IntegerSet,
        lhs_cross: u64,
        rhs_cross: u64,
    },
    /// A proposal accepted because its ratio did not decrease.
    Accepted {
        set: IntegerSet,
        lhs_cross: u64,
        rhs_cross: u64,
    },
}

pub fn stochastic_search(params: &StochasticParams) -> Result<SearchReport> {
    stochastic_search_observed(params, |_| {})
}

/// Seeded hill climbing: a move replaces one element by a fresh in-range
/// value; moves are accepted iff the exact ratio does not decrease.
pub fn stochastic_search_observed(
    params: &StochasticParams,
    mut observe: impl FnMut(&ClimbEvent),
) -> Result<SearchReport> {
    let started = Instant::now();
    let StochasticParams {
        n,
        k,
        lo,
        hi,
        seed,
        budget,
        patience,
        record_instances,
    } = *params;
    if k == 0 || k >= n {
        return Err(SumsetError::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    check_range(n, lo, hi)?;
    if budget == 0 {
        return Err(SumsetError::InvalidParameters(
            "budget must be at least 1".into(),
        ));
    }
    let saturated = (hi as i128 - lo as i128 + 1) == n as i128;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    let mut restarts = 0u64;
    let mut accepted = 0u64;

    while tally.checked < budget {
        let start = random_set_with(&mut rng, n, lo, hi)?;
        let mut current = ratio_check(&start, k)?;
        restarts += 1;
        observe(&ClimbEvent::Restart {
            set: current.set.clone(),
            lhs_cross: current.lhs_cross,
            rhs_cross: current.rhs_cross,
        });
        tally.record(current.clone(), record_instances);
        if saturated {
            // the range admits exactly one set
            break;
        }
        let mut stale = 0u64;
        while tally.checked < budget && stale < patience {
            let candidate = neighbor(&mut rng, &current.set, lo, hi)?;
            let verdict = ratio_check(&candidate, k)?;
            tally.record(verdict.clone(), record_instances);
            match verdict.cmp_ratio(&current) {
                Ordering::Less => stale += 1,
                ord => {
                    stale = if ord == Ordering::Greater {
                        0
                    } else {
                        stale + 1
                    };
                    accepted += 1;
                    observe(&ClimbEvent::Accepted {
                        set: verdict.set.clone(),
                        lhs_cross: verdict.lhs_cross,
                        rhs_cross: verdict.rhs_cross,
                    });
                    current = verdict;
                }
            }
        }
    }

    let mut counterexamples = tally.counterexamples;
    sort_verdicts(&mut counterexamples);
    Ok(SearchReport {
        mode: SearchMode::Stochastic,
        space: SearchSpace::Stochastic {
            n,
            k,
            lo,
            hi,
            budget,
            patience,
        },
        instances_checked: tally.checked,
        best: tally.best,
        counterexamples,
        seed: Some(seed),
        restarts: Some(restarts),
        accepted_steps: Some(accepted),
        instances: tally.instances,
        wall_time_ms: Some(started.elapsed().as_millis() as u64),
    })
}

fn neighbor(rng: &mut impl Rng, set: &IntegerSet, lo: i64, hi: i64) -> Result<IntegerSet> {
    let idx = rng.random_range(0..set.len());
    let fresh = loop {
        let x = rng.random_range(lo..=hi);
        if !set.contains(x) {
            break x;
        }
    };
    let mut v = set.elements().to_vec();
    v[idx] = fresh;
    IntegerSet::new(v)
}

/// Unique sets across all counterexamples, for summaries.
pub fn distinct_counterexample_sets(reports: &[SearchReport]) -> BTreeSet<IntegerSet> {
    reports
        .iter()
        .flat_map(|r| r.counterexamples.iter().map(|c| c.set.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_choose_three() {
        let r = exhaustive_search(&ExhaustiveParams::new(6, 3, 1)).unwrap();
        assert_eq!(r.instances_checked, 20);
        // k = (n-1)/2: every set attains equality, so the tie-break decides
        let best = r.best.unwrap();
        assert!(best.equality);
        assert_eq!(best.set.elements(), &[1, 2, 3]);
        assert_eq!((best.size_k, best.size_k1), (3, 3));
        assert!(r.counterexamples.is_empty());
        let mut p = ExhaustiveParams::new(6, 3, 1);
        p.record_instances = true;
        let all = exhaustive_search(&p).unwrap();
        assert_eq!(all.instances.len(), 20);
        assert!(all.instances.iter().all(|v| v.equality));
        let gp = all
            .instances
            .iter()
            .find(|v| v.set.elements() == [1, 2, 4])
            .unwrap();
        assert_eq!((gp.lhs_cross, gp.rhs_cross), (6, 6));
    }

    #[test]
    fn exhaustive_guards() {
        assert!(matches!(
            exhaustive_search(&ExhaustiveParams::new(4, 5, 1)),
            Err(SumsetError::InvalidParameters(_))
        ));
        let mut p = ExhaustiveParams::new(30, 10, 2);
        p.budget = 1000;
        match exhaustive_search(&p) {
            Err(SumsetError::ThresholdExceeded { required, .. }) => {
                assert_eq!(required, 30_045_015)
            }
            other => panic!("{other:?}"),
        }
        assert!(exhaustive_search(&ExhaustiveParams::new(6, 3, 3)).is_err());
    }

    #[test]
    fn exhaustive_n_equals_universe() {
        let r = exhaustive_search(&ExhaustiveParams::new(5, 5, 2)).unwrap();
        assert_eq!(r.instances_checked, 1);
        assert_eq!(r.best.unwrap().set.elements(), &[1, 2, 3, 4, 5]);
    }

    #[test]
    fn canonical_matches_full_best() {
        for (m, n, k) in [(6, 3, 1), (6, 4, 1), (6, 4, 2), (6, 5, 2), (5, 3, 1)] {
            let full = exhaustive_search(&ExhaustiveParams::new(m, n, k)).unwrap();
            let mut p = ExhaustiveParams::new(m, n, k);
            p.canonical = true;
            let pruned = exhaustive_search(&p).unwrap();
            assert!(pruned.instances_checked <= full.instances_checked);
            let (a, b) = (full.best.unwrap(), pruned.best.unwrap());
            assert_eq!(a.cmp_ratio(&b), Ordering::Equal);
            assert_eq!(a.set, b.set);
        }
    }

    #[test]
    fn stochastic_guards() {
        assert!(matches!(
            stochastic_search(&StochasticParams::new(5, 2, 1, 4, 0, 10)),
            Err(SumsetError::InvalidParameters(_))
        ));
        assert!(stochastic_search(&StochasticParams::new(5, 2, 1, 40, 0, 0)).is_err());
        assert!(stochastic_search(&StochasticParams::new(5, 5, 1, 40, 0, 10)).is_err());
    }

    #[test]
    fn stochastic_single_set_range() {
        let r = stochastic_search(&StochasticParams::new(4, 1, 1, 4, 3, 50)).unwrap();
        assert_eq!(r.instances_checked, 1);
        assert_eq!(r.best.unwrap().set.elements(), &[1, 2, 3, 4]);
    }

    #[test]
    fn stochastic_respects_budget() {
        let r = stochastic_search(&StochasticParams::new(5, 1, -20, 20, 11, 321)).unwrap();
        assert_eq!(r.instances_checked, 321);
        assert!(r.restarts.unwrap() >= 1);
        assert!(r.certificates_verify().unwrap());
    }

    #[test]
    fn gcd_of_gaps() {
        assert_eq!(gaps_gcd(&[1, 3, 7]), 2);
        assert_eq!(gaps_gcd(&[1, 2, 7]), 1);
        assert_eq!(gaps_gcd(&[4]), 0);
    }
}
