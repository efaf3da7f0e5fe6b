//! Instance generators: geometric and arithmetic progressions, and seeded
//! random sets.
//!
//! Random sets use ChaCha8 seeded from a `u64` and rejection sampling for
//! distinctness, so a seed reproduces the same set on every platform.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SumsetError};
use crate::set::IntegerSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorSpec {
    /// `{a0 · r^i : 0 ≤ i < n}`
    Gp { n: usize, ratio: i64, first: i64 },
    /// `{a0 + i·d : 0 ≤ i < n}`
    Ap { n: usize, diff: i64, first: i64 },
    /// `n` distinct values drawn uniformly from `[lo, hi]`.
    Random {
        n: usize,
        lo: i64,
        hi: i64,
        seed: Option<u64>,
    },
}

impl GeneratorSpec {
    pub fn is_stochastic(&self) -> bool {
        matches!(self, GeneratorSpec::Random { .. })
    }

    /// Fills in a missing random seed.
    pub fn with_default_seed(self, default: u64) -> Self {
        match self {
            GeneratorSpec::Random { n, lo, hi, seed } => GeneratorSpec::Random {
                n,
                lo,
                hi,
                seed: seed.or(Some(default)),
            },
            other => other,
        }
    }

    pub fn generate(&self) -> Result<IntegerSet> {
        match *self {
            GeneratorSpec::Gp { n, ratio, first } => geometric(n, ratio, first),
            GeneratorSpec::Ap { n, diff, first } => arithmetic(n, diff, first),
            GeneratorSpec::Random { n, lo, hi, seed } => {
                let seed = seed.ok_or_else(|| {
                    SumsetError::InvalidParameters("random generator needs a seed".into())
                })?;
                random_set(n, lo, hi, seed)
            }
        }
    }
}

pub fn geometric(n: usize, ratio: i64, first: i64) -> Result<IntegerSet> {
    if n == 0 {
        return Err(SumsetError::EmptySet);
    }
    if first == 0 {
        return Err(SumsetError::InvalidParameters(
            "gp first term must be nonzero".into(),
        ));
    }
    if ratio.unsigned_abs() < 2 {
        return Err(SumsetError::InvalidParameters(
            "gp ratio must satisfy |r| >= 2".into(),
        ));
    }
    let mut v = Vec::with_capacity(n);
    let mut term = first;
    for i in 0..n {
        v.push(term);
        if i + 1 < n {
            term = term
                .checked_mul(ratio)
                .ok_or_else(|| SumsetError::overflow(format!("gp term {} of {n}", i + 2)))?;
        }
    }
    IntegerSet::new(v)
}

pub fn arithmetic(n: usize, diff: i64, first: i64) -> Result<IntegerSet> {
    if n == 0 {
        return Err(SumsetError::EmptySet);
    }
    if diff < 1 {
        return Err(SumsetError::InvalidParameters(
            "ap difference must be >= 1".into(),
        ));
    }
    let v = (0..n as i64)
        .map(|i| {
            i.checked_mul(diff)
                .and_then(|x| x.checked_add(first))
                .ok_or_else(|| SumsetError::overflow(format!("ap term {}", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    IntegerSet::new(v)
}

pub fn random_set(n: usize, lo: i64, hi: i64, seed: u64) -> Result<IntegerSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_set_with(&mut rng, n, lo, hi)
}

/// Draws `n` distinct values from `[lo, hi]` using a caller-supplied stream.
pub fn random_set_with(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Result<IntegerSet> {
    check_range(n, lo, hi)?;
    let mut chosen = BTreeSet::new();
    while chosen.len() < n {
        chosen.insert(rng.random_range(lo..=hi));
    }
    IntegerSet::from_sorted(chosen.into_iter().collect())
}

pub(crate) fn check_range(n: usize, lo: i64, hi: i64) -> Result<()> {
    if n == 0 {
        return Err(SumsetError::EmptySet);
    }
    let available = hi as i128 - lo as i128 + 1;
    if available < n as i128 {
        return Err(SumsetError::InvalidParameters(format!(
            "range [{lo}, {hi}] cannot hold {n} distinct values"
        )));
    }
    Ok(())
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Gp { n, ratio, first } => write!(f, "gp:n={n},r={ratio},a0={first}"),
            GeneratorSpec::Ap { n, diff, first } => write!(f, "ap:n={n},d={diff},a0={first}"),
            GeneratorSpec::Random { n, lo, hi, seed } => {
                write!(f, "random:n={n},lo={lo},hi={hi}")?;
                if let Some(s) = seed {
                    write!(f, ",seed={s}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = SumsetError;

    /// `gp:n=5,r=2,a0=1`, `ap:n=5,d=1,a0=1`, `random:n=6,lo=-50,hi=50,seed=7`.
    /// `a0` defaults to 1, `r` to 2, `d` to 1.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut n = None;
        let mut r = None;
        let mut d = None;
        let mut a0 = None;
        let mut lo = None;
        let mut hi = None;
        let mut seed = None;
        for kv in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| SumsetError::parse(s, format!("expected key=value, got {kv:?}")))?;
            let int = || {
                value
                    .trim()
                    .parse::<i64>()
                    .map_err(|e| SumsetError::parse(s, format!("{key}: {e}")))
            };
            match key.trim() {
                "n" => {
                    n = Some(
                        value
                            .trim()
                            .parse::<usize>()
                            .map_err(|e| SumsetError::parse(s, format!("n: {e}")))?,
                    )
                }
                "r" | "ratio" => r = Some(int()?),
                "d" | "diff" => d = Some(int()?),
                "a0" | "first" => a0 = Some(int()?),
                "lo" | "min" => lo = Some(int()?),
                "hi" | "max" => hi = Some(int()?),
                "seed" => {
                    seed = Some(
                        value
                            .trim()
                            .parse::<u64>()
                            .map_err(|e| SumsetError::parse(s, format!("seed: {e}")))?,
                    )
                }
                other => return Err(SumsetError::parse(s, format!("unknown key {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| SumsetError::parse(s, "missing n"))?;
        match kind.trim() {
            "gp" => Ok(GeneratorSpec::Gp {
                n,
                ratio: r.unwrap_or(2),
                first: a0.unwrap_or(1),
            }),
            "ap" => Ok(GeneratorSpec::Ap {
                n,
                diff: d.unwrap_or(1),
                first: a0.unwrap_or(1),
            }),
            "random" => Ok(GeneratorSpec::Random {
                n,
                lo: lo.ok_or_else(|| SumsetError::parse(s, "missing lo"))?,
                hi: hi.ok_or_else(|| SumsetError::parse(s, "missing hi"))?,
                seed,
            }),
            other => Err(SumsetError::parse(
                s,
                format!("unknown generator {other:?}"),
            )),
        }
    }
}
