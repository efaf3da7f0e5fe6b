//! The bipartite extension graph between `k`-sums and `(k+1)`-sums.
//!
//! `s ∈ k∧A` is joined to `t ∈ (k+1)∧A` when some representation of `s`
//! avoids `a = t − s`. The edge also belongs to the subgraph `H` when two
//! distinct representations of `s` both avoid `a`. Vertices are the sum
//! values themselves.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::ratio::{question_hypothesis, theorem_hypothesis};
use crate::set::IntegerSet;
use crate::sumset::{
    enumerate_representations_with_limit, ksum_multiplicity, ksum_set,
    DEFAULT_ENUMERATION_THRESHOLD,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(i64, i64, bool)", into = "(i64, i64, bool)")]
pub struct Edge {
    pub s: i64,
    pub t: i64,
    pub in_h: bool,
}

impl From<(i64, i64, bool)> for Edge {
    fn from((s, t, in_h): (i64, i64, bool)) -> Self {
        Edge { s, t, in_h }
    }
}

impl From<Edge> for (i64, i64, bool) {
    fn from(e: Edge) -> Self {
        (e.s, e.t, e.in_h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionGraph {
    pub k: usize,
    pub n: usize,
    /// `k∧A`, ascending.
    #[serde(rename = "U")]
    pub u: Vec<i64>,
    /// `(k+1)∧A`, ascending.
    #[serde(rename = "V")]
    pub v: Vec<i64>,
    /// Sorted by `(s, t)`.
    pub edges: Vec<Edge>,
    /// `k`-sums with at least two representations.
    #[serde(rename = "S_set")]
    pub s_set: Vec<i64>,
    /// `(k+1)`-sums with at least two representations.
    #[serde(rename = "T_set")]
    pub t_set: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuildStrategy {
    /// One cap-2 multiplicity DP over `A ∖ {a}` per element `a`.
    #[default]
    Exclusion,
    /// Explicit enumeration of every `k`- and `(k+1)`-subset.
    Representations,
}

impl ExtensionGraph {
    pub fn e_g(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn e_h(&self) -> u64 {
        self.edges.iter().filter(|e| e.in_h).count() as u64
    }

    /// `Q_k = U ∖ S`
    pub fn q_k(&self) -> Vec<i64> {
        difference(&self.u, &self.s_set)
    }

    /// `Q_{k+1} = V ∖ T`
    pub fn q_k1(&self) -> Vec<i64> {
        difference(&self.v, &self.t_set)
    }

    pub fn h_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.in_h)
    }
}

fn difference(all: &[i64], remove: &[i64]) -> Vec<i64> {
    all.iter()
        .copied()
        .filter(|x| remove.binary_search(x).is_err())
        .collect()
}

/// Builds `G` and `H` with the exclusion-DP strategy.
pub fn build_extension_graphs(set: &IntegerSet, k: usize) -> Result<ExtensionGraph> {
    build_extension_graphs_with(set, k, BuildStrategy::Exclusion)
}

pub fn build_extension_graphs_with(
    set: &IntegerSet,
    k: usize,
    strategy: BuildStrategy,
) -> Result<ExtensionGraph> {
    let n = set.len();
    if k >= n {
        return Err(crate::SumsetError::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    match strategy {
        BuildStrategy::Exclusion => build_by_exclusion(set, k),
        BuildStrategy::Representations => build_by_representations(set, k),
    }
}

fn build_by_exclusion(set: &IntegerSet, k: usize) -> Result<ExtensionGraph> {
    let per_element: Vec<Vec<Edge>> = set
        .elements()
        .par_iter()
        .map(|&a| {
            let table = ksum_multiplicity(set, k, 2, Some(a))?;
            Ok(table
                .entries
                .iter()
                .map(|(&s, &m)| Edge {
                    s,
                    t: s + a,
                    in_h: m >= 2,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut edges: Vec<Edge> = per_element.into_iter().flatten().collect();
    edges.sort_unstable();

    Ok(ExtensionGraph {
        k,
        n: set.len(),
        u: ksum_set(set, k)?,
        v: ksum_set(set, k + 1)?,
        edges,
        s_set: ksum_multiplicity(set, k, 2, None)?.repeated(),
        t_set: ksum_multiplicity(set, k + 1, 2, None)?.repeated(),
    })
}

fn build_by_representations(set: &IntegerSet, k: usize) -> Result<ExtensionGraph> {
    let reps_k = enumerate_representations_with_limit(set, k, DEFAULT_ENUMERATION_THRESHOLD)?;
    let reps_k1 = enumerate_representations_with_limit(set, k + 1, DEFAULT_ENUMERATION_THRESHOLD)?;
    let mut edges = Vec::new();
    for (&s, subsets) in &reps_k.groups {
        for &a in set.elements() {
            let avoiding = subsets.iter().filter(|r| !r.contains(&a)).count();
            if avoiding >= 1 {
                edges.push(Edge {
                    s,
                    t: s + a,
                    in_h: avoiding >= 2,
                });
            }
        }
    }
    edges.sort_unstable();
    let repeated = |groups: &BTreeMap<i64, Vec<Vec<i64>>>| {
        groups
            .iter()
            .filter(|(_, r)| r.len() >= 2)
            .map(|(&s, _)| s)
            .collect::<Vec<_>>()
    };
    Ok(ExtensionGraph {
        k,
        n: set.len(),
        u: reps_k.sums().collect(),
        v: reps_k1.sums().collect(),
        s_set: repeated(&reps_k.groups),
        t_set: repeated(&reps_k1.groups),
        edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDegree {
    pub value: i64,
    pub d_g: u64,
    pub d_h: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub u: Vec<VertexDegree>,
    pub v: Vec<VertexDegree>,
    /// `min d_H(u_s)` over `s ∈ S`; `None` when `S` is empty.
    pub min_dh_over_s: Option<u64>,
    /// `min d_G(v_t)` over `t ∈ T`; `None` when `T` is empty.
    pub min_dg_over_t: Option<u64>,
    pub min_dg_u: u64,
    pub max_dg_u: u64,
    pub min_dg_v: u64,
    pub max_dg_v: u64,
}

impl DegreeProfile {
    pub fn u_degree(&self, s: i64) -> Option<&VertexDegree> {
        lookup(&self.u, s)
    }

    pub fn v_degree(&self, t: i64) -> Option<&VertexDegree> {
        lookup(&self.v, t)
    }
}

fn lookup(side: &[VertexDegree], value: i64) -> Option<&VertexDegree> {
    side.binary_search_by_key(&value, |d| d.value)
        .ok()
        .map(|i| &side[i])
}

pub fn degree_profile(g: &ExtensionGraph) -> DegreeProfile {
    let blank = |values: &[i64]| -> Vec<VertexDegree> {
        values
            .iter()
            .map(|&value| VertexDegree {
                value,
                d_g: 0,
                d_h: 0,
            })
            .collect()
    };
    let mut u = blank(&g.u);
    let mut v = blank(&g.v);
    for e in &g.edges {
        // edges reference existing vertices by construction
        if let Ok(i) = g.u.binary_search(&e.s) {
            u[i].d_g += 1;
            u[i].d_h += e.in_h as u64;
        }
        if let Ok(j) = g.v.binary_search(&e.t) {
            v[j].d_g += 1;
            v[j].d_h += e.in_h as u64;
        }
    }
    let min_dh_over_s = g
        .s_set
        .iter()
        .filter_map(|&s| lookup(&u, s))
        .map(|d| d.d_h)
        .min();
    let min_dg_over_t = g
        .t_set
        .iter()
        .filter_map(|&t| lookup(&v, t))
        .map(|d| d.d_g)
        .min();
    let extent = |side: &[VertexDegree]| {
        (
            side.iter().map(|d| d.d_g).min().unwrap_or(0),
            side.iter().map(|d| d.d_g).max().unwrap_or(0),
        )
    };
    let (min_dg_u, max_dg_u) = extent(&u);
    let (min_dg_v, max_dg_v) = extent(&v);
    DegreeProfile {
        u,
        v,
        min_dh_over_s,
        min_dg_over_t,
        min_dg_u,
        max_dg_u,
        min_dg_v,
        max_dg_v,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    /// `e(G) ≤ n|U|`
    BasicUpper,
    /// `e(G) ≥ (k+1)|V|`
    BasicLower,
    /// `e(G) ≤ (n−k)|k∧A| + k|S|`
    RefinedUpper,
    /// `e(G) ≥ (k+1)|(k+1)∧A| + 2|T|`
    RefinedLower,
    /// `e(H) ≥ (n−2k)|S|`
    HFromS,
    /// `d_G(v_t) ≥ k+3` for every `t ∈ T`
    TDegreePlus3,
    /// `(k+3)·d_G(v_t) ≥ (k+1)(k+3) + 2·d_H(v_t)` for every `t ∈ T`
    TDegreeInterpolation,
    /// `(k+3)·e(G) ≥ (k+1)(k+3)|V| + 2·e(H)`
    InterpolatedLower,
    /// `(k+3)(k+1)|V| + 2(n−2k)|S| ≤ (k+3)((n−k)|U| + k|S|)`
    Combined,
    /// `(k+1)|(k+1)∧A| ≤ (n−k)|k∧A|`
    Conclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A `k`-sum vertex `u_s`.
    U { value: i64, d_g: u64, d_h: u64 },
    /// A `(k+1)`-sum vertex `v_t`.
    V { value: i64, d_g: u64, d_h: u64 },
    /// Whole-instance witness for checks with no per-vertex form.
    Instance { size_k: u64, size_k1: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub name: CheckName,
    pub lhs: i128,
    pub relation: Relation,
    pub rhs: i128,
    pub holds: bool,
    /// Number of vertices a per-vertex check ranged over; `lhs`/`rhs` then
    /// describe the tightest one (both 0 when the range is empty).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisFlags {
    /// `n ≥ (k² + 7k)/2`
    pub theorem: bool,
    /// `n > 2k`
    pub question: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub set: IntegerSet,
    pub n: usize,
    pub k: usize,
    pub e_g: u64,
    pub e_h: u64,
    pub size_u: u64,
    pub size_v: u64,
    pub size_s: u64,
    pub size_t: u64,
    /// Counting-chain inequalities that hold for every instance.
    pub checks: Vec<ChainCheck>,
    /// The ratio bound itself, guaranteed only under the theorem hypothesis.
    pub conclusion: ChainCheck,
    pub hypothesis_flags: HypothesisFlags,
    /// Every entry of `checks` holds.
    pub chain_holds: bool,
}

impl VerificationReport {
    pub fn check(&self, name: CheckName) -> Option<&ChainCheck> {
        if name == CheckName::Conclusion {
            return Some(&self.conclusion);
        }
        self.checks.iter().find(|c| c.name == name)
    }

    /// False only if the conclusion fails although the hypothesis holds.
    pub fn theorem_consistent(&self) -> bool {
        !self.hypothesis_flags.theorem || self.conclusion.holds
    }
}

/// Builds `G`/`H` for `(A, k)` and evaluates every inequality in the
/// double-counting chain. False inequalities are recorded, never raised.
pub fn verify_counting_chain(set: &IntegerSet, k: usize) -> Result<VerificationReport> {
    let g = build_extension_graphs(set, k)?;
    Ok(verify_graph(set, &g))
}

/// Evaluates the chain on an already-built graph for `set`.
pub fn verify_graph(set: &IntegerSet, g: &ExtensionGraph) -> VerificationReport {
    let n = set.len() as i128;
    let k = g.k as i128;
    let profile = degree_profile(g);
    let e_g = g.e_g() as i128;
    let e_h = g.e_h() as i128;
    let size_u = g.u.len() as i128;
    let size_v = g.v.len() as i128;
    let size_s = g.s_set.len() as i128;
    let size_t = g.t_set.len() as i128;

    let in_s = |x: i64| g.s_set.binary_search(&x).is_ok();
    let in_t = |x: i64| g.t_set.binary_search(&x).is_ok();
    let u_witness = |d: &VertexDegree| Witness::U {
        value: d.value,
        d_g: d.d_g,
        d_h: d.d_h,
    };
    let v_witness = |d: &VertexDegree| Witness::V {
        value: d.value,
        d_g: d.d_g,
        d_h: d.d_h,
    };
    let instance = Witness::Instance {
        size_k: size_u as u64,
        size_k1: size_v as u64,
    };
    // vertex with the least slack under a per-vertex bound
    let tightest_u = |slack: &dyn Fn(&VertexDegree) -> i128| {
        profile.u.iter().min_by_key(|d| slack(d)).map(u_witness)
    };
    let tightest_v = |slack: &dyn Fn(&VertexDegree) -> i128| {
        profile.v.iter().min_by_key(|d| slack(d)).map(v_witness)
    };

    let mut checks = Vec::new();

    checks.push(aggregate(
        CheckName::BasicUpper,
        e_g,
        Relation::AtMost,
        n * size_u,
        || tightest_u(&|d| n - d.d_g as i128),
    ));
    checks.push(aggregate(
        CheckName::BasicLower,
        e_g,
        Relation::AtLeast,
        (k + 1) * size_v,
        || tightest_v(&|d| d.d_g as i128 - (k + 1)),
    ));
    checks.push(aggregate(
        CheckName::RefinedUpper,
        e_g,
        Relation::AtMost,
        (n - k) * size_u + k * size_s,
        || tightest_u(&|d| if in_s(d.value) { n } else { n - k } - d.d_g as i128),
    ));
    checks.push(aggregate(
        CheckName::RefinedLower,
        e_g,
        Relation::AtLeast,
        (k + 1) * size_v + 2 * size_t,
        || tightest_v(&|d| d.d_g as i128 - if in_t(d.value) { k + 3 } else { k + 1 }),
    ));
    checks.push(aggregate(
        CheckName::HFromS,
        e_h,
        Relation::AtLeast,
        (n - 2 * k) * size_s,
        || {
            profile
                .u
                .iter()
                .filter(|d| in_s(d.value))
                .min_by_key(|d| d.d_h)
                .map(u_witness)
        },
    ));

    let t_degrees: Vec<&VertexDegree> = g
        .t_set
        .iter()
        .filter_map(|&t| profile.v_degree(t))
        .collect();
    checks.push(per_vertex(
        CheckName::TDegreePlus3,
        &t_degrees,
        |d| (d.d_g as i128, k + 3),
        v_witness,
    ));
    checks.push(per_vertex(
        CheckName::TDegreeInterpolation,
        &t_degrees,
        |d| {
            (
                (k + 3) * d.d_g as i128,
                (k + 1) * (k + 3) + 2 * d.d_h as i128,
            )
        },
        v_witness,
    ));
    checks.push(aggregate(
        CheckName::InterpolatedLower,
        (k + 3) * e_g,
        Relation::AtLeast,
        (k + 1) * (k + 3) * size_v + 2 * e_h,
        || tightest_v(&|d| (k + 3) * d.d_g as i128 - (k + 1) * (k + 3) - 2 * d.d_h as i128),
    ));
    checks.push(aggregate(
        CheckName::Combined,
        (k + 3) * (k + 1) * size_v + 2 * (n - 2 * k) * size_s,
        Relation::AtMost,
        (k + 3) * ((n - k) * size_u + k * size_s),
        || Some(instance),
    ));

    let conclusion = aggregate(
        CheckName::Conclusion,
        (k + 1) * size_v,
        Relation::AtMost,
        (n - k) * size_u,
        || Some(instance),
    );

    let chain_holds = checks.iter().all(|c| c.holds);
    VerificationReport {
        set: set.clone(),
        n: set.len(),
        k: g.k,
        e_g: e_g as u64,
        e_h: e_h as u64,
        size_u: size_u as u64,
        size_v: size_v as u64,
        size_s: size_s as u64,
        size_t: size_t as u64,
        checks,
        conclusion,
        hypothesis_flags: HypothesisFlags {
            theorem: theorem_hypothesis(set.len(), g.k),
            question: question_hypothesis(set.len(), g.k),
        },
        chain_holds,
    }
}

fn compare(lhs: i128, relation: Relation, rhs: i128) -> bool {
    match relation {
        Relation::AtMost => lhs <= rhs,
        Relation::AtLeast => lhs >= rhs,
    }
}

fn aggregate(
    name: CheckName,
    lhs: i128,
    relation: Relation,
    rhs: i128,
    witness: impl FnOnce() -> Option<Witness>,
) -> ChainCheck {
    let holds = compare(lhs, relation, rhs);
    let witness = if holds {
        None
    } else {
        // fall back to the whole instance when no vertex is available
        Some(witness().unwrap_or(Witness::Instance {
            size_k: 0,
            size_k1: 0,
        }))
    };
    ChainCheck {
        name,
        lhs,
        relation,
        rhs,
        holds,
        vertices: None,
        witness,
    }
}

/// `lhs(v) ≥ rhs(v)` for every vertex; reports the vertex with least slack.
fn per_vertex(
    name: CheckName,
    vertices: &[&VertexDegree],
    sides: impl Fn(&VertexDegree) -> (i128, i128),
    witness: impl Fn(&VertexDegree) -> Witness,
) -> ChainCheck {
    let tightest = vertices.iter().min_by_key(|d| {
        let (l, r) = sides(d);
        l - r
    });
    let (lhs, rhs) = tightest.map(|d| sides(d)).unwrap_or((0, 0));
    let holds = lhs >= rhs;
    ChainCheck {
        name,
        lhs,
        relation: Relation::AtLeast,
        rhs,
        holds,
        vertices: Some(vertices.len()),
        witness: if holds {
            None
        } else {
            tightest.map(|d| witness(d))
        },
    }
}
