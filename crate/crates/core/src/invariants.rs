//! Distance-constrained independence `α^m(G)`, degree sums `σ^m_p(G)`, and the
//! degree-sum condition for spanning trees with `l`-ended stems.
//!
//! A set has pairwise distance `>= m` exactly when it is independent in the
//! power graph `G^{m-1}` (edge between vertices at distance `<= m-1`). Both
//! `alpha_m` and `sigma_m_p` run exact branch and bound on that power graph,
//! with vertex sets as `u128` masks.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{find_induced_star, Graph};

/// Largest graph order the bitmask search supports.
pub const MAX_ORDER: usize = 128;

/// Default branch-and-bound node budget.
pub const DEFAULT_WORK_LIMIT: u64 = 200_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("graph has {0} vertices; exact invariants support at most {MAX_ORDER}")]
    TooLarge(usize),
    #[error("work limit of {0} search nodes exceeded")]
    WorkLimit(u64),
}

/// `σ` value: a finite degree sum, or `+∞` when no admissible set exists.
/// Orders every finite value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sigma {
    Finite(u64),
    Infinite,
}

impl Sigma {
    pub fn finite(self) -> Option<u64> {
        match self {
            Sigma::Finite(v) => Some(v),
            Sigma::Infinite => None,
        }
    }

    /// `self >= rhs` with `+∞ >= anything`.
    pub fn at_least(self, rhs: i64) -> bool {
        match self {
            Sigma::Infinite => true,
            Sigma::Finite(v) => i128::from(v) >= i128::from(rhs),
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sigma::Finite(v) => write!(f, "{v}"),
            Sigma::Infinite => f.write_str("infinity"),
        }
    }
}

// JSON: a number, or the string "infinity".
impl Serialize for Sigma {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Sigma::Finite(v) => s.serialize_u64(*v),
            Sigma::Infinite => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for Sigma {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Sigma::Finite(v)),
            Raw::Str(s) if s == "infinity" => Ok(Sigma::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "expected number or \"infinity\", got {s:?}"
            ))),
        }
    }
}

/// A vertex set with pairwise distance at least `m`, with its degree sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceSet {
    pub vertices: Vec<usize>,
    pub m: u32,
    pub degree_sum: u64,
}

/// Evaluated degree-sum hypothesis for a `(G, t, l)` triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub t: usize,
    pub l: usize,
    pub n: usize,
    pub sigma4: Sigma,
    pub alpha4: usize,
    pub rhs: i64,
    pub hypothesis_holds: bool,
    pub l_equals_t_minus_2: bool,
    pub k1t_free: bool,
    pub connected: bool,
}

/// `n - floor(l(t-1)/(t-2)) - 1`.
pub fn condition_rhs(n: usize, t: usize, l: usize) -> i64 {
    assert!(t >= 3, "t must be at least 3");
    n as i64 - stem_size_bound(t, l) as i64 - 1
}

/// `floor(l(t-1)/(t-2))`: the largest stem a stuck tree may have when the
/// degree-sum condition holds.
pub fn stem_size_bound(t: usize, l: usize) -> usize {
    assert!(t >= 3, "t must be at least 3");
    l * (t - 1) / (t - 2)
}

pub fn evaluate_condition(g: &Graph, t: usize, l: usize) -> Result<ConditionReport, InvariantError> {
    evaluate_condition_with_limit(g, t, l, DEFAULT_WORK_LIMIT)
}

pub fn evaluate_condition_with_limit(
    g: &Graph,
    t: usize,
    l: usize,
    limit: u64,
) -> Result<ConditionReport, InvariantError> {
    assert!(t >= 3, "t must be at least 3");
    let sigma4 = sigma_m_p_with_limit(g, 4, l + 1, limit)?;
    let alpha4 = alpha_m_with_limit(g, 4, limit)?;
    let rhs = condition_rhs(g.order(), t, l);
    Ok(ConditionReport {
        t,
        l,
        n: g.order(),
        sigma4,
        alpha4,
        rhs,
        hypothesis_holds: sigma4.at_least(rhs),
        l_equals_t_minus_2: l + 2 == t,
        k1t_free: find_induced_star(g, t).is_none(),
        connected: g.is_connected(),
    })
}

/// `α^m(G)`: the largest vertex set with pairwise distance `>= m`.
pub fn alpha_m(g: &Graph, m: u32) -> Result<usize, InvariantError> {
    alpha_m_with_limit(g, m, DEFAULT_WORK_LIMIT)
}

pub fn alpha_m_with_limit(g: &Graph, m: u32, limit: u64) -> Result<usize, InvariantError> {
    let conflicts = conflict_masks(g, m)?;
    let mut search = MaxIndependent {
        conflicts: &conflicts,
        best: 0,
        work: 0,
        limit,
    };
    search.run(full_mask(g.order()), 0)?;
    Ok(search.best)
}

/// `σ^m_p(G)`.
pub fn sigma_m_p(g: &Graph, m: u32, p: usize) -> Result<Sigma, InvariantError> {
    sigma_m_p_with_limit(g, m, p, DEFAULT_WORK_LIMIT)
}

pub fn sigma_m_p_with_limit(g: &Graph, m: u32, p: usize, limit: u64) -> Result<Sigma, InvariantError> {
    Ok(match min_degree_set(g, m, p, limit)? {
        Some(set) => Sigma::Finite(set.degree_sum),
        None => Sigma::Infinite,
    })
}

/// A minimizing set for `σ^m_p(G)`, or `None` when `α^m(G) < p`.
pub fn min_degree_set(g: &Graph, m: u32, p: usize, limit: u64) -> Result<Option<DistanceSet>, InvariantError> {
    let n = g.order();
    let conflicts = conflict_masks(g, m)?;
    // Positions sorted by (degree, vertex) so the cheapest completions of a
    // partial set are the lowest set bits of the candidate mask.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut pos_of = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos_of[v] = i;
    }
    let pos_conflicts: Vec<u128> = order.iter().map(|&v| remap(conflicts[v], &pos_of)).collect();
    let pos_degree: Vec<u64> = order.iter().map(|&v| g.degree(v) as u64).collect();

    let mut search = MinDegreeSum {
        conflicts: &pos_conflicts,
        degree: &pos_degree,
        p,
        chosen: Vec::with_capacity(p),
        best: None,
        work: 0,
        limit,
    };
    search.run(full_mask(n), 0)?;
    Ok(search.best.map(|(sum, positions)| {
        let mut vertices: Vec<usize> = positions.into_iter().map(|i| order[i]).collect();
        vertices.sort_unstable();
        DistanceSet {
            vertices,
            m,
            degree_sum: sum,
        }
    }))
}

fn remap(mask: u128, pos_of: &[usize]) -> u128 {
    bits(mask).fold(0, |acc, v| acc | 1 << pos_of[v])
}

fn full_mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let v = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(v)
    })
}

/// Power-graph adjacency: bit `v` of `masks[u]` is set iff `u != v` and
/// `d(u, v) < m`.
fn conflict_masks(g: &Graph, m: u32) -> Result<Vec<u128>, InvariantError> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(InvariantError::TooLarge(n));
    }
    let d = g.distances();
    Ok((0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| v != u && !d.at_least(u, v, m))
                .fold(0u128, |acc, v| acc | 1 << v)
        })
        .collect())
}

struct MaxIndependent<'a> {
    conflicts: &'a [u128],
    best: usize,
    work: u64,
    limit: u64,
}

impl MaxIndependent<'_> {
    fn run(&mut self, cands: u128, size: usize) -> Result<(), InvariantError> {
        self.work += 1;
        if self.work > self.limit {
            return Err(InvariantError::WorkLimit(self.limit));
        }
        if cands == 0 {
            self.best = self.best.max(size);
            return Ok(());
        }
        if size + cands.count_ones() as usize <= self.best {
            return Ok(());
        }
        let (mut min_v, mut min_d, mut max_v, mut max_d) = (0, usize::MAX, 0, 0);
        for v in bits(cands) {
            let d = (self.conflicts[v] & cands).count_ones() as usize;
            if d < min_d {
                (min_v, min_d) = (v, d);
            }
            if d > max_d {
                (max_v, max_d) = (v, d);
            }
        }
        // A vertex with at most one conflicting candidate belongs to some
        // maximum independent set of the candidates.
        if min_d <= 1 {
            return self.run(cands & !self.conflicts[min_v] & !(1 << min_v), size + 1);
        }
        self.run(cands & !self.conflicts[max_v] & !(1 << max_v), size + 1)?;
        self.run(cands & !(1 << max_v), size)
    }
}

struct MinDegreeSum<'a> {
    conflicts: &'a [u128],
    degree: &'a [u64],
    p: usize,
    chosen: Vec<usize>,
    best: Option<(u64, Vec<usize>)>,
    work: u64,
    limit: u64,
}

impl MinDegreeSum<'_> {
    fn run(&mut self, cands: u128, sum: u64) -> Result<(), InvariantError> {
        self.work += 1;
        if self.work > self.limit {
            return Err(InvariantError::WorkLimit(self.limit));
        }
        let need = self.p - self.chosen.len();
        if need == 0 {
            if self.best.as_ref().is_none_or(|(b, _)| sum < *b) {
                self.best = Some((sum, self.chosen.clone()));
            }
            return Ok(());
        }
        if (cands.count_ones() as usize) < need {
            return Ok(());
        }
        let cheapest: u64 = bits(cands).take(need).map(|i| self.degree[i]).sum();
        if let Some((b, _)) = &self.best {
            if sum + cheapest >= *b {
                return Ok(());
            }
        }
        // Branch on candidates in ascending degree order; each branch forbids
        // the earlier ones so every set is visited once.
        let mut rest = cands;
        for i in bits(cands) {
            rest &= !(1 << i);
            if (rest.count_ones() as usize) + 1 < need {
                break;
            }
            self.chosen.push(i);
            self.run(rest & !self.conflicts[i], sum + self.degree[i])?;
            self.chosen.pop();
            if let Some((b, _)) = &self.best {
                let floor: u64 = bits(rest).take(need).map(|j| self.degree[j]).sum();
                if sum + floor >= *b {
                    break;
                }
            }
        }
        Ok(())
    }
}

/// Lazily enumerates every `p`-set with pairwise distance `>= m`, in
/// lexicographic order of the sorted vertex lists.
pub fn enumerate_distance_sets(g: &Graph, m: u32, p: usize) -> DistanceSets<'_> {
    DistanceSets {
        g,
        m,
        p,
        stack: Vec::with_capacity(p),
        cursor: 0,
        done: false,
    }
}

pub struct DistanceSets<'g> {
    g: &'g Graph,
    m: u32,
    p: usize,
    stack: Vec<usize>,
    cursor: usize,
    done: bool,
}

impl DistanceSets<'_> {
    fn emit(&self) -> DistanceSet {
        DistanceSet {
            vertices: self.stack.clone(),
            m: self.m,
            degree_sum: self.stack.iter().map(|&v| self.g.degree(v) as u64).sum(),
        }
    }
}

impl Iterator for DistanceSets<'_> {
    type Item = DistanceSet;

    fn next(&mut self) -> Option<DistanceSet> {
        let n = self.g.order();
        let d = self.g.distances();
        while !self.done {
            if self.stack.len() == self.p {
                let set = self.emit();
                match self.stack.pop() {
                    Some(last) => self.cursor = last + 1,
                    None => self.done = true,
                }
                return Some(set);
            }
            let need = self.p - self.stack.len();
            let next = (self.cursor..n)
                .take_while(|&v| n - v >= need)
                .find(|&v| self.stack.iter().all(|&s| d.at_least(s, v, self.m)));
            match next {
                Some(v) => {
                    self.stack.push(v);
                    self.cursor = v + 1;
                }
                None => match self.stack.pop() {
                    Some(last) => self.cursor = last + 1,
                    None => self.done = true,
                },
            }
        }
        None
    }
}
