//! The two sharpness families.
//!
//! `G(t, k, m)`, with `l = k(t-2)`: a complete hub on `u_1..u_{k+1}`, cliques
//! `D_1..D_{l+1}` of size `m`, `u_i` (`i <= k`) joined to the `t-2` cliques
//! `D_{(i-1)(t-2)+1..i(t-2)}`, `u_{k+1}` joined to `D_{l+1}`, and a pendant
//! `v_j` joined to all of `D_j`. It is `K_{1,t}`-free, falls one short of the
//! degree-sum condition, and has no spanning tree with `l`-ended stem.
//!
//! `H(t, m)`, with `l = t-2`: a center `w` joined to all of `D_1..D_{l+1}`
//! and pendants `v_i` on `D_i`. It meets the condition, which shows the
//! exclusion `l != t-2` is needed.
//!
//! Numbering: hub vertices first, then `D_1`, `v_1`, `D_2`, `v_2`, and so on.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{find_induced_star, Graph};
use crate::invariants::{sigma_m_p, stem_size_bound, InvariantError, Sigma};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("t must be at least 3, got {0}")]
    T(usize),
    #[error("k must be at least 1")]
    K,
    #[error("m must be at least 1")]
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalParamsG {
    pub t: usize,
    pub k: usize,
    pub m: usize,
}

impl ExtremalParamsG {
    pub fn new(t: usize, k: usize, m: usize) -> Result<Self, ParamError> {
        if t < 3 {
            return Err(ParamError::T(t));
        }
        if k < 1 {
            return Err(ParamError::K);
        }
        if m < 1 {
            return Err(ParamError::M);
        }
        Ok(ExtremalParamsG { t, k, m })
    }

    pub fn l(&self) -> usize {
        self.k * (self.t - 2)
    }

    /// `k + 1 + (k(t-2)+1)(m+1)`.
    pub fn order(&self) -> usize {
        self.k + 1 + (self.l() + 1) * (self.m + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalParamsH {
    pub t: usize,
    pub m: usize,
}

impl ExtremalParamsH {
    pub fn new(t: usize, m: usize) -> Result<Self, ParamError> {
        if t < 3 {
            return Err(ParamError::T(t));
        }
        if m < 1 {
            return Err(ParamError::M);
        }
        Ok(ExtremalParamsH { t, m })
    }

    pub fn l(&self) -> usize {
        self.t - 2
    }

    /// `1 + (l+1)(m+1)`.
    pub fn order(&self) -> usize {
        1 + (self.l() + 1) * (self.m + 1)
    }
}

/// Roles of the constructed vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling {
    /// `u_1..u_{k+1}` for `G`, `[w]` for `H`.
    pub hub: Vec<usize>,
    pub cliques: Vec<Vec<usize>>,
    pub pendants: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Extremal {
    pub graph: Graph,
    pub labeling: Labeling,
}

/// Appends `D_1, v_1, D_2, v_2, ...` after `first` vertices, joining each
/// `v_j` to its clique.
fn pendant_cliques(
    first: usize,
    count: usize,
    m: usize,
    edges: &mut Vec<(usize, usize)>,
) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut cliques = Vec::with_capacity(count);
    let mut pendants = Vec::with_capacity(count);
    let mut next = first;
    for _ in 0..count {
        let d: Vec<usize> = (next..next + m).collect();
        let v = next + m;
        next += m + 1;
        for (i, &a) in d.iter().enumerate() {
            edges.extend(d[i + 1..].iter().map(|&b| (a, b)));
            edges.push((a, v));
        }
        cliques.push(d);
        pendants.push(v);
    }
    (cliques, pendants)
}

pub fn build_g(p: ExtremalParamsG) -> Extremal {
    let ExtremalParamsG { t, k, m } = p;
    let hub: Vec<usize> = (0..=k).collect();
    let mut edges = Vec::new();
    for (i, &a) in hub.iter().enumerate() {
        edges.extend(hub[i + 1..].iter().map(|&b| (a, b)));
    }
    let (cliques, pendants) = pendant_cliques(k + 1, p.l() + 1, m, &mut edges);
    for (i, &u) in hub.iter().enumerate() {
        let owned = if i < k {
            i * (t - 2)..(i + 1) * (t - 2)
        } else {
            p.l()..p.l() + 1
        };
        for d in &cliques[owned] {
            edges.extend(d.iter().map(|&x| (u, x)));
        }
    }
    let graph = Graph::from_edges(p.order(), edges).expect("construction stays in range");
    Extremal {
        graph,
        labeling: Labeling { hub, cliques, pendants },
    }
}

pub fn build_h(p: ExtremalParamsH) -> Extremal {
    let mut edges = Vec::new();
    let (cliques, pendants) = pendant_cliques(1, p.l() + 1, p.m, &mut edges);
    for d in &cliques {
        edges.extend(d.iter().map(|&x| (0, x)));
    }
    let graph = Graph::from_edges(p.order(), edges).expect("construction stays in range");
    Extremal {
        graph,
        labeling: Labeling {
            hub: vec![0],
            cliques,
            pendants,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub expected: i64,
    pub actual: i64,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub family: &'static str,
    pub t: usize,
    pub k: Option<usize>,
    pub m: usize,
    pub l: usize,
    pub n: usize,
    pub sigma4: Sigma,
    /// False for `G` with `k = 1`: the graph is well formed but sharpness is
    /// only claimed for `k >= 2`.
    pub in_sharpness_range: bool,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(IdentityCheck::holds)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.holds()).map(|c| c.name).collect()
    }
}

fn flag(name: &'static str, value: bool) -> IdentityCheck {
    IdentityCheck {
        name,
        expected: 1,
        actual: value as i64,
    }
}

fn eq(name: &'static str, expected: usize, actual: i64) -> IdentityCheck {
    IdentityCheck {
        name,
        expected: expected as i64,
        actual,
    }
}

/// Structural checks shared by both families.
fn common_checks(e: &Extremal, t: usize, l: usize, sigma: Sigma, checks: &mut Vec<IdentityCheck>) {
    let g = &e.graph;
    let sigma_value = sigma.finite().map_or(-1, |s| s as i64);
    let pendants = &e.labeling.pendants;
    let spread = pendants
        .iter()
        .enumerate()
        .all(|(i, &a)| pendants[i + 1..].iter().all(|&b| g.distances().at_least(a, b, 4)));
    let pendant_sum: usize = pendants.iter().map(|&v| g.degree(v)).sum();
    checks.push(flag("pendants-pairwise-distance-4", spread && pendants.len() == l + 1));
    checks.push(eq("sigma-attained-at-pendants", pendant_sum, sigma_value));
    checks.push(flag("k1t-free", find_induced_star(g, t).is_none()));
    checks.push(flag("connected", g.is_connected()));
}

pub fn check_identities_g(p: ExtremalParamsG) -> Result<IdentityReport, InvariantError> {
    let ExtremalParamsG { t, k, m } = p;
    let l = p.l();
    let e = build_g(p);
    let g = &e.graph;
    let n = g.order();
    let sigma = sigma_m_p(g, 4, l + 1)?;
    let s = sigma.finite().map_or(-1, |s| s as i64);
    let mut checks = vec![
        eq("order", k + 1 + (l + 1) * (m + 1), n as i64),
        eq("sigma = (k(t-2)+1)m", (l + 1) * m, s),
        eq("sigma = n - floor(l(t-1)/(t-2)) - 2", n - stem_size_bound(t, l) - 2, s),
    ];
    common_checks(&e, t, l, sigma, &mut checks);
    let hub_ok = e.labeling.hub[..k].iter().all(|&u| g.degree(u) == k + m * (t - 2));
    let pendant_ok = e.labeling.pendants.iter().all(|&v| g.degree(v) == m);
    checks.push(flag("labeling-degrees", hub_ok && pendant_ok));
    Ok(IdentityReport {
        family: "G",
        t,
        k: Some(k),
        m,
        l,
        n,
        sigma4: sigma,
        in_sharpness_range: k >= 2,
        checks,
    })
}

pub fn check_identities_h(p: ExtremalParamsH) -> Result<IdentityReport, InvariantError> {
    let ExtremalParamsH { t, m } = p;
    let l = p.l();
    let e = build_h(p);
    let g = &e.graph;
    let n = g.order();
    let sigma = sigma_m_p(g, 4, l + 1)?;
    let s = sigma.finite().map_or(-1, |s| s as i64);
    let mut checks = vec![
        eq("order", 1 + (l + 1) * (m + 1), n as i64),
        eq("sigma = (l+1)m", (l + 1) * m, s),
        eq("sigma = n - floor(l(t-1)/(t-2)) - 1", n - stem_size_bound(t, l) - 1, s),
    ];
    common_checks(&e, t, l, sigma, &mut checks);
    let center_ok = g.degree(0) == (l + 1) * m;
    let pendant_ok = e.labeling.pendants.iter().all(|&v| g.degree(v) == m);
    checks.push(flag("labeling-degrees", center_ok && pendant_ok));
    Ok(IdentityReport {
        family: "H",
        t,
        k: None,
        m,
        l,
        n,
        sigma4: sigma,
        in_sharpness_range: true,
        checks,
    })
}
