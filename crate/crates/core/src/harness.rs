//! Batch verification of the theorem over graph streams, and a seeded
//! sampler of connected `K_{1,t}`-free graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{find_induced_star, parse_graph6, Graph};
use crate::invariants::{evaluate_condition_with_limit, DEFAULT_WORK_LIMIT};
use crate::search::{exact_solve, local_search_solve, SearchOutcome, DEFAULT_MOVE_BUDGET, DEFAULT_TREE_LIMIT};

/// Lines processed per parallel batch.
const BATCH: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Exact,
    Local,
    Both,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("t must be at least 3, got {0}")]
    T(usize),
    #[error("l must be at least 1")]
    L,
    #[error("n must be at least 1")]
    N,
    #[error("density must lie in (0, 1], got {0}")]
    Density(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub t: usize,
    pub l: usize,
    pub solver: SolverChoice,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub tree_limit: u64,
    pub move_budget: u64,
    pub invariant_limit: u64,
    pub per_instance: bool,
}

impl SweepConfig {
    pub fn new(t: usize, l: usize, solver: SolverChoice) -> Result<Self, ConfigError> {
        if t < 3 {
            return Err(ConfigError::T(t));
        }
        if l < 1 {
            return Err(ConfigError::L);
        }
        Ok(SweepConfig {
            t,
            l,
            solver,
            jobs: 1,
            tree_limit: DEFAULT_TREE_LIMIT,
            move_budget: DEFAULT_MOVE_BUDGET,
            invariant_limit: DEFAULT_WORK_LIMIT,
            per_instance: false,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SkipCounts {
    pub not_connected: u64,
    pub not_k1t_free: u64,
    pub l_equals_t_minus_2: u64,
    pub hypothesis_fails: u64,
    /// σ⁴ could not be computed within the work limit.
    pub invariant_limit: u64,
}

impl SkipCounts {
    pub fn total(&self) -> u64 {
        self.not_connected + self.not_k1t_free + self.l_equals_t_minus_2 + self.hypothesis_fails + self.invariant_limit
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    /// Zero-based index among graphs read.
    pub index: u64,
    pub graph6: String,
    pub outcome: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    /// One-based input line.
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotConnected,
    NotK1tFree,
    LEqualsTMinus2,
    HypothesisFails,
    InvariantLimit,
    Found,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub index: u64,
    pub graph6: String,
    pub verdict: Verdict,
    /// Exact and local agree on found/not found; set for `both` only.
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepReport {
    pub total: u64,
    pub skipped: SkipCounts,
    pub checked: u64,
    pub found: u64,
    pub counterexamples: Vec<Counterexample>,
    pub errors: Vec<LineError>,
    pub agreements: u64,
    pub disagreements: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_instance: Option<Vec<InstanceRecord>>,
}

struct Processed {
    verdict: Verdict,
    agree: Option<bool>,
    outcome: Option<serde_json::Value>,
}

fn outcome_json(o: &SearchOutcome<'_>) -> serde_json::Value {
    serde_json::to_value(o).expect("outcomes serialize")
}

/// Gates one graph and, if the theorem applies, runs the solvers.
fn process(g: &Graph, cfg: &SweepConfig) -> Processed {
    let skip = |verdict| Processed {
        verdict,
        agree: None,
        outcome: None,
    };
    if !g.is_connected() {
        return skip(Verdict::NotConnected);
    }
    if find_induced_star(g, cfg.t).is_some() {
        return skip(Verdict::NotK1tFree);
    }
    if cfg.l + 2 == cfg.t {
        return skip(Verdict::LEqualsTMinus2);
    }
    match evaluate_condition_with_limit(g, cfg.t, cfg.l, cfg.invariant_limit) {
        Err(_) => return skip(Verdict::InvariantLimit),
        Ok(report) if !report.hypothesis_holds => return skip(Verdict::HypothesisFails),
        Ok(_) => {}
    }

    let exact = || exact_solve(g, cfg.l, cfg.tree_limit).expect("gated graphs are connected");
    let local = || local_search_solve(g, cfg.t, cfg.l, cfg.move_budget).expect("gated graphs are connected");
    let (found, agree, json) = match cfg.solver {
        SolverChoice::Exact => {
            let o = exact();
            (o.is_found(), None, outcome_json(&o))
        }
        SolverChoice::Local => {
            let o = local();
            (o.is_found(), None, outcome_json(&o))
        }
        SolverChoice::Both => {
            let (e, lo) = (exact(), local());
            let json = serde_json::json!({ "exact": outcome_json(&e), "local": outcome_json(&lo) });
            (e.is_found() && lo.is_found(), Some(e.is_found() == lo.is_found()), json)
        }
    };
    Processed {
        verdict: if found { Verdict::Found } else { Verdict::Counterexample },
        agree,
        outcome: (!found).then_some(json),
    }
}

/// Runs the theorem check over graph6 lines. Blank lines and the optional
/// `>>graph6<<` header are ignored; unparsable lines become error records.
pub fn sweep<I>(lines: I, cfg: &SweepConfig) -> SweepReport
where
    I: IntoIterator<Item = String>,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .expect("thread pool");
    let mut report = SweepReport {
        per_instance: cfg.per_instance.then(Vec::new),
        ..SweepReport::default()
    };
    let mut lines = lines.into_iter().enumerate();
    loop {
        let batch: Vec<(u64, String)> = lines
            .by_ref()
            .map(|(i, s)| (i as u64 + 1, s))
            .filter(|(_, s)| {
                let s = s.trim();
                !s.is_empty() && s != ">>graph6<<"
            })
            .take(BATCH)
            .collect();
        if batch.is_empty() {
            break;
        }
        let results: Vec<(u64, String, Result<Processed, String>)> = pool.install(|| {
            batch
                .into_par_iter()
                .map(|(line, text)| {
                    let text = text.trim().to_string();
                    let r = parse_graph6(&text).map(|g| process(&g, cfg)).map_err(|e| e.to_string());
                    (line, text, r)
                })
                .collect()
        });
        for (line, graph6, r) in results {
            match r {
                Err(message) => report.errors.push(LineError { line, message }),
                Ok(p) => report.record(graph6, p),
            }
        }
    }
    report
}

impl SweepReport {
    fn record(&mut self, graph6: String, p: Processed) {
        let index = self.total;
        self.total += 1;
        match p.verdict {
            Verdict::NotConnected => self.skipped.not_connected += 1,
            Verdict::NotK1tFree => self.skipped.not_k1t_free += 1,
            Verdict::LEqualsTMinus2 => self.skipped.l_equals_t_minus_2 += 1,
            Verdict::HypothesisFails => self.skipped.hypothesis_fails += 1,
            Verdict::InvariantLimit => self.skipped.invariant_limit += 1,
            Verdict::Found => {
                self.checked += 1;
                self.found += 1;
            }
            Verdict::Counterexample => {
                self.checked += 1;
                self.counterexamples.push(Counterexample {
                    index,
                    graph6: graph6.clone(),
                    outcome: p.outcome.clone().unwrap_or(serde_json::Value::Null),
                });
            }
        }
        match p.agree {
            Some(true) => self.agreements += 1,
            Some(false) => self.disagreements += 1,
            None => {}
        }
        if let Some(records) = &mut self.per_instance {
            records.push(InstanceRecord {
                index,
                graph6,
                verdict: p.verdict,
                agree: p.agree,
            });
        }
    }

    /// `total = skipped + checked` and `checked = found + counterexamples`.
    pub fn is_consistent(&self) -> bool {
        self.total == self.skipped.total() + self.checked
            && self.checked == self.found + self.counterexamples.len() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub t: usize,
    pub density: f64,
    pub seed: u64,
    pub count: usize,
    /// Star repairs allowed per instance before it is discarded.
    pub repair_cap: usize,
}

impl SamplerConfig {
    pub fn new(n: usize, t: usize, density: f64, seed: u64, count: usize) -> Result<Self, ConfigError> {
        if n < 1 {
            return Err(ConfigError::N);
        }
        if t < 3 {
            return Err(ConfigError::T(t));
        }
        if !(density > 0.0 && density <= 1.0) {
            return Err(ConfigError::Density(density));
        }
        Ok(SamplerConfig {
            n,
            t,
            density,
            seed,
            count,
            repair_cap: n * n,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SamplerStats {
    pub disconnected_rejected: u64,
    pub repairs: u64,
    pub repair_cap_skipped: u64,
}

/// Deterministic stream of connected `K_{1,t}`-free graphs.
pub struct Sampler {
    cfg: SamplerConfig,
    rng: ChaCha8Rng,
    emitted: usize,
    pub stats: SamplerStats,
}

pub fn sample_k1t_free(cfg: SamplerConfig) -> Sampler {
    Sampler {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        cfg,
        emitted: 0,
        stats: SamplerStats::default(),
    }
}

impl Sampler {
    fn connected_gnp(&mut self) -> Vec<(usize, usize)> {
        let n = self.cfg.n;
        loop {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if self.rng.random_bool(self.cfg.density) {
                        edges.push((u, v));
                    }
                }
            }
            if Graph::from_edges(n, edges.iter().copied())
                .expect("in range")
                .is_connected()
            {
                return edges;
            }
            self.stats.disconnected_rejected += 1;
        }
    }

    /// Adds an edge between two leaves of an induced star until none is
    /// left. `None` when the repair cap is hit.
    fn repair(&mut self, mut edges: Vec<(usize, usize)>) -> Option<Graph> {
        for _ in 0..=self.cfg.repair_cap {
            let g = Graph::from_edges(self.cfg.n, edges.iter().copied()).expect("in range");
            let Some(star) = find_induced_star(&g, self.cfg.t) else {
                return Some(g);
            };
            let t = star.leaves.len();
            let i = self.rng.random_range(0..t);
            let j = (i + self.rng.random_range(1..t)) % t;
            let (a, b) = (star.leaves[i], star.leaves[j]);
            edges.push((a.min(b), a.max(b)));
            self.stats.repairs += 1;
        }
        None
    }
}

impl Iterator for Sampler {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.emitted == self.cfg.count {
            return None;
        }
        loop {
            let edges = self.connected_gnp();
            if let Some(g) = self.repair(edges) {
                self.emitted += 1;
                return Some(g);
            }
            self.stats.repair_cap_skipped += 1;
        }
    }
}
