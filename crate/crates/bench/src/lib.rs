//! Fixed instances shared by the benchmarks.

use stemtree::extremal::{build_g, build_h, ExtremalParamsG, ExtremalParamsH};
use stemtree::harness::{sample_k1t_free, SamplerConfig};
use stemtree::Graph;

pub const FIXTURE: &str = include_str!("../../core/tests/fixtures/connected_n1_to_8.g6");

/// Named extremal graphs with their `(t, l)`.
pub fn extremal() -> Vec<(String, Graph, usize, usize)> {
    let mut out = Vec::new();
    for (t, k, m) in [(3, 2, 1), (3, 2, 2), (4, 2, 2)] {
        let p = ExtremalParamsG::new(t, k, m).expect("valid parameters");
        out.push((format!("G({t},{k},{m})"), build_g(p).graph, t, p.l()));
    }
    for (t, m) in [(4, 1), (5, 2)] {
        let p = ExtremalParamsH::new(t, m).expect("valid parameters");
        out.push((format!("H({t},{m})"), build_h(p).graph, t, p.l()));
    }
    out
}

/// Deterministic claw-free sample.
pub fn claw_free_sample(n: usize, count: usize) -> Vec<Graph> {
    let cfg = SamplerConfig::new(n, 3, 0.1, 1, count).expect("valid sampler config");
    sample_k1t_free(cfg).collect()
}

/// Fixture lines with at most `max_n` vertices.
pub fn fixture_lines(max_n: usize) -> Vec<String> {
    FIXTURE
        .lines()
        .filter(|l| l.as_bytes()[0] as usize - 63 <= max_n)
        .map(str::to_string)
        .collect()
}
