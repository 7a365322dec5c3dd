//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use stemtree::extremal::{build_g, build_h, check_identities_g, check_identities_h, ExtremalParamsG, ExtremalParamsH};
use stemtree::harness::{sample_k1t_free, sweep, SamplerConfig, SolverChoice, SweepConfig};
use stemtree::invariants::{alpha_m, sigma_m_p};
use stemtree::search::{
    local_search_solve, validate_certificate, verify_tree, CertificateKind, DEFAULT_MOVE_BUDGET, DEFAULT_TREE_LIMIT,
};
use stemtree::{exact_solve, Graph, Sigma, Status};

/// Seed of the criterion-4 sample.
const SAMPLE_SEED: u64 = 20_240_917;
const SAMPLE_DENSITY: f64 = 0.1;

/// A distance-set certificate kept for the implication check.
struct Emitted {
    graph: Graph,
    l: usize,
    degree_sum: u64,
}

struct Gate {
    failures: usize,
}

impl Gate {
    fn report(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!(
            "{} criterion {id} ({name}): {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
}

fn criterion_1() -> (bool, String) {
    let mut bad = Vec::new();
    let mut count = 0;
    for t in 3..=6 {
        for m in 1..=3 {
            for k in 1..=3 {
                let p = ExtremalParamsG::new(t, k, m).unwrap();
                let r = check_identities_g(p).expect("sigma computable");
                count += 1;
                let n = k + 1 + (k * (t - 2) + 1) * (m + 1);
                let l = k * (t - 2);
                let closed = Sigma::Finite(((k * (t - 2) + 1) * m) as u64);
                let tight = Sigma::Finite((n - l * (t - 1) / (t - 2) - 2) as u64);
                if !r.all_hold() || r.n != n || r.sigma4 != closed || r.sigma4 != tight {
                    bad.push(format!("G({t},{k},{m}) {:?}", r.failed()));
                }
            }
            let p = ExtremalParamsH::new(t, m).unwrap();
            let r = check_identities_h(p).expect("sigma computable");
            count += 1;
            let l = t - 2;
            let n = 1 + (l + 1) * (m + 1);
            let closed = Sigma::Finite(((l + 1) * m) as u64);
            let tight = Sigma::Finite((n - l * (t - 1) / (t - 2) - 1) as u64);
            if !r.all_hold() || r.n != n || r.sigma4 != closed || r.sigma4 != tight {
                bad.push(format!("H({t},{m}) {:?}", r.failed()));
            }
        }
    }
    (bad.is_empty(), format!("{count} instances, mismatches: {bad:?}"))
}

fn criterion_2(emitted: &mut Vec<Emitted>) -> (bool, String) {
    let mut cases: Vec<(String, Graph, usize, usize)> = Vec::new();
    for (t, k, m) in [(3, 2, 1), (3, 2, 2), (4, 1, 1)] {
        let p = ExtremalParamsG::new(t, k, m).unwrap();
        cases.push((format!("G({t},{k},{m})"), build_g(p).graph, t, p.l()));
    }
    for t in [3, 4, 5] {
        let p = ExtremalParamsH::new(t, 1).unwrap();
        cases.push((format!("H({t},1)"), build_h(p).graph, t, p.l()));
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, t, l) in &cases {
        let out = exact_solve(g, *l, DEFAULT_TREE_LIMIT).unwrap();
        ok &= out.status == Status::Exhausted;
        let local = local_search_solve(g, *t, *l, DEFAULT_MOVE_BUDGET).unwrap();
        ok &= !local.is_found();
        if let Some(c) = &local.certificate {
            ok &= validate_certificate(g, *t, *l, c).valid;
            if c.kind == CertificateKind::DistanceSet {
                emitted.push(Emitted {
                    graph: g.clone(),
                    l: *l,
                    degree_sum: c.degree_sum,
                });
            }
        }
        let kind = local.certificate.as_ref().map(|c| format!("{:?}", c.kind));
        parts.push(format!(
            "{name} l={l}: exact {:?} ({} trees), local {:?} {}",
            out.status,
            out.stats.trees_enumerated,
            local.status,
            kind.unwrap_or_default()
        ));
    }
    (ok, parts.join("; "))
}

fn criterion_3() -> (bool, String) {
    let lines: Vec<String> = common::FIXTURE.lines().map(str::to_string).collect();
    let small: Vec<String> = lines
        .iter()
        .filter(|l| stemtree::parse_graph6(l).unwrap().order() <= 7)
        .cloned()
        .collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for (t, l) in [(3, 2), (3, 3), (4, 3), (5, 2)] {
        let mut cfg = SweepConfig::new(t, l, SolverChoice::Exact).unwrap();
        cfg.jobs = 0;
        let start = Instant::now();
        let small_report = sweep(small.iter().cloned(), &cfg);
        let small_secs = start.elapsed().as_secs_f64();
        let r = sweep(lines.iter().cloned(), &cfg);
        ok &= r.counterexamples.is_empty()
            && small_report.counterexamples.is_empty()
            && r.errors.is_empty()
            && r.is_consistent()
            && r.skipped.invariant_limit == 0
            && small_secs < 120.0;
        parts.push(format!(
            "(t={t},l={l}) total {} checked {} found {} counterexamples {} [n<=7: {:.1}s]",
            r.total,
            r.checked,
            r.found,
            r.counterexamples.len(),
            small_secs
        ));
    }
    (ok, parts.join("; "))
}

/// Criteria 4 and 6 share the sampled runs.
fn criteria_4_6(emitted: &mut Vec<Emitted>) -> ((bool, String), (bool, String)) {
    let cfg = SamplerConfig::new(10, 3, SAMPLE_DENSITY, SAMPLE_SEED, 1000).unwrap();
    let graphs: Vec<Graph> = sample_k1t_free(cfg).collect();
    let (mut agree, mut disagree, mut found, mut certified, mut exhausted) = (0, 0, 0, 0, 0);
    let mut unsound = 0;
    let (mut traces_ok, mut longest) = (true, 0);
    let mut first_disagreement = None;
    for (i, g) in graphs.iter().enumerate() {
        let e = exact_solve(g, 2, DEFAULT_TREE_LIMIT).unwrap();
        let lo = local_search_solve(g, 3, 2, DEFAULT_MOVE_BUDGET).unwrap();
        assert_ne!(e.status, Status::Limit, "tree budget too small for sample {i}");
        if e.is_found() == lo.is_found() {
            agree += 1;
        } else {
            disagree += 1;
            first_disagreement.get_or_insert(i);
        }
        for o in [&e, &lo] {
            if let Some(t) = &o.tree {
                found += 1;
                unsound += !verify_tree(g, 2, t).valid as usize;
            }
        }
        match lo.status {
            Status::CertifiedFail => {
                certified += 1;
                let c = lo.certificate.as_ref().unwrap();
                unsound += !validate_certificate(g, 3, 2, c).valid as usize;
                if c.kind == CertificateKind::DistanceSet {
                    emitted.push(Emitted {
                        graph: g.clone(),
                        l: 2,
                        degree_sum: c.degree_sum,
                    });
                }
            }
            Status::Exhausted => exhausted += 1,
            _ => {}
        }
        let trace = &lo.stats.trace;
        let n = g.order();
        traces_ok &= trace.windows(2).all(|w| w[0] < w[1]) && trace.len() <= n * n;
        longest = longest.max(trace.len());
    }
    let c4 = (
        graphs.len() == 1000 && disagree == 0 && unsound == 0,
        format!(
            "{} graphs, agree {agree}, disagree {disagree} (first at {first_disagreement:?}), \
             found trees {found}, certified_fail {certified}, exhausted {exhausted}, unsound {unsound}",
            graphs.len()
        ),
    );
    let c6 = (
        traces_ok,
        format!("{} traces, longest {longest} (n^2 = 100)", graphs.len()),
    );
    (c4, c6)
}

fn criterion_5() -> (bool, String) {
    let graphs = common::fixture(7);
    let mut mismatches = Vec::new();
    for g in &graphs {
        let a = alpha_m(g, 4).unwrap();
        if a != common::brute_alpha(g, 4) {
            mismatches.push(format!("alpha {}", stemtree::encode_graph6(g)));
        }
        for p in 2..=4 {
            let s = sigma_m_p(g, 4, p).unwrap();
            let brute = common::brute_sigma(g, 4, p).map_or(Sigma::Infinite, Sigma::Finite);
            if s != brute {
                mismatches.push(format!("sigma p={p} {}", stemtree::encode_graph6(g)));
            }
        }
    }
    (
        mismatches.is_empty(),
        format!("{} graphs, mismatches: {mismatches:?}", graphs.len()),
    )
}

fn criterion_7(emitted: &[Emitted]) -> (bool, String) {
    let bad = emitted
        .iter()
        .filter(|e| match common::brute_sigma(&e.graph, 4, e.l + 1) {
            Some(s) => s > e.degree_sum,
            None => true,
        })
        .count();
    (
        bad == 0,
        format!("{} distance-set certificates, violations {bad}", emitted.len()),
    )
}

fn main() -> ExitCode {
    let mut gate = Gate { failures: 0 };
    let mut emitted = Vec::new();

    let (p, d) = criterion_1();
    gate.report(1, "extremal identities", p, d);
    let (p, d) = criterion_2(&mut emitted);
    gate.report(2, "sharpness non-existence", p, d);
    let (p, d) = criterion_3();
    gate.report(3, "theorem sweep n<=8", p, d);
    let (c4, c6) = criteria_4_6(&mut emitted);
    gate.report(4, "solver agreement", c4.0, c4.1);
    let (p, d) = criterion_5();
    gate.report(5, "invariant oracle equivalence", p, d);
    gate.report(6, "potential monotonicity", c6.0, c6.1);
    let (p, d) = criterion_7(&emitted);
    gate.report(7, "certificate implication", p, d);

    if gate.failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", gate.failures);
        ExitCode::FAILURE
    }
}
