//! The exact solver against brute-force subset enumeration, and the
//! theorem property for the local search, over the shipped graph stream.

mod common;

use stemtree::harness::{sweep, SolverChoice, SweepConfig};
use stemtree::search::{verify_tree, DEFAULT_TREE_LIMIT};
use stemtree::{encode_graph6, exact_solve, Status};

#[test]
fn exact_matches_brute_force_up_to_7() {
    for g in common::fixture(7) {
        for l in 1..=3 {
            let out = exact_solve(&g, l, DEFAULT_TREE_LIMIT).unwrap();
            assert_ne!(out.status, Status::Limit);
            assert_eq!(
                out.is_found(),
                common::brute_has_l_ended_tree(&g, l),
                "{} l={l}",
                encode_graph6(&g)
            );
            if let Some(t) = &out.tree {
                assert!(verify_tree(&g, l, t).valid);
                let edges: Vec<(usize, usize)> = t.edges().iter().map(|e| e.ends()).collect();
                assert!(common::stem_leaves(g.order(), &edges) <= l);
            }
        }
    }
}

#[test]
fn exact_matches_brute_force_sample_of_8() {
    let eights: Vec<_> = common::fixture(8).into_iter().filter(|g| g.order() == 8).collect();
    assert_eq!(eights.len(), 11117);
    for g in eights.iter().step_by(37) {
        for l in [1, 2] {
            let out = exact_solve(g, l, DEFAULT_TREE_LIMIT).unwrap();
            assert_eq!(
                out.is_found(),
                common::brute_has_l_ended_tree(g, l),
                "{}",
                encode_graph6(g)
            );
        }
    }
}

#[test]
fn local_search_complete_under_hypothesis() {
    let lines: Vec<String> = common::FIXTURE.lines().map(str::to_string).collect();
    for (t, l) in [(3, 2), (4, 3), (5, 2)] {
        let mut cfg = SweepConfig::new(t, l, SolverChoice::Both).unwrap();
        cfg.jobs = 0;
        let r = sweep(lines.iter().cloned(), &cfg);
        assert!(r.is_consistent());
        assert!(r.checked > 0);
        assert!(
            r.counterexamples.is_empty(),
            "(t={t},l={l}) {:?}",
            r.counterexamples.first()
        );
        assert_eq!(r.disagreements, 0);
    }
}

#[test]
fn fixture_counts_match_known_sequence() {
    let mut counts = [0usize; 9];
    for g in common::fixture(8) {
        assert!(g.is_connected());
        counts[g.order()] += 1;
    }
    assert_eq!(counts[1..], [1, 1, 2, 6, 21, 112, 853, 11117]);
}
