mod oracle;

use std::sync::Arc;

use arborlat::formats::{parse_lg, parse_os, parse_tb, write_lg, write_os, write_tb};
use arborlat::labelled::{
    build_two_vertex_quotient, first_illegal_edge, validate_ball, validate_graph, OrbitStructure, TreeBall,
};
use arborlat::lattices::{build_x, build_xprime, canonical_f120, canonical_f240};
use arborlat::Label;
use proptest::prelude::*;

#[test]
fn fixture_graphs_validate() {
    let (_, os) = canonical_f240();
    for g in [build_x(), build_xprime()] {
        assert!(validate_graph(&g, &os).is_clean());
        let ball = TreeBall::lift(Arc::new(g), 0, 2).unwrap();
        assert_eq!(ball.len(), 1 + 240 + 240 * 239);
        assert!(validate_ball(&ball, &os).is_clean());
        assert!(first_illegal_edge(&ball).is_some());
    }
}

#[test]
fn fixture_graphs_fail_against_wrong_pairing() {
    let (_, os) = canonical_f240();
    let swapped = OrbitStructure::new(240, os.blocks().to_vec(), vec![0, 1, 2, 3]).unwrap();
    assert!(validate_graph(&build_x(), &swapped).has_tau_violation());
}

#[test]
fn hundred_twenty_quotient_is_clean() {
    let (_, os) = canonical_f120();
    let q = build_two_vertex_quotient(&os).unwrap();
    assert_eq!(q.num_vertices(), 2);
    assert!(validate_graph(&q, &os).is_clean());
}

#[test]
fn graph_and_orbit_files_round_trip() {
    let (_, os) = canonical_f240();
    assert_eq!(parse_os(&write_os(&os)).unwrap(), os);
    let text = write_lg(&build_xprime());
    assert_eq!(parse_lg(&text).unwrap(), build_xprime());
}

#[test]
fn lifted_paths_are_reduced() {
    let ball = TreeBall::lift(Arc::new(build_x()), 0, 2).unwrap();
    for v in ball.vertices() {
        let path = ball.path(v);
        assert_eq!(ball.find_path(&path), Some(v));
        assert_eq!(path.len(), ball.depth(v));
    }
}

fn random_os(n: usize, seed: u64) -> OrbitStructure {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<Label> = (0..n).map(Label::from_index).collect();
    labels.shuffle(&mut rng);
    let cut = rng.gen_range(1..=n);
    let (a, b) = labels.split_at(cut);
    if b.is_empty() {
        return OrbitStructure::new(n, vec![a.to_vec()], vec![0]).unwrap();
    }
    let tau = if rng.gen_bool(0.5) { vec![1, 0] } else { vec![0, 1] };
    OrbitStructure::new(n, vec![a.to_vec(), b.to_vec()], tau).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_balls_are_tau_legal(n in 2usize..7, radius in 1usize..4, seed in any::<u64>()) {
        let os = random_os(n, seed);
        let ball = TreeBall::random_tau_legal(&os, radius, seed).unwrap();
        prop_assert!(validate_ball(&ball, &os).is_clean());
        prop_assert_eq!(ball.materialized_radius(), radius);
    }

    #[test]
    fn corruptions_are_reported(n in 3usize..7, seed in any::<u64>()) {
        let os = random_os(n, seed);
        let ball = TreeBall::random_tau_legal(&os, 3, seed).unwrap();
        let (bad, tau_broken) = oracle::corrupt(&ball, &os, seed ^ 1);
        let report = validate_ball(&bad, &os);
        prop_assert!(report.has_duplicate());
        prop_assert_eq!(report.has_tau_violation(), tau_broken);
    }

    #[test]
    fn ball_dumps_round_trip(n in 2usize..6, radius in 1usize..4, seed in any::<u64>()) {
        let os = random_os(n, seed);
        let ball = TreeBall::random_tau_legal(&os, radius, seed).unwrap();
        let text = write_tb(&ball);
        let back = parse_tb(&text).unwrap();
        prop_assert_eq!(write_tb(&back), text);
        prop_assert!(validate_ball(&back, &os).is_clean());
    }
}
