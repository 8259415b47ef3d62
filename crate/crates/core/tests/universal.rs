mod oracle;

use std::sync::Arc;

use arborlat::labelled::{LabelledGraph, TreeBall};
use arborlat::lattices::{build_x, canonical_f240};
use arborlat::universal::{
    enumerate_ball_stabilizer, extend, is_member, predicted_stabilizer_count, random_member, recover_family,
    sigma_realized, transitivity_move,
};
use arborlat::{Label, PermGroup, Permutation};
use num_bigint::BigUint;
use proptest::prelude::*;

fn toy(radius: usize) -> TreeBall {
    let mut g = LabelledGraph::new();
    let a = g.add_vertex("a");
    let b = g.add_vertex("b");
    for i in 1..=3 {
        g.add_edge(format!("e{i}"), a, b, Label::new(i), Label::new(i));
    }
    TreeBall::lift(Arc::new(g), 0, radius).unwrap()
}

fn c3() -> PermGroup {
    PermGroup::new(3, vec![Permutation::parse("2 3 1").unwrap()]).unwrap()
}

#[test]
fn stabilizer_matches_closed_form_and_brute_force() {
    let ball = toy(2);
    let autos = oracle::ball_automorphisms(&ball);
    assert_eq!(autos.len(), 48);
    for (group, expected) in [(PermGroup::symmetric(3), 48u32), (c3(), 3), (PermGroup::trivial(3), 1)] {
        let brute = autos
            .iter()
            .filter(|g| is_member(g, &group, &ball, &ball).unwrap().is_member())
            .count();
        let found = enumerate_ball_stabilizer(&ball, ball.root(), &group, 2, 1000).unwrap();
        assert_eq!(brute, expected as usize);
        assert_eq!(found.len(), brute);
        assert_eq!(predicted_stabilizer_count(&ball, ball.root(), &group, 2).unwrap(), BigUint::from(expected));
        for g in &found {
            assert!(autos.contains(g));
        }
    }
}

#[test]
fn stabilizer_respects_cap() {
    let ball = toy(3);
    assert!(enumerate_ball_stabilizer(&ball, ball.root(), &PermGroup::symmetric(3), 3, 100).is_err());
}

#[test]
fn every_local_permutation_is_realized() {
    let ball = toy(2);
    assert_eq!(sigma_realized(&ball, ball.root(), &PermGroup::symmetric(3)).unwrap(), 6);
}

#[test]
fn canonical_labelling_realizes_all_of_f() {
    let (f, _) = canonical_f240();
    let ball = TreeBall::lift(Arc::new(build_x()), 0, 2).unwrap();
    let sample: Vec<_> = f.elements().unwrap().iter().step_by(97).cloned().collect();
    for s in sample {
        let ext = extend(&ball, ball.root(), &ball, ball.root(), &s, &f, 1).unwrap();
        assert_eq!(ext.family.get(ball.root()), Some(&s));
        ext.verify(&ball, &ball).unwrap();
    }
}

#[test]
fn transitivity_reaches_neighbors() {
    let ball = toy(4);
    let target = ball.find_path_str("/2/1").unwrap();
    let ext = transitivity_move(&ball, ball.root(), target, &PermGroup::symmetric(3), 1).unwrap();
    assert_eq!(ext.map.get(ball.root()), Some(target));
}

#[test]
fn non_members_are_rejected() {
    let ball = toy(2);
    let autos = oracle::ball_automorphisms(&ball);
    let outside = autos
        .iter()
        .find(|g| !is_member(g, &c3(), &ball, &ball).unwrap().is_member())
        .unwrap();
    let m = is_member(outside, &c3(), &ball, &ball).unwrap();
    assert!(m.violation.is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn extension_intertwines_labellings(n in 2usize..7, radius in 1usize..4, seed in any::<u64>()) {
        let (group, os) = oracle::random_local_setting(n, seed);
        let dom = TreeBall::random_tau_legal(&os, radius + 1, seed).unwrap();
        let cod = TreeBall::random_tau_legal(&os, radius + 1, seed.wrapping_add(1)).unwrap();
        let elems = group.elements().unwrap();
        let f0 = &elems[(seed % elems.len() as u64) as usize];
        let ext = extend(&dom, dom.root(), &cod, cod.root(), f0, &group, radius).unwrap();
        prop_assert!(ext.verify(&dom, &cod).is_ok());
        prop_assert_eq!(ext.map.get(dom.root()), Some(cod.root()));
        prop_assert_eq!(ext.family.get(dom.root()), Some(f0));
        prop_assert!(ext.family.lies_in(&group).unwrap());
        prop_assert!(is_member(&ext.map, &group, &dom, &cod).unwrap().is_member());
        let recovered = recover_family(&ext.map, &dom, &cod).unwrap();
        for (x, f) in recovered.iter() {
            prop_assert_eq!(ext.family.get(x), Some(f));
        }
    }

    #[test]
    fn random_members_are_members(seed in any::<u64>()) {
        let ball = toy(4);
        let g = random_member(&ball, ball.root(), &PermGroup::symmetric(3), 3, seed).unwrap();
        prop_assert!(is_member(&g.map, &PermGroup::symmetric(3), &ball, &ball).unwrap().is_member());
    }
}
