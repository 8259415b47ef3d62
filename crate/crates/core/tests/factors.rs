mod oracle;

use arborlat::lattices::a5_elements;
use arborlat::{factor_multisets_equal, FactorMultiset, PermGroup, Permutation, SimpleFactorId, TieBreak};
use oracle::{random_group, random_normal, Cayley};
use proptest::prelude::*;

fn p(s: &str) -> Permutation {
    Permutation::parse(s).unwrap()
}

fn a5() -> PermGroup {
    PermGroup::new(5, vec![p("2 3 1 4 5"), p("2 3 4 5 1")]).unwrap()
}

/// A5 on points 1..5 beside a 60-cycle on points 6..65.
fn a5_times_c60() -> PermGroup {
    let pad = |f: &Permutation| {
        let mut images: Vec<u32> = f.images().to_vec();
        images.extend(5..65);
        Permutation::from_images(images).unwrap()
    };
    let mut shift: Vec<u32> = (0..5).collect();
    shift.extend((0..60).map(|i| 5 + (i + 1) % 60));
    let gens = vec![pad(&p("2 3 1 4 5")), pad(&p("2 3 4 5 1")), Permutation::from_images(shift).unwrap()];
    PermGroup::new(65, gens).unwrap()
}

fn oracle_factors(g: &PermGroup) -> FactorMultiset {
    Cayley::generated_by(g.generators()).composition_factors()
}

#[test]
fn cyclic_sixty() {
    let f = PermGroup::cyclic(60).composition_factors().unwrap();
    assert_eq!(f.to_string(), "{C_2,C_2,C_3,C_5}");
    assert_eq!(f, oracle_factors(&PermGroup::cyclic(60)));
}

#[test]
fn alternating_five_is_simple() {
    let f = a5().composition_factors().unwrap();
    assert_eq!(f.entries(), &[SimpleFactorId::nonabelian(60)]);
    assert_eq!(f.to_string(), "{A_5}");
    assert_eq!(a5().elements().unwrap(), a5_elements().as_slice());
}

#[test]
fn product_is_disjoint_union() {
    let g = a5_times_c60();
    assert_eq!(g.order().unwrap(), 3600);
    let lib = g.composition_factors().unwrap();
    let expected = a5()
        .composition_factors()
        .unwrap()
        .union(&PermGroup::cyclic(60).composition_factors().unwrap());
    assert_eq!(lib, expected);
    assert_eq!(lib, oracle_factors(&g));
}

#[test]
fn small_named_groups_match_oracle() {
    for g in [
        PermGroup::symmetric(4),
        PermGroup::symmetric(5),
        PermGroup::cyclic(12),
        PermGroup::trivial(3),
        PermGroup::new(4, vec![p("2 1 4 3"), p("3 4 1 2")]).unwrap(),
    ] {
        assert_eq!(g.composition_factors().unwrap(), oracle_factors(&g), "{:?}", g.generators());
    }
}

#[test]
fn multiset_comparison_ignores_order() {
    let a = FactorMultiset::new(vec![SimpleFactorId::cyclic(3), SimpleFactorId::cyclic(2)]);
    let b = FactorMultiset::new(vec![SimpleFactorId::cyclic(2), SimpleFactorId::cyclic(3)]);
    assert!(factor_multisets_equal(&a, &b));
    assert_eq!(a.order(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn factors_match_oracle(seed in any::<u64>()) {
        let g = random_group(seed, 500);
        prop_assert_eq!(g.composition_factors().unwrap(), oracle_factors(&g));
    }

    #[test]
    fn factors_split_over_normal_subgroups(seed in any::<u64>(), kseed in any::<u64>()) {
        let g = random_group(seed, 500);
        let k = random_normal(&g, kseed);
        prop_assert!(g.is_normal_subgroup(&k).unwrap());
        let q = g.quotient(&k).unwrap();
        prop_assert_eq!(q.order().unwrap() * k.order().unwrap(), g.order().unwrap());
        let whole = g.composition_factors().unwrap();
        let split = k.composition_factors().unwrap().union(&q.composition_factors().unwrap());
        prop_assert_eq!(whole.order(), g.order().unwrap());
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn tie_break_does_not_matter(seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let g = random_group(seed, 500);
        let x = g.composition_factors_with(TieBreak::Seeded(a)).unwrap();
        let y = g.composition_factors_with(TieBreak::Seeded(b)).unwrap();
        prop_assert_eq!(&x, &y);
        prop_assert_eq!(x, g.composition_factors_with(TieBreak::Canonical).unwrap());
    }
}
