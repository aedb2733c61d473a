use std::collections::BTreeMap;

use combi_core::asymptotics::{parse_eexpr, EExpr};
use combi_core::enumerate::{
    glaisher, glaisher_inv, gray_subsets, random_object, rank_gray, unrank_gray, BinaryWord, CoolLex,
    PartitionConstraints, Partitions,
};
use combi_core::polya::{burnside_count, orbits, stabilizer, standard_group, ActionTable, GroupKind, PermGroup};
use combi_core::spec::parse_spec;
use combi_core::QPoly;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const KINDS: [GroupKind; 4] = [GroupKind::Symmetric, GroupKind::Alternating, GroupKind::Cyclic, GroupKind::Dihedral];

fn kind() -> impl Strategy<Value = GroupKind> {
    prop::sample::select(KINDS.to_vec())
}

/// Orbits by breadth-first search over every group element.
fn explicit_orbits(g: &PermGroup, a: &ActionTable) -> usize {
    let mut seen = vec![false; a.len()];
    let mut count = 0;
    for x in 0..a.len() {
        if seen[x] {
            continue;
        }
        count += 1;
        let mut stack = vec![x];
        seen[x] = true;
        while let Some(y) = stack.pop() {
            for gi in 0..g.order() {
                let z = a.image(gi, y);
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn burnside_equals_explicit_orbit_count(kind in kind(), n in 1usize..=5, q in 1usize..=3) {
        let g = standard_group(kind, n).unwrap();
        let a = ActionTable::on_words(&g, q).unwrap();
        let explicit = explicit_orbits(&g, &a);
        prop_assert_eq!(burnside_count(&g, &a), BigUint::from(explicit));
        prop_assert_eq!(orbits(&g, &a).len(), explicit);
    }

    #[test]
    fn orbit_stabilizer_product(kind in kind(), n in 1usize..=5, q in 1usize..=3) {
        let g = standard_group(kind, n).unwrap();
        let a = ActionTable::on_words(&g, q).unwrap();
        for orbit in orbits(&g, &a) {
            for &x in &orbit {
                prop_assert_eq!(orbit.len() * stabilizer(&g, &a, x).len(), g.order());
            }
        }
    }

    #[test]
    fn gray_rank_unrank_round_trip(bits in prop::collection::vec(any::<bool>(), 1..40)) {
        let w = BinaryWord(bits);
        let r = rank_gray(&w);
        prop_assert_eq!(unrank_gray(w.len(), &r).unwrap(), w.clone());
        let next = unrank_gray(w.len(), &((r + 1u32) % (BigUint::from(1u32) << w.len())));
        prop_assert_eq!(next.unwrap().hamming(&w), 1);
    }

    #[test]
    fn gray_unrank_rank_round_trip(n in 1usize..24, seed in any::<u64>()) {
        let r = BigUint::from(seed) % (BigUint::from(1u32) << n);
        prop_assert_eq!(rank_gray(&unrank_gray(n, &r).unwrap()), r);
    }

    #[test]
    fn glaisher_round_trip(n in 0usize..=20, pick in any::<prop::sample::Index>()) {
        let distinct = Partitions::new(n, PartitionConstraints { distinct: true, ..Default::default() }).list();
        let p = &distinct[pick.index(distinct.len())];
        let o = glaisher(p).unwrap();
        prop_assert!(o.iter().all(|x| x % 2 == 1));
        prop_assert_eq!(o.iter().sum::<usize>(), n);
        prop_assert_eq!(&glaisher_inv(&o).unwrap(), p);
    }

    #[test]
    fn expression_display_parses_back(e in eexpr()) {
        let shown = e.to_string();
        let back = parse_eexpr(&shown).unwrap();
        prop_assert_eq!(back.series(8).unwrap(), e.series(8).unwrap());
    }
}

fn eexpr() -> impl Strategy<Value = EExpr> {
    let leaf = prop_oneof![
        Just(EExpr::Z),
        (1i64..4, 1usize..4).prop_map(|(c, k)| {
            let mut coeffs = vec![0; k + 1];
            coeffs[k] = c;
            EExpr::Poly(QPoly::from_ints(&coeffs))
        }),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| EExpr::plus(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| EExpr::times(a, b)),
            (inner.clone(), 1u32..3).prop_map(|(a, k)| EExpr::pow(a, k)),
            inner.clone().prop_map(EExpr::q),
            inner.clone().prop_map(EExpr::l),
            inner.clone().prop_map(EExpr::e),
            inner.prop_map(EExpr::e1),
        ]
    })
    .prop_filter("valid with a rational series", |e| e.validate().is_ok() && e.series(0).is_ok())
}

#[test]
fn gray_neighbours_differ_in_one_bit() {
    for n in 1..=12 {
        let words: Vec<BinaryWord> = gray_subsets(n);
        assert_eq!(words.len(), 1 << n);
        for w in words.windows(2) {
            assert_eq!(w[0].hamming(&w[1]), 1);
        }
    }
}

/// Number of transpositions turning `a` into `b`, for words of equal weight.
fn transpositions(a: &BinaryWord, b: &BinaryWord) -> usize {
    a.hamming(b) / 2
}

#[test]
fn coollex_is_a_two_transposition_gray_code() {
    for n in 1..=10 {
        for k in 0..=n {
            let words: Vec<BinaryWord> = CoolLex::new(n, k).unwrap().collect();
            let expected = (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
            assert_eq!(words.len(), expected, "n = {n}, k = {k}");
            for w in words.windows(2) {
                assert!(transpositions(&w[0], &w[1]) <= 2, "{} -> {}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn odd_and_distinct_partitions_are_equinumerous() {
    for n in 0..=30 {
        let odd = Partitions::new(n, PartitionConstraints { odd: true, ..Default::default() }).count();
        let distinct = Partitions::new(n, PartitionConstraints { distinct: true, ..Default::default() }).count();
        assert_eq!(odd, distinct, "n = {n}");
    }
}

/// Chi-square goodness of fit against the uniform law at significance 1e-3.
fn assert_uniform<K: Ord>(counts: &BTreeMap<K, usize>, classes: usize, samples: usize, what: &str) {
    assert_eq!(counts.len(), classes, "{what}: not every object was drawn");
    let expected = samples as f64 / classes as f64;
    let stat: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new((classes - 1) as f64).unwrap().inverse_cdf(1.0 - 1e-3);
    assert!(stat < critical, "{what}: chi-square {stat:.1} >= {critical:.1}");
}

#[test]
fn random_objects_are_uniform() {
    let cases = [
        ("T = Prod(Z, Seq(T)), Z = Atom", "T", 6),
        ("labeled, B = Union(Z, Prod(Z, B, B)), Z = Atom", "B", 5),
        ("C = Seq(Seq(Z, card >= 1)), Z = Atom", "C", 6),
        ("labeled, S = Set(Set(Z, card >= 1)), Z = Atom", "S", 4),
        ("labeled, D = Set(Cycle(Z)), Z = Atom", "D", 4),
    ];
    let samples = 10_000;
    for (i, (text, class, n)) in cases.into_iter().enumerate() {
        let spec = parse_spec(text).unwrap();
        let total = combi_core::enumerate::list_objects(&spec, class, n).unwrap().len();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        let mut counts = BTreeMap::new();
        for _ in 0..samples {
            let o = random_object(&spec, class, n, &mut rng).unwrap();
            *counts.entry(o.to_string()).or_insert(0usize) += 1;
        }
        assert_uniform(&counts, total, samples, text);
    }
}

#[test]
fn random_partitions_are_uniform() {
    let samples = 10_000;
    for (n, c) in
        [(8, PartitionConstraints::default()), (12, PartitionConstraints { distinct: true, ..Default::default() })]
    {
        let p = Partitions::new(n, c);
        let total = p.list().len();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut counts = BTreeMap::new();
        for _ in 0..samples {
            *counts.entry(p.random(&mut rng).unwrap()).or_insert(0usize) += 1;
        }
        assert_uniform(&counts, total, samples, "partitions");
    }
}
