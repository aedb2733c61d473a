#![allow(clippy::needless_range_loop)]

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::*;
use crate::arith::factorial;
use crate::cycle_poly::CyclePoly;
use crate::poly::QPoly;
use crate::polya::{cycle_index_perm, Permutation};

fn env() -> SpeciesEnv {
    SpeciesEnv::new()
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

fn as_bijection(p: &[usize]) -> Vec<(usize, usize)> {
    p.iter().enumerate().map(|(i, &x)| (i + 1, x + 1)).collect()
}

/// `(1/n!) Σ_π fix(F[π]) s^{c(π)}` computed from explicit structures.
fn brute_grade(f: &SpeciesExpr, env: &SpeciesEnv, n: usize) -> CyclePoly {
    let labels: Vec<usize> = (1..=n).collect();
    let structs: Vec<Structure> = structures(f, env, &labels).unwrap().into_iter().map(|(s, _)| s).collect();
    let mut z = CyclePoly::zero();
    for p in all_perms(n) {
        let pi = as_bijection(&p);
        let fix = structs.iter().filter(|s| transport(s, &pi).unwrap() == **s).count();
        if fix > 0 {
            let m = cycle_index_perm(&Permutation::new(p.iter().map(|x| x + 1).collect()).unwrap());
            z.add_term(m, BigRational::from_integer(BigInt::from(fix)));
        }
    }
    z.scale(&BigRational::new(BigInt::one(), BigInt::from(factorial(n))))
}

fn ints(v: &[i64]) -> Vec<QPoly> {
    v.iter().map(|&c| QPoly::from_int(c)).collect()
}

fn weighted_trees() -> (SpeciesEnv, SpeciesExpr) {
    parse_species("T = Singleton + Weight(Singleton, 1) * Compose(Restrict(LinearOrder, 1), T)").unwrap()
}

#[test]
fn empty_set_and_singleton_egfs() {
    assert_eq!(egf(&SpeciesExpr::EmptySet, &env(), 3).unwrap(), ints(&[1, 0, 0, 0]));
    assert_eq!(egf(&SpeciesExpr::Singleton, &env(), 3).unwrap(), ints(&[0, 1, 0, 0]));
    let sum = SpeciesExpr::sum(SpeciesExpr::EmptySet, SpeciesExpr::Singleton);
    assert_eq!(egf(&sum, &env(), 3).unwrap(), ints(&[1, 1, 0, 0]));
    assert_eq!(egf(&SpeciesExpr::LinearOrder, &env(), 5).unwrap(), ints(&[1; 6]));
}

#[test]
fn small_structure_lists() {
    let e = env();
    assert_eq!(structures(&SpeciesExpr::EmptySet, &e, &[]).unwrap().len(), 1);
    assert!(structures(&SpeciesExpr::EmptySet, &e, &[1, 2]).unwrap().is_empty());
    let c1 = SpeciesExpr::Characteristic(1);
    let on1 = structures(&c1, &e, &[1]).unwrap();
    assert_eq!(on1.len(), 1);
    assert_eq!(on1[0].0.to_string(), "{1}");
    assert!(structures(&c1, &e, &[1, 2]).unwrap().is_empty());
    assert_eq!(structures(&SpeciesExpr::LinearOrder, &e, &[1, 2]).unwrap().len(), 2);
    assert!(matches!(
        structures(&SpeciesExpr::Set, &e, &(1..=9).collect::<Vec<_>>()),
        Err(SpeciesError::CapExceeded { n: 9, cap: 8 })
    ));
}

#[test]
fn transport_basics() {
    let s = Structure::Order(vec![1, 2]);
    assert_eq!(transport(&s, &[(1, 2), (2, 1)]).unwrap(), Structure::Order(vec![2, 1]));
    assert_eq!(transport(&s, &[(1, 1), (2, 2)]).unwrap(), s);
    assert_eq!(transport(&s, &[(1, 1)]), Err(SpeciesError::DomainMismatch));
    assert_eq!(transport(&s, &[(1, 1), (2, 1)]), Err(SpeciesError::DomainMismatch));
}

#[test]
fn transport_is_functorial() {
    let e = env();
    for (_, f) in SpeciesExpr::predefined() {
        for n in 0..=4 {
            let labels: Vec<usize> = (1..=n).collect();
            let structs = structures(&f, &e, &labels).unwrap();
            let perms = all_perms(n);
            for (s, _) in &structs {
                assert_eq!(&transport(s, &as_bijection(&perms[0])).unwrap(), s);
                for p in &perms {
                    for t in &perms {
                        // (t ∘ p)(i) = t(p(i))
                        let tp: Vec<usize> = p.iter().map(|&x| t[x]).collect();
                        let lhs = transport(s, &as_bijection(&tp)).unwrap();
                        let rhs = transport(&transport(s, &as_bijection(p)).unwrap(), &as_bijection(t)).unwrap();
                        assert_eq!(lhs, rhs, "{f} on {s}");
                    }
                }
            }
        }
    }
}

#[test]
fn predefined_cycle_index_matches_fix_counting() {
    let e = env();
    for (name, f) in SpeciesExpr::predefined() {
        let z = cycle_index_series(&f, &e, 5).unwrap().unweighted().unwrap();
        for n in 0..=5 {
            assert_eq!(z[n], brute_grade(&f, &e, n), "{name} grade {n}");
        }
    }
}

#[test]
fn compound_cycle_index_matches_fix_counting() {
    let (e, _) = parse_species("B = Singleton + Prod(B, B)").unwrap();
    let cases = [
        "Prod(Set, Cycle)",
        "Compose(Set, Restrict(LinearOrder, 1))",
        "Compose(Cycle, Restrict(Set, 1, 2)) + Char(2)",
        "Compose(Permutation, Prod(Singleton, Set))",
        "B",
    ];
    for text in cases {
        let (_, f) = parse_species(&alloc::format!("B = Singleton + Prod(B, B)\n{text}")).unwrap();
        let z = cycle_index_series(&f, &e, 5).unwrap().unweighted().unwrap();
        for n in 0..=5 {
            assert_eq!(z[n], brute_grade(&f, &e, n), "{text} grade {n}");
        }
    }
}

#[test]
fn set_grade_two() {
    let z = cycle_index_series(&SpeciesExpr::Set, &env(), 2).unwrap();
    assert_eq!(z.grade_strings()[2], "(s1^2 + s2)/2");
    let single = cycle_index_series(&SpeciesExpr::Singleton, &env(), 3).unwrap();
    assert_eq!(single.grade_strings(), vec!["0", "s1", "0", "0"]);
}

#[test]
fn isotype_counts() {
    let partitions = ints(&[1, 1, 2, 3, 5, 7]);
    assert_eq!(isotype_gf(&SpeciesExpr::Permutation, &env(), 5).unwrap(), partitions);
    assert_eq!(isotype_gf(&SpeciesExpr::SetPartition, &env(), 5).unwrap(), partitions);
    assert_eq!(isotype_gf(&SpeciesExpr::LinearOrder, &env(), 5).unwrap(), ints(&[1; 6]));
    assert_eq!(isotype_gf(&SpeciesExpr::Cycle, &env(), 4).unwrap(), ints(&[0, 1, 1, 1, 1]));
}

#[test]
fn weighted_ordered_trees() {
    let (e, t) = weighted_trees();
    let expected = vec![
        QPoly::zero(),
        QPoly::one(),
        QPoly::from_ints(&[0, 1]),
        QPoly::from_ints(&[0, 1, 1]),
        QPoly::from_ints(&[0, 1, 3, 1]),
        QPoly::from_ints(&[0, 1, 6, 6, 1]),
    ];
    assert_eq!(isotype_gf(&t, &e, 5).unwrap(), expected);
    assert_eq!(egf(&t, &e, 5).unwrap(), expected);

    // q = 1 gives the unweighted plane trees
    let (e1, t1) = parse_species("T = Singleton * Compose(LinearOrder, T)").unwrap();
    let plain = cycle_index_series(&t1, &e1, 5).unwrap().unweighted().unwrap();
    let at_one = cycle_index_series(&t, &e, 5).unwrap().specialize(&BigRational::one());
    assert_eq!(at_one, plain);

    let l1 = cycle_index_series(&SpeciesExpr::restrict(SpeciesExpr::LinearOrder, SizeSet::at_least(1)), &e, 3).unwrap();
    assert_eq!(l1.egf(), ints(&[0, 1, 1, 1]));
}

#[test]
fn weights_on_structures() {
    let (e, t) = weighted_trees();
    let mut by_weight = [0usize; 4];
    for (_, w) in structures(&t, &e, &[1, 2, 3]).unwrap() {
        by_weight[w as usize] += 1;
    }
    // n! times the coefficients of q^2 + q
    assert_eq!(by_weight, [0, 6, 6, 0]);
}

#[test]
fn structure_counts_and_orbits_agree_with_series() {
    let (e, _) = parse_species("T = Singleton * Compose(LinearOrder, T)\nB = Singleton + Prod(B, B)").unwrap();
    let mut cases: Vec<SpeciesExpr> = SpeciesExpr::predefined().into_iter().map(|(_, f)| f).collect();
    for text in ["T", "B", "Compose(Set, Restrict(Cycle, 2))", "Prod(LinearOrder, Set) + Char(3)"] {
        cases.push(parse_species(text).map(|(_, f)| f).unwrap_or(SpeciesExpr::implicit(text)));
    }
    for f in &cases {
        let z = cycle_index_series(f, &e, 5).unwrap();
        let egf = z.egf();
        let iso = z.isotypes();
        for n in 0..=5 {
            let labels: Vec<usize> = (1..=n).collect();
            let structs: Vec<Structure> = structures(f, &e, &labels).unwrap().into_iter().map(|(s, _)| s).collect();
            let expected = egf[n].coeff(0) * BigRational::from_integer(BigInt::from(factorial(n)));
            assert_eq!(BigRational::from_integer(BigInt::from(structs.len())), expected, "{f} size {n}");
            let mut seen = BTreeSet::new();
            let mut orbits = 0usize;
            for s in &structs {
                if seen.contains(s) {
                    continue;
                }
                orbits += 1;
                for p in all_perms(n) {
                    seen.insert(transport(s, &as_bijection(&p)).unwrap());
                }
            }
            assert_eq!(BigRational::from_integer(BigInt::from(orbits)), iso[n].coeff(0), "{f} size {n}");
        }
    }
}

#[test]
fn rejects_bad_definitions() {
    assert!(matches!(parse_species("T = T"), Err(SpeciesError::NonProductive(_))));
    assert!(matches!(parse_species("T = Set * T"), Err(SpeciesError::NonProductive(_))));
    assert!(matches!(parse_species("Compose(Set, Set)"), Err(SpeciesError::Composition(_))));
    assert!(matches!(parse_species("Compose(Set, U)"), Err(SpeciesError::Undefined(_))));
    assert!(matches!(parse_species("T = Singleton\nT = Set"), Err(SpeciesError::Duplicate(_))));
    assert!(matches!(parse_species("Set +"), Err(SpeciesError::Syntax { .. })));
    assert!(matches!(parse_species("Set = Singleton"), Err(SpeciesError::Syntax { .. })));
    let mut e = env();
    assert!(e.define("T", SpeciesExpr::implicit("T")).is_err());
    assert!(e.get("T").is_none());
    e.define(
        "T",
        SpeciesExpr::sum(
            SpeciesExpr::Singleton,
            SpeciesExpr::product(SpeciesExpr::implicit("T"), SpeciesExpr::implicit("T")),
        ),
    )
    .unwrap();
    assert_eq!(egf(&SpeciesExpr::implicit("T"), &e, 4).unwrap()[4], QPoly::from_int(5));
}

#[test]
fn parser_forms() {
    let (_, a) = parse_species("L(X * E)").unwrap();
    let (_, b) = parse_species("Compose(LinearOrder, Prod(Singleton, Set))").unwrap();
    assert_eq!(a, b);
    let (_, c) = parse_species("Restrict(Set, 2, 3) # sets of size 2 or 3").unwrap();
    assert_eq!(egf(&c, &env(), 4).unwrap()[3], QPoly::constant(BigRational::new(1.into(), 6.into())));
    let (e, d) = parse_species("T = X + X * Par(\n  T\n)").unwrap();
    assert_eq!(d, SpeciesExpr::implicit("T"));
    assert!(e.get("T").is_some());
    assert!(!egf(&d, &e, 3).unwrap()[3].is_zero());
}

#[test]
fn series_zero_grade_cap() {
    let z = cycle_index_series(&SpeciesExpr::Set, &env(), 0).unwrap();
    assert_eq!(z.n_max(), 0);
    assert!(z.grade(0).coeff(&crate::cycle_poly::Monomial::one()).coeff(0).is_one());
}
