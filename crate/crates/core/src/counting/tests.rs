#![allow(clippy::needless_range_loop)]

use super::*;
use crate::arith::{factorial, rational};
use crate::spec::parse_spec;
use alloc::string::ToString;

fn counts(text: &str, class: &str, n: usize) -> Vec<i64> {
    let spec = parse_spec(text).unwrap();
    let t = count_table(&spec, n).unwrap();
    t.get(class).unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect()
}

#[test]
fn plane_trees_are_catalan() {
    assert_eq!(counts("T = Prod(Z, Seq(T)), Z = Atom", "T", 6), [0, 1, 1, 2, 5, 14, 42]);
}

#[test]
fn labeled_binary_trees() {
    let c = counts("labeled, B = Union(Z, Prod(Z, B, B)), Z = Atom", "B", 5);
    assert_eq!(c, [0, 1, 0, 6, 0, 240]);
}

#[test]
fn labeled_sequences_are_factorials() {
    let c = counts("labeled, L = Seq(Z), Z = Atom", "L", 8);
    let f: Vec<i64> = (0..=8).map(|n| i64::try_from(&BigInt::from(factorial(n))).unwrap()).collect();
    assert_eq!(c, f);
}

#[test]
fn labeled_sets_cycles_and_substitution() {
    assert_eq!(counts("labeled, D = Set(Cycle(Z)), Z = Atom", "D", 6), [1, 1, 2, 6, 24, 120, 720]);
    assert_eq!(counts("labeled, C = Cycle(Z), Z = Atom", "C", 6), [0, 1, 1, 2, 6, 24, 120]);
    assert_eq!(counts("labeled, S = Set(Set(Z, card >= 1)), Z = Atom", "S", 6), [1, 1, 2, 5, 15, 52, 203]);
    assert_eq!(
        counts("labeled, F = Subst(Seq(Z, card >= 1), Set(Z, card >= 1)), Z = Atom", "F", 5),
        [0, 1, 3, 13, 75, 541]
    );
    assert_eq!(counts("labeled, F = Seq(Set(Z, card >= 1)), Z = Atom", "F", 5), [1, 1, 3, 13, 75, 541]);
    assert_eq!(counts("labeled, F = Seq(Cycle(Z, card >= 2)), Z = Atom", "F", 5), [1, 0, 1, 2, 12, 64]);
    // involutions: sets of cycles of length 1 or 2
    assert_eq!(counts("labeled, I = Set(Cycle(Z, card <= 2)), Z = Atom", "I", 7), [1, 1, 2, 4, 10, 26, 76, 232]);
    // derangements
    assert_eq!(counts("labeled, D = Set(Cycle(Z, card >= 2)), Z = Atom", "D", 6), [1, 0, 1, 2, 9, 44, 265]);
    // set partitions into exactly two blocks: 2^{n-1} - 1
    assert_eq!(counts("labeled, P = Set(Set(Z, card >= 1), card = 2), Z = Atom", "P", 6), [0, 0, 1, 3, 7, 15, 31]);
}

#[test]
fn unlabeled_polya_constructions() {
    // rooted unlabeled trees
    assert_eq!(counts("T = Prod(Z, MultiSet(T)), Z = Atom", "T", 9), [0, 1, 1, 2, 4, 9, 20, 48, 115, 286]);
    assert_eq!(counts("P = MultiSet(Seq(Z, card >= 1)), Z = Atom", "P", 8), [1, 1, 2, 3, 5, 7, 11, 15, 22]);
    assert_eq!(counts("Q = PowerSet(Seq(Z, card >= 1)), Z = Atom", "Q", 8), [1, 1, 1, 2, 2, 3, 4, 5, 6]);
    // binary necklaces
    assert_eq!(counts("N = Cycle(Union(A, B)), A = Atom, B = Atom", "N", 8), [0, 2, 3, 4, 6, 8, 14, 20, 36]);
    // series-reduced rooted trees by leaves
    assert_eq!(counts("S = Union(Z, MultiSet(S, card >= 2)), Z = Atom", "S", 7), [0, 1, 1, 2, 5, 12, 33, 90]);
    // partitions into exactly 3 parts and into at most 2 parts
    assert_eq!(counts("P = MultiSet(Seq(Z, card >= 1), card = 3), Z = Atom", "P", 8), [0, 0, 0, 1, 1, 2, 3, 4, 5]);
    assert_eq!(counts("P = MultiSet(Seq(Z, card >= 1), card <= 2), Z = Atom", "P", 6), [1, 1, 2, 2, 3, 3, 4]);
    // unlabeled Set means MultiSet
    assert_eq!(counts("P = Set(Seq(Z, card >= 1)), Z = Atom", "P", 6), [1, 1, 2, 3, 5, 7, 11]);
    // binary necklaces of exactly 4 beads, by length
    assert_eq!(counts("N = Cycle(Union(A, B), card = 4), A = Atom, B = Atom", "N", 4), [0, 0, 0, 0, 6]);
    assert_eq!(counts("N = Cycle(Union(A, B), card >= 3), A = Atom, B = Atom", "N", 5), [0, 0, 0, 4, 6, 8]);
}

#[test]
fn sequence_restrictions() {
    assert_eq!(counts("C = Seq(Z, card <= 2), Z = Atom", "C", 4), [1, 1, 1, 0, 0]);
    assert_eq!(counts("C = Seq(Seq(Z, card >= 1), card = 2), Z = Atom", "C", 5), [0, 0, 1, 2, 3, 4]);
    assert_eq!(counts("C = Seq(Seq(Z, card >= 1), card >= 2), Z = Atom", "C", 5), [0, 0, 1, 3, 7, 15]);
}

#[test]
fn rejects_ill_defined() {
    let spec = parse_spec("A = Prod(Z, A), Z = Atom").unwrap();
    assert!(matches!(count_table(&spec, 5), Err(CountError::NotWellDefined(_))));
}

#[test]
fn bivariate_compositions() {
    let spec = parse_spec("C = Seq(Prod(Marker, Seq(Z, card >= 1))), Z = Atom").unwrap();
    let t = count_bivariate(&spec, 6, 6).unwrap();
    let rows = t.get("C").unwrap();
    assert_eq!(rows[4][2], BigInt::from(3));
    assert_eq!(rows[0][0], BigInt::from(1));
    assert_eq!(mean_marker(rows, 4).unwrap(), rational(5, 2));
    assert_eq!(mean_marker(rows, 1).unwrap(), rational(1, 1));
    let plain = count_table(&spec, 6).unwrap();
    for n in 0..=6 {
        let sum: BigInt = rows[n].iter().sum();
        assert_eq!(sum, plain.get("C").unwrap()[n]);
    }
}

#[test]
fn bivariate_labeled_internal_nodes() {
    let spec = parse_spec("labeled, B = Union(Z, Prod(Marker, Z, B, B)), Z = Atom").unwrap();
    let t = count_bivariate(&spec, 5, 3).unwrap();
    let rows = t.get("B").unwrap();
    assert_eq!(rows[3][1], BigInt::from(6));
    assert_eq!(rows[5][2], BigInt::from(240));
}

#[test]
fn mean_without_marker_is_zero() {
    let spec = parse_spec("T = Prod(Z, Seq(T)), Z = Atom").unwrap();
    let t = count_bivariate(&spec, 5, 2).unwrap();
    assert_eq!(t.marker, None);
    assert_eq!(mean_marker(t.get("T").unwrap(), 5).unwrap(), rational(0, 1));
    assert!(matches!(mean_marker(t.get("T").unwrap(), 0), Err(CountError::NoObjects(0))));
}

#[test]
fn bivariate_unlabeled_polya_marks_parts() {
    // partitions with parts marked: a(n, k) = partitions of n into k parts
    let spec = parse_spec("P = MultiSet(Prod(Marker, Seq(Z, card >= 1))), Z = Atom").unwrap();
    let t = count_bivariate(&spec, 8, 8).unwrap();
    let rows = t.get("P").unwrap();
    assert_eq!(rows[8][3], BigInt::from(5));
    assert_eq!(rows[6][2], BigInt::from(3));
    // necklaces with one colour marked
    let spec = parse_spec("N = Cycle(Union(A, B)), A = Prod(Marker, Z), B = Z, Z = Atom").unwrap();
    let rows = count_bivariate(&spec, 6, 6).unwrap().get("N").unwrap().to_vec();
    let expect = [1, 1, 3, 4, 3, 1, 1];
    for (k, &e) in expect.iter().enumerate() {
        assert_eq!(rows[6][k], BigInt::from(e), "k = {k}");
    }
}

#[test]
fn gf_equations_print() {
    let spec = parse_spec("T = Prod(Z, Seq(T)), Z = Atom").unwrap();
    let eqs = gf_equations(&spec).unwrap();
    assert_eq!(eqs[0].to_operator_string(), "T(z) = z*Q(T(z))");
    assert_eq!(eqs[0].to_ascii_string(), "T(z) = z/(1-T(z))");
    assert_eq!(eqs[1].to_operator_string(), "Z(z) = z");

    let spec = parse_spec("labeled, B = Union(Z, Prod(Z, B, B)), Z = Atom").unwrap();
    assert_eq!(gf_equations(&spec).unwrap()[0].to_operator_string(), "B(z) = z + z*B(z)^2");

    let spec = parse_spec("labeled, D = Set(Cycle(Z)), Z = Atom").unwrap();
    let eq = &gf_equations(&spec).unwrap()[0];
    assert_eq!(eq.to_operator_string(), "D(z) = E(L(z))");
    assert_eq!(eq.to_ascii_string(), "D(z) = exp(log(1/(1-z)))");

    let spec = parse_spec("S = Seq(Z, card >= 2), Z = Atom").unwrap();
    assert_eq!(gf_equations(&spec).unwrap()[0].to_operator_string(), "S(z) = z^2*Q(z)");

    let spec = parse_spec("P = MultiSet(Seq(Z, card >= 1), card >= 2), Z = Atom").unwrap();
    assert_eq!(gf_equations(&spec).unwrap()[0].to_operator_string(), "P(z) = MSet[card >= 2](z*Q(z))");
}

#[test]
fn acyclic_solutions() {
    let spec = parse_spec("labeled, L = Seq(Z), Z = Atom").unwrap();
    let sol = gf_solve_acyclic(&spec).unwrap();
    assert_eq!(sol[0].1, Solved::Explicit(GfExpr::q(GfExpr::Z)));

    let spec = parse_spec("T = Prod(Z, Seq(T)), Z = Atom").unwrap();
    let sol = gf_solve_acyclic(&spec).unwrap();
    assert_eq!(sol[0].1, Solved::NotExplicit);
    assert_eq!(sol[1].1, Solved::Explicit(GfExpr::Z));

    let spec = parse_spec("labeled, D = Set(C), C = Cycle(Z), Z = Atom").unwrap();
    let sol = gf_solve_acyclic(&spec).unwrap();
    let Solved::Explicit(e) = &sol[0].1 else { panic!() };
    assert_eq!(e.to_string(), "E(L(z))");
    let c = series_coeffs(e, 20).unwrap();
    assert!(c.iter().all(|x| *x == rational(1, 1)));
}

#[test]
fn series_basics() {
    let q = series_coeffs(&GfExpr::q(GfExpr::Z), 5).unwrap();
    assert!(q.iter().all(|x| *x == rational(1, 1)));
    let e = series_coeffs(&GfExpr::exp(GfExpr::Z), 6).unwrap();
    for (n, c) in e.iter().enumerate() {
        assert_eq!(*c, BigRational::new(BigInt::from(1), BigInt::from(factorial(n))));
    }
    let fubini = GfExpr::q(GfExpr::E { arg: GfExpr::Z.into(), min: 1 });
    let c = series_coeffs(&fubini, 5).unwrap();
    let scaled: Vec<BigRational> =
        c.iter().enumerate().map(|(n, x)| x * BigRational::from_integer(factorial(n).into())).collect();
    assert_eq!(scaled, [1, 1, 3, 13, 75, 541].map(|k| rational(k, 1)));
    let bad = GfExpr::q(GfExpr::One);
    assert_eq!(series_coeffs(&bad, 3), Err(SeriesError::NonZeroConstant("Q")));
}

#[test]
fn series_matches_counts_on_acyclic_specs() {
    let cases = [
        "labeled, I = Set(Cycle(Z, card <= 2)), Z = Atom",
        "labeled, D = Set(Cycle(Z, card >= 2)), Z = Atom",
        "labeled, P = Set(Set(Z, card >= 1), card = 2), Z = Atom",
        "labeled, F = Subst(Seq(Z, card >= 1), Set(Z, card >= 1)), Z = Atom",
        "P = MultiSet(Seq(Z, card >= 1)), Z = Atom",
        "P = PowerSet(Seq(Z, card >= 1), card >= 2), Z = Atom",
        "N = Cycle(Union(A, B)), A = Atom, B = Atom",
        "N = Cycle(Union(A, B), card <= 3), A = Atom, B = Atom",
        "C = Seq(Seq(Z, card >= 1), card <= 3), Z = Atom",
    ];
    for text in cases {
        let spec = parse_spec(text).unwrap();
        let n = 10;
        let table = count_table(&spec, n).unwrap();
        let class = spec.start_class();
        let sol = gf_solve_acyclic(&spec).unwrap();
        let Solved::Explicit(e) = &sol[0].1 else { panic!("{text}") };
        let c = series_coeffs(e, n).unwrap();
        for k in 0..=n {
            let mut v = c[k].clone();
            if spec.mode() == crate::spec::Mode::Labeled {
                v *= BigRational::from_integer(factorial(k).into());
            }
            assert_eq!(v, BigRational::from_integer(table.get(class).unwrap()[k].clone()), "{text} at {k}: {}", e);
        }
    }
}

#[test]
fn operation_count_is_quadratic() {
    let spec = parse_spec("T = Prod(Z, MultiSet(T)), P = Prod(Z, Seq(P)), Z = Atom").unwrap();
    let (_, a) = count_table_with_stats(&spec, 100).unwrap();
    let (_, b) = count_table_with_stats(&spec, 200).unwrap();
    let ratio = b.ops as f64 / a.ops as f64;
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}
