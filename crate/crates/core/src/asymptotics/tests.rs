#![allow(clippy::needless_range_loop)]

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::numeric::ratio_to_f64;
use crate::poly::QPoly;

fn p(text: &str) -> EExpr {
    parse_eexpr(text).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn exact(e: &EExpr, n: usize) -> f64 {
    ratio_to_f64(&e.series(n).unwrap()[n])
}

fn rel_err(est: f64, exact: f64) -> f64 {
    ((est - exact) / exact).abs()
}

const AL_CASES: [&str; 5] = ["Q(E1(z))", "Q(z + z^2)", "Pow(Q(z), 2)*E(z)", "Q(z)*L(z)", "Q(2*z) + L(z)"];

#[test]
fn parse_and_display() {
    assert_eq!(p("Q(E1(z))"), EExpr::q(EExpr::e1(EExpr::Z)));
    assert_eq!(p("E(Poly(z + z^2/2))"), EExpr::e(EExpr::Poly(QPoly::from_coeffs(vec![q(0, 1), q(1, 1), q(1, 2)]))));
    assert_eq!(p("Pow(Z, 2)"), p("z^2"));
    for text in ["Q(E1(z))", "E(Poly(z + z^2/2))", "Q(z + z^2)", "Pow(Q(z), 2)*E(z)", "L(3*z^2/4)", "E1(E1(z))"] {
        let e = p(text);
        assert_eq!(p(&alloc::format!("{e}")), e, "{text}");
    }
    assert!(matches!(parse_eexpr("Q(1 + z)"), Err(AsymptError::NonZeroConstant { op: "Q", .. })));
    assert!(matches!(parse_eexpr("Q(z"), Err(AsymptError::Syntax { .. })));
    assert!(matches!(parse_eexpr("Poly(Q(z))"), Err(AsymptError::Syntax { .. })));
    assert!(matches!(parse_eexpr("z/z"), Err(AsymptError::Syntax { .. })));
    assert!(matches!(parse_eexpr("Pow(z, 0)"), Err(AsymptError::ZeroPower)));
    let neg = EExpr::Poly(QPoly::from_ints(&[0, -1]));
    assert!(matches!(neg.validate(), Err(AsymptError::NegativeCoefficient(_))));
}

#[test]
fn gf_round_trip() {
    for text in AL_CASES.iter().chain(&["E(Poly(z + z^2/2))", "E(E1(z))"]) {
        let e = p(text);
        let back = EExpr::from_gf(&e.to_gf()).unwrap();
        assert_eq!(back.series(12).unwrap(), e.series(12).unwrap(), "{text}");
    }
}

#[test]
fn radius_cases() {
    let r = radius(&p("Q(z)"));
    assert_eq!(r, Radius::Finite { lo: r.value(), hi: r.value(), exact: Some(q(1, 1)) }.clone().min_fix(&r));
    assert_eq!(radius(&p("Q(2*z)")).value(), 0.5);
    assert_eq!(radius(&p("Poly(1 + z^3)")), Radius::Infinite);
    assert_eq!(radius(&p("E(E(z))")), Radius::Infinite);
    let ln2 = radius(&p("Q(E1(z))"));
    assert!((ln2.value() - core::f64::consts::LN_2).abs() < 1e-10);
    assert!((libm::exp(ln2.value()) - 2.0).abs() < 1e-10);
    assert!(ln2.error() < 1e-12);
    let golden = radius(&p("Q(z + z^2)")).value();
    assert!((golden - (libm::sqrt(5.0) - 1.0) / 2.0).abs() < 1e-12);
    assert!((radius(&p("L(z)")).value() - 1.0).abs() < 1e-12);
    assert!((radius(&p("E(Q(z))")).value() - 1.0).abs() < 1e-12);
    // Q of something that diverges before reaching 1 stops early
    assert!((radius(&p("Q(L(z))")).value() - (1.0 - libm::exp(-1.0))).abs() < 1e-12);
}

trait MinFix {
    fn min_fix(self, other: &Radius) -> Radius;
}

impl MinFix for Radius {
    fn min_fix(self, other: &Radius) -> Radius {
        // exact radii carry whatever bracket bisection produced
        match (self, other) {
            (Radius::Finite { exact, .. }, Radius::Finite { lo, hi, .. }) => Radius::Finite { lo: *lo, hi: *hi, exact },
            (s, _) => s,
        }
    }
}

#[test]
fn radius_agrees_with_coefficient_growth() {
    for text in AL_CASES {
        let e = p(text);
        let r = radius(&e).value();
        let a = exact(&e, 60);
        let root = libm::pow(a, 1.0 / 60.0);
        assert!(rel_err(root, 1.0 / r) < 0.1, "{text}: {root} vs {}", 1.0 / r);
    }
}

#[test]
fn directions() {
    assert_eq!(dominant_directions(&p("Q(z)")).unwrap(), vec![0.0]);
    assert_eq!(dominant_directions(&p("Q(Pow(z, 2))")).unwrap(), vec![-core::f64::consts::PI, 0.0]);
    assert_eq!(dominant_directions(&p("Q(E1(z))")).unwrap(), vec![0.0]);
    assert_eq!(dominant_directions(&p("z*Q(z^2)")).unwrap().len(), 2);
    assert_eq!(dominant_directions(&p("Q(z^2 + z^3)")).unwrap(), vec![0.0]);
    assert_eq!(dominant_directions(&p("Q(z^3)")).unwrap().len(), 3);
    assert_eq!(dominant_directions(&p("E(z)")), Err(AsymptError::InfiniteRadius));
}

#[test]
fn classification() {
    assert_eq!(classify(&p("Q(E1(z))")).class, Class::AlgebraicLogarithmic);
    assert_eq!(classify(&p("E(Poly(1 + z))")).class, Class::Entire);
    assert_eq!(classify(&p("E(Q(z))")).class, Class::Other);
    assert_eq!(classify(&p("Q(z)*E(Q(z))")).class, Class::Other);
    for text in AL_CASES.iter().chain(&["E(z)", "E(Q(z))", "z^3", "E1(L(z))"]) {
        let e = p(text);
        let c = classify(&e).class;
        assert_eq!(c == Class::Entire, !radius(&e).is_finite(), "{text}");
    }
}

#[test]
fn equivalent_geometric_and_log() {
    let t = equivalent(&p("Q(z)")).unwrap();
    assert_eq!((t.constant, t.radius, t.power, t.log_power), (1.0, 1.0, 0, 0));
    assert_eq!(t.radius_exact, Some(q(1, 1)));
    assert!((t.eval(17) - 1.0).abs() < 1e-12);
    let l = equivalent(&p("L(z)")).unwrap();
    assert_eq!((l.constant, l.power, l.log_power), (1.0, -1, 0));
    for n in 1..30 {
        assert!(rel_err(l.eval(n), exact(&p("L(z)"), n)) < 1e-12);
    }
    // double pole: [z^n] z^3/(1-z)^3 = C(n-1, 2)
    let d = equivalent(&p("z^3*Pow(Q(z), 3)")).unwrap();
    assert_eq!((d.constant, d.power), (0.5, 2));
    let h = equivalent(&p("Q(z)*L(z)")).unwrap();
    assert_eq!((h.constant, h.power, h.log_power), (1.0, 0, 1));
}

#[test]
fn equivalent_surjections() {
    let e = p("Q(E1(z))");
    let t = equivalent(&e).unwrap();
    let c = 1.0 / (2.0 * core::f64::consts::LN_2);
    assert!((t.constant - c).abs() < 1e-9);
    assert!(t.constant_err < 1e-9);
    assert!(rel_err(t.eval(15), exact(&e, 15)) < 1e-2);
}

fn precise_rel_err(t: &AsymptoticTerm, e: &EExpr, n: usize) -> f64 {
    let a = e.series(n).unwrap()[n].clone();
    ratio_to_f64(&((t.eval_precise(n) - &a) / &a)).abs()
}

#[test]
fn equivalent_error_decreases() {
    for text in AL_CASES {
        let e = p(text);
        let t = equivalent(&e).unwrap();
        let errs: Vec<f64> = [10, 20, 40].iter().map(|&n| precise_rel_err(&t, &e, n)).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{text}: {errs:?}");
    }
}

#[test]
fn precise_constants() {
    let t = equivalent(&p("Q(E1(z))")).unwrap();
    // 1/(2 ln 2) and ln 2 to 40 digits
    let c: BigRational =
        "721347520444481703679962340500946068713/1000000000000000000000000000000000000000".parse().unwrap();
    let r: BigRational =
        "693147180559945309417232121458176568075/1000000000000000000000000000000000000000".parse().unwrap();
    let tol: BigRational = "1/1000000000000000000000000000000000000".parse().unwrap();
    use num_traits::Signed;
    assert!((&t.constant_precise - &c).abs() < tol);
    assert!((&t.radius_precise - &r).abs() < tol);
    assert!(t.constant_err < 1e-15);
    // the surjection error at n = 40 is around 1e-38, far below f64
    let err = precise_rel_err(&t, &p("Q(E1(z))"), 40);
    assert!(err > 0.0 && err < 1e-30, "{err}");
}

#[test]
fn equivalent_rejections() {
    assert_eq!(equivalent(&p("Q(Pow(z, 2))")), Err(AsymptError::MultipleDirections(2)));
    assert_eq!(equivalent(&p("E(z)")), Err(AsymptError::InfiniteRadius));
    assert!(matches!(equivalent(&p("E(Q(z))")), Err(AsymptError::Unsupported(_))));
}

#[test]
fn hayman_exp() {
    let e = p("E(z)");
    let est = hayman_estimate(&e, 10).unwrap();
    let ratio = est / exact(&e, 10);
    assert!((0.99..=1.02).contains(&ratio), "{ratio}");
}

#[test]
fn hayman_bell_and_involutions() {
    for text in ["E(E1(z))", "E(Poly(z + z^2/2))"] {
        let e = p(text);
        let ratio = hayman_estimate(&e, 20).unwrap() / exact(&e, 20);
        assert!((ratio - 1.0).abs() < 0.05, "{text}: {ratio}");
    }
}

#[test]
fn hayman_converges() {
    for text in ["E(z)", "E(E1(z))", "E(Poly(z + z^2/2))"] {
        let e = p(text);
        let errs: Vec<f64> =
            [10, 20, 40].iter().map(|&n| rel_err(hayman_estimate(&e, n).unwrap(), exact(&e, n))).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{text}: {errs:?}");
    }
}

#[test]
fn admissibility_rules() {
    assert!(h_admissible_check(&p("E(z)")).accepted);
    assert!(h_admissible_check(&p("E(Poly(z + z^2/2))")).accepted);
    assert!(h_admissible_check(&p("E(E1(z))")).accepted);
    assert!(h_admissible_check(&p("E(z) + z^2")).accepted);
    assert!(h_admissible_check(&p("(1 + z)*E(z)")).accepted);
    assert!(h_admissible_check(&p("Pow(E(z), 2)")).accepted);
    let rej = h_admissible_check(&p("E(Pow(z, 2))"));
    assert!(!rej.accepted);
    assert!(rej.trace.iter().any(|l| l.contains("support gcd 2")));
    assert!(!h_admissible_check(&p("Q(z)")).accepted);
    assert!(!h_admissible_check(&p("E(z)*E(z)")).accepted);
    match hayman_estimate(&p("E(z^2)"), 10) {
        Err(AsymptError::NotAdmissible(msg)) => assert!(msg.contains("support gcd 2")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn pole_series_cases() {
    let s = pole_series(&QPoly::from_ints(&[0, 0, 0, 1]), &q(1, 1), 3, 2).unwrap();
    assert_eq!(s.coeffs, vec![q(1, 2), q(-3, 2)]);
    assert_eq!(pole_series(&QPoly::from_ints(&[0, 0, 0, 1]), &q(1, 1), 3, 3).unwrap().coeffs[2], q(1, 1));
    assert_eq!(pole_series(&QPoly::one(), &q(1, 1), 1, 1).unwrap().coeffs, vec![q(1, 1)]);
    assert_eq!(pole_series(&QPoly::from_ints(&[0, 0, 1]), &q(1, 1), 2, 2).unwrap().coeffs, vec![q(1, 1), q(-1, 1)]);
    assert_eq!(pole_series(&QPoly::one(), &q(1, 1), 0, 1), Err(AsymptError::PoleOrder));
    assert_eq!(pole_series(&QPoly::one(), &q(0, 1), 1, 1), Err(AsymptError::PoleLocation));
}

#[test]
fn pole_series_is_exact() {
    let a = QPoly::from_ints(&[1, 1, 3]);
    for (r, m) in [(q(2, 1), 3usize), (q(1, 3), 2), (q(1, 1), 4)] {
        let s = pole_series(&a, &r, m, m).unwrap();
        // A(z) (1 - z/r)^-m = A(z) Q(z/r)^m
        let mut e = EExpr::Poly(a.clone());
        let inner =
            EExpr::q(EExpr::times(EExpr::Poly(QPoly::constant(BigRational::from_integer(1.into()) / &r)), EExpr::Z));
        for _ in 0..m {
            e = EExpr::times(e, inner.clone());
        }
        let series = e.series(25).unwrap();
        for n in 2..=25 {
            assert_eq!(s.coefficient(n), series[n], "r = {r}, m = {m}, n = {n}");
        }
    }
}
