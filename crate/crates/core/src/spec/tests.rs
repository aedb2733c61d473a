use super::*;
use alloc::string::ToString;

const PLANE: &str = "T = Prod(Z, Seq(T)), Z = Atom";
const BINARY: &str = "labeled\nB = Union(Z, Prod(Z, B, B))\nZ = Atom";

#[test]
fn parses_plane_trees() {
    let s = parse_spec(PLANE).unwrap();
    assert_eq!(s.class_names().collect::<Vec<_>>(), ["T", "Z"]);
    assert_eq!(s.mode(), Mode::Unlabeled);
    assert_eq!(s.rhs("T").unwrap().to_string(), "Prod(Z, Seq(T))");
}

#[test]
fn parses_labeled_binary_trees() {
    let s = parse_spec(BINARY).unwrap();
    assert_eq!(s.mode(), Mode::Labeled);
    assert_eq!(s.class_names().collect::<Vec<_>>(), ["B", "Z"]);
}

#[test]
fn union_of_one_is_an_arity_error() {
    let err = parse_spec("A = Union(Z), Z = Atom").unwrap_err();
    assert!(matches!(err, SpecError::Arity { min: 2, got: 1, .. }), "{err:?}");
}

#[test]
fn undeclared_and_syntax_errors() {
    let err = parse_spec("T = Prod(Z, Seq(T))").unwrap_err();
    assert!(matches!(err, SpecError::Undeclared { ref name, .. } if name == "Z"));
    let err = parse_spec("Z = Atom\nT = Prod(Z,, Z)").unwrap_err();
    match err {
        SpecError::Syntax { line, column, .. } => assert_eq!((line, column), (2, 12)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_spec("A = Atom, A = Epsilon"), Err(SpecError::Duplicate { .. })));
    assert!(matches!(parse_spec(""), Err(SpecError::Empty)));
}

#[test]
fn restrictions_and_markers() {
    let s = parse_spec("C = Seq(Prod(Marker, Seq(Z, card >= 1))); Z = Atom").unwrap();
    assert_eq!(s.markers(), ["u"]);
    assert_eq!(s.rhs("C").unwrap().to_string(), "Seq(Prod(Marker, Seq(Z, card >= 1)))");
    let s = parse_spec("A = Cycle(Z, card ≤ 3), B = Set(Z, card = 2), Z = Atom, M = Prod(Marker(v), Z)").unwrap();
    assert_eq!(s.rhs("A").unwrap().to_string(), "Cycle(Z, card <= 3)");
    assert_eq!(s.rhs("B").unwrap().to_string(), "Set(Z, card = 2)");
    assert_eq!(s.markers(), ["v"]);
}

#[test]
fn multiline_arguments_and_comments() {
    let text = "# trees\nT = Prod(Z,\n   Seq(T)) # root and children\nZ = Atom\n";
    assert_eq!(parse_spec(text).unwrap(), parse_spec(PLANE).unwrap());
}

#[test]
fn printing_round_trips() {
    for text in [
        PLANE,
        BINARY,
        "labeled, D = Set(Cycle(Z)), Z = Atom",
        "S = Subst(Seq(Z, card >= 1), Set(Z, card >= 1)), Z = Atom",
    ] {
        let s = parse_spec(text).unwrap();
        let again = parse_spec(&s.to_text()).unwrap();
        assert_eq!(s, again);
        assert_eq!(again.to_text(), s.to_text());
    }
}

#[test]
fn valuations() {
    let v = valuation(&parse_spec(PLANE).unwrap());
    assert_eq!(v["T"], Some(1));
    let v = valuation(&parse_spec("A = Prod(Z, A), Z = Atom").unwrap());
    assert_eq!(v["A"], None);
    let v = valuation(&parse_spec("B = Union(Z, Prod(Z, B, B)), Z = Atom").unwrap());
    assert_eq!(v["B"], Some(1));
    let v = valuation(&parse_spec("S = Seq(Z, card >= 3), C = Cycle(P, card = 2), P = Prod(Z, Z), Z = Atom").unwrap());
    assert_eq!(v["S"], Some(3));
    assert_eq!(v["C"], Some(4));
    let v = valuation(&parse_spec("C = Cycle(Z, card = 0), Z = Atom").unwrap());
    assert_eq!(v["C"], None);
}

#[test]
fn well_definedness() {
    assert!(check_well_defined(&parse_spec(PLANE).unwrap()).is_ok());
    assert!(check_well_defined(&parse_spec(BINARY).unwrap()).is_ok());
    let composition = parse_spec("C = Seq(Prod(Marker, Seq(Z, card >= 1))), Z = Atom").unwrap();
    assert!(check_well_defined(&composition).is_ok());

    let r = check_well_defined(&parse_spec("A = Seq(E), E = Epsilon").unwrap());
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.violations[0].kind, ViolationKind::ZeroSizeComponent);
    assert_eq!(r.violations[0].class, "A");

    let r = check_well_defined(&parse_spec("A = Prod(Z, A), Z = Atom").unwrap());
    assert_eq!(r.violations[0].kind, ViolationKind::InfiniteValuation);

    let r = check_well_defined(&parse_spec("A = Union(Z, B), B = Prod(E, A), E = Epsilon, Z = Atom").unwrap());
    assert!(r.violations.iter().any(|v| v.kind == ViolationKind::UnguardedRecursion), "{r}");

    let r = check_well_defined(&parse_spec("labeled, A = PowerSet(Z), Z = Atom").unwrap());
    assert_eq!(r.violations[0].kind, ViolationKind::UnsupportedInMode);
    let r = check_well_defined(&parse_spec("A = Subst(Seq(Z), Z), Z = Atom").unwrap());
    assert!(r.violations.iter().any(|v| v.kind == ViolationKind::UnsupportedInMode));
}
