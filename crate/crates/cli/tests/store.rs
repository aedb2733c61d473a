use std::fs;
use std::path::PathBuf;

use combi::{make_record, search_initial_values, search_keyword, verify, RecordError, RecordStore};
use num_bigint::BigInt;

const PLANE: &str = "T = Prod(Z, Seq(T)), Z = Atom";

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn shipped() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/records.jsonl")
}

#[test]
fn plane_tree_record() {
    let r = make_record(PLANE, None, 5, "plane trees", "").unwrap();
    assert_eq!(r.initial_values, ints(&[0, 1, 1, 2, 5, 14]));
    assert_eq!(r.offset, 0);
    assert_eq!(r.gf_equations, ["T(z) = z*Q(T(z))", "Z(z) = z"]);
    assert!(r.asymptotic_term.is_none());
    assert!(r.asymptotic_note.is_some());
    verify(&r).unwrap();
}

#[test]
fn labeled_sequence_record() {
    let r = make_record("labeled, L = Seq(Z), Z = Atom", Some("L"), 4, "perms", "").unwrap();
    assert_eq!(r.initial_values, ints(&[1, 1, 2, 6, 24]));
    let t = r.asymptotic_term.unwrap();
    assert_eq!(t.scale, "egf");
    assert_eq!(t.constant(), 1.0);
    assert_eq!(t.radius(), 1.0);
    assert_eq!((t.power, t.log_power), (0, 0));
}

#[test]
fn ill_defined_spec_is_rejected() {
    assert!(matches!(make_record("T = Prod(T, T)", None, 5, "x", ""), Err(RecordError::Count(_))));
    assert!(matches!(make_record("T = Prod(Z, T), Z = Atom", None, 5, "x", ""), Err(RecordError::Count(_))));
    assert!(matches!(make_record(PLANE, Some("Q"), 5, "x", ""), Err(RecordError::UnknownClass(_))));
    assert!(matches!(make_record("T = ", None, 5, "x", ""), Err(RecordError::Spec(_))));
}

#[test]
fn tampered_record_fails_verification() {
    let mut r = make_record(PLANE, None, 5, "plane trees", "").unwrap();
    r.initial_values[5] = BigInt::from(15);
    assert!(matches!(verify(&r), Err(RecordError::Invalid { .. })));
    let dir = tempfile::tempdir().unwrap();
    let store = RecordStore::new(dir.path().join("s.jsonl"));
    assert!(store.append(&r).is_err());
    assert!(store.load().unwrap().records.is_empty());
}

#[test]
fn append_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let store = RecordStore::new(dir.path().join("s.jsonl"));
    assert!(store.load().unwrap().records.is_empty());
    let mut a = make_record(PLANE, None, 12, "plane trees", "ordered trees").unwrap();
    a.references.push("a book".into());
    let b = make_record("labeled, F = Seq(Set(Z, card >= 1)), Z = Atom", None, 12, "surjections", "").unwrap();
    store.append(&a).unwrap();
    store.append(&b).unwrap();
    let loaded = store.load().unwrap();
    assert!(loaded.errors.is_empty());
    assert_eq!(loaded.records, [a, b]);
}

#[test]
fn empty_file_is_an_empty_store() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    fs::write(&path, "").unwrap();
    let loaded = RecordStore::new(&path).load().unwrap();
    assert!(loaded.records.is_empty() && loaded.errors.is_empty());
}

#[test]
fn corrupt_line_is_reported_and_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let store = RecordStore::new(&path);
    store.append(&make_record(PLANE, None, 6, "a", "").unwrap()).unwrap();
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("{\"name\": \"broken\"\n");
    fs::write(&path, text).unwrap();
    store.append(&make_record("C = Seq(Seq(Z, card >= 1)), Z = Atom", None, 6, "b", "").unwrap()).unwrap();
    let loaded = store.load().unwrap();
    assert_eq!(loaded.records.len(), 2);
    assert_eq!(loaded.errors.len(), 1);
    assert_eq!(loaded.errors[0].line, 2);
}

#[test]
fn search_by_values() {
    let recs = vec![
        make_record("C = Seq(Seq(Z, card >= 1)), Z = Atom", None, 8, "compositions", "").unwrap(),
        make_record(PLANE, None, 8, "plane trees", "").unwrap(),
        make_record("labeled, L = Seq(Z), Z = Atom", None, 8, "permutations", "linear orders").unwrap(),
    ];
    let hits = search_initial_values(&ints(&[1, 1, 2, 5, 14]), &recs);
    assert_eq!(hits.len(), 1);
    assert_eq!((hits[0].index, hits[0].offset), (1, 1));
    assert!(search_initial_values(&ints(&[9, 9, 9]), &recs).is_empty());
    assert!(search_initial_values(&ints(&[1, 1, 2]), &[]).is_empty());
    assert!(search_initial_values(&[], &recs).is_empty());
    // matches ranked by offset
    let hits = search_initial_values(&ints(&[1, 2]), &recs);
    let order: Vec<(usize, usize)> = hits.iter().map(|h| (h.index, h.offset)).collect();
    assert_eq!(order, [(0, 1), (2, 1), (1, 2)]);
    // too deep into the sequence
    assert!(search_initial_values(&ints(&[5, 14]), &recs).is_empty());
    for (i, r) in recs.iter().enumerate() {
        let hits = search_initial_values(&r.initial_values, &recs);
        assert!(hits.iter().any(|h| h.index == i && h.offset == 0));
    }
    assert_eq!(search_keyword("LINEAR", &recs), [2]);
    assert_eq!(search_keyword("trees", &recs), [1]);
}

#[test]
fn shipped_records_verify() {
    let loaded = RecordStore::new(shipped()).load().unwrap();
    assert!(loaded.errors.is_empty());
    assert!(loaded.records.len() >= 5);
    for r in &loaded.records {
        verify(r).unwrap_or_else(|e| panic!("{}: {e}", r.name));
        let hits = search_initial_values(&r.initial_values, &loaded.records);
        assert!(hits.iter().any(|h| loaded.records[h.index] == *r));
    }
}
