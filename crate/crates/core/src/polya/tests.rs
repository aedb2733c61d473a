#![allow(clippy::needless_range_loop)]

use super::*;
use crate::arith::rational;
use alloc::string::ToString;

fn perm(v: &[usize]) -> Permutation {
    Permutation::new(v.to_vec()).unwrap()
}

#[test]
fn closures() {
    assert_eq!(group_closure(3, &[], 100).unwrap().order(), 1);
    assert_eq!(group_closure(3, &[perm(&[2, 1, 3])], 100).unwrap().order(), 2);
    let s3 = group_closure(3, &[perm(&[2, 1, 3]), perm(&[2, 3, 1])], 100).unwrap();
    assert_eq!(s3.order(), 6);
    assert!(s3.elements()[0].is_identity());
    assert_eq!(
        group_closure(5, &[perm(&[2, 1, 3, 4, 5]), perm(&[2, 3, 4, 5, 1])], 10),
        Err(PolyaError::CapExceeded(10))
    );
    assert_eq!(group_closure(3, &[perm(&[2, 1])], 10), Err(PolyaError::DegreeMismatch));
    assert!(Permutation::new(vec![1, 1]).is_err());
}

#[test]
fn standard_orders() {
    let fact = [1, 1, 2, 6, 24, 120, 720];
    for n in 1..=6 {
        assert_eq!(standard_group(GroupKind::Symmetric, n).unwrap().order(), fact[n]);
        assert_eq!(standard_group(GroupKind::Alternating, n).unwrap().order(), (fact[n] / 2).max(1));
        assert_eq!(standard_group(GroupKind::Cyclic, n).unwrap().order(), n);
        let d = standard_group(GroupKind::Dihedral, n).unwrap().order();
        assert_eq!(d, if n <= 2 { n } else { 2 * n });
    }
    assert!(standard_group(GroupKind::Cyclic, 0).is_err());
    assert_eq!("dihedral".parse::<GroupKind>().unwrap(), GroupKind::Dihedral);
}

#[test]
fn permutation_monomials() {
    assert_eq!(cycle_index_perm(&Permutation::identity(4)), Monomial::var_pow(1, 4));
    assert_eq!(cycle_index_perm(&perm(&[2, 3, 4, 1])), Monomial::var_pow(4, 1));
    assert_eq!(cycle_index_perm(&perm(&[2, 1, 4, 3])), Monomial::var_pow(2, 2));
}

#[test]
fn group_cycle_indices() {
    let d4 = standard_group(GroupKind::Dihedral, 4).unwrap();
    assert_eq!(cycle_index_group(&d4).to_string(), "(s1^4 + 2 s1^2 s2 + 3 s2^2 + 2 s4)/8");
    let s3 = standard_group(GroupKind::Symmetric, 3).unwrap();
    assert_eq!(cycle_index_group(&s3).to_string(), "(s1^3 + 3 s1 s2 + 2 s3)/6");
    let trivial = group_closure(5, &[], 10).unwrap();
    assert_eq!(cycle_index_group(&trivial), CyclePoly::term(Monomial::var_pow(1, 5), rational(1, 1)));
    assert_eq!(cycle_index_closed(GroupKind::Cyclic, 4).unwrap().to_string(), "(s1^4 + s2^2 + 2 s4)/4");
}

#[test]
fn closed_forms_match_definitions() {
    for kind in [GroupKind::Symmetric, GroupKind::Alternating, GroupKind::Cyclic, GroupKind::Dihedral] {
        for n in 1..=7 {
            let z = cycle_index_closed(kind, n).unwrap();
            assert_eq!(z, cycle_index_group(&standard_group(kind, n).unwrap()), "{kind} {n}");
            assert_eq!(z.coeff_sum(), rational(1, 1));
        }
    }
}

#[test]
fn necklaces_and_burnside() {
    let d4 = standard_group(GroupKind::Dihedral, 4).unwrap();
    let words = ActionTable::on_words(&d4, 2).unwrap();
    assert_eq!(burnside_count(&d4, &words), BigUint::from(6u8));
    let orbs = orbits(&d4, &words);
    assert_eq!(orbs.len(), 6);
    let letters = ['B', 'R'];
    let reps: Vec<String> = orbit_representatives(&d4, &words)
        .into_iter()
        .map(|x| word_of(x, 4, 2).into_iter().map(|c| letters[c]).collect())
        .collect();
    assert_eq!(reps, ["BBBB", "BBBR", "BBRR", "BRBR", "BRRR", "RRRR"]);
    for o in &orbs {
        for &x in o {
            assert_eq!(o.len() * stabilizer(&d4, &words, x).len(), d4.order());
        }
    }
    let trivial = group_closure(3, &[], 10).unwrap();
    let t = ActionTable::on_words(&trivial, 2).unwrap();
    assert_eq!(orbits(&trivial, &t).len(), 8);
    assert_eq!(burnside_count(&trivial, &t), BigUint::from(8u8));
}

#[test]
fn bad_actions_are_rejected() {
    let c3 = standard_group(GroupKind::Cyclic, 3).unwrap();
    assert!(ActionTable::new(&c3, 3, |_, x| (x + 1) % 3).is_err());
    assert!(ActionTable::new(&c3, 3, |_, _| 0).is_err());
}

#[test]
fn edge_action_of_s3() {
    let s3 = standard_group(GroupKind::Symmetric, 3).unwrap();
    let induced = induced_ksubset_group(&s3, 2).unwrap();
    assert_eq!(induced.group.order(), 6);
    assert_eq!(induced.domain, [vec![1, 2], vec![1, 3], vec![2, 3]]);
    // the induced map is an isomorphism
    let phi: Vec<usize> = induced.image.iter().map(|p| induced.group.index_of(p).unwrap()).collect();
    let t = s3.multiplication_table();
    let u = induced.group.multiplication_table();
    for i in 0..6 {
        for j in 0..6 {
            assert_eq!(phi[t[i][j]], u[phi[i]][phi[j]]);
        }
    }
    let z = cycle_index_group(&induced.group);
    let b = orbit_inventory(&z, &QPoly::from_weights(&[0, 1]), 3).unwrap();
    assert_eq!(b, QPoly::from_ints(&[1, 1, 1, 1]));
    assert_eq!(b.at_one(), rational(4, 1));
    let edges = ActionTable::natural(&induced.group);
    let colourings = ActionTable::on_words(&induced.group, 2).unwrap();
    assert_eq!(orbits(&induced.group, &edges).len(), 1);
    assert_eq!(burnside_count(&induced.group, &colourings), BigUint::from(4u8));

    let s4 = standard_group(GroupKind::Symmetric, 4).unwrap();
    assert_eq!(induced_ksubset_group(&s4, 2).unwrap().group.order(), 24);
    assert_eq!(induced_ksubset_group(&s4, 1).unwrap().group.order(), 24);
    assert!(induced_ksubset_group(&s4, 5).is_err());
}

#[test]
fn inventories() {
    let z = cycle_index_closed(GroupKind::Dihedral, 4).unwrap();
    let a = QPoly::from_ints(&[1, 1]);
    assert_eq!(orbit_inventory(&z, &a, 4).unwrap().to_string(), "1 + t + 2*t^2 + t^3 + t^4");
    assert_eq!(necklace_polynomial(4, &a, GroupKind::Dihedral).unwrap(), QPoly::from_ints(&[1, 1, 2, 1, 1]));
    assert_eq!(necklace_polynomial(3, &a, GroupKind::Cyclic).unwrap(), QPoly::from_ints(&[1, 1, 1, 1]));
    assert_eq!(necklace_polynomial(1, &a, GroupKind::Cyclic).unwrap(), a);
    assert_eq!(orbit_inventory(&z, &a, 3), Err(PolyaError::Arity(3)));
    let three = QPoly::from_int(3);
    let d4 = standard_group(GroupKind::Dihedral, 4).unwrap();
    let words = ActionTable::on_words(&d4, 3).unwrap();
    assert_eq!(
        orbit_inventory(&z, &three, 4).unwrap(),
        QPoly::from_int(burnside_count(&d4, &words).try_into().unwrap())
    );
}

#[test]
fn inventory_matches_brute_force() {
    for (kind, n) in
        [(GroupKind::Cyclic, 6), (GroupKind::Dihedral, 5), (GroupKind::Symmetric, 4), (GroupKind::Alternating, 4)]
    {
        let g = standard_group(kind, n).unwrap();
        let weights = [0usize, 1, 2];
        let act = ActionTable::on_words(&g, 3).unwrap();
        let mut brute = vec![0i64; 2 * n + 1];
        for o in orbits(&g, &act) {
            let w: usize = word_of(o[0], n, 3).iter().map(|&c| weights[c]).sum();
            brute[w] += 1;
        }
        let b = orbit_inventory(&cycle_index_group(&g), &QPoly::from_weights(&weights), n).unwrap();
        assert_eq!(b, QPoly::from_ints(&brute), "{kind} {n}");
    }
}
