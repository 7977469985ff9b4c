mod common;

use std::sync::Arc;

use bifree_core::bifree_product::{bifree_product, check_bifree};
use bifree_core::cumulants::CumulantTable;
use bifree_core::distributions::{Derived, Letter, Model, Word};
use bifree_core::Scalar;
use common::*;
use rayon::prelude::*;

#[test]
fn joint_restricts_to_each_pair() {
    let parts = [shift(0), complex_pair(1), sample_off_diagonal(2)];
    let j = joint(parts.to_vec());
    for (p, m) in parts.iter().enumerate() {
        for n in 0..=5 {
            for word in Word::all_of_length(&Letter::alphabet(p as u32), n) {
                assert_eq!(j.moment(&word).unwrap(), m.moment(&word).unwrap(), "{word}");
            }
        }
    }
}

#[test]
fn product_is_associative() {
    let flat = joint(vec![shift(0), shift(1), shift(2)]);
    let nested = joint(vec![shift(0), joint(vec![shift(1), shift(2)])]);
    let letters: Vec<Letter> = (0..3).flat_map(Letter::alphabet).collect();
    for n in 0..=5 {
        let words = Word::all_of_length(&letters, n);
        words.par_iter().for_each(|word| {
            assert_eq!(flat.moment(word).unwrap(), nested.moment(word).unwrap(), "{word}");
        });
    }
}

#[test]
fn squares_of_a_bi_r_diagonal_pair_with_mismatched_stars_are_not_bifree() {
    // (X*X, Y*Y) and (XX*, YY*) for X = u_l Z, Y = W u_r
    let x5 = x(5);
    let y5 = y(5);
    let base = product_built(5);
    let fam = Derived::new(base)
        .with_pair(6, x5.adjoint().mul(&x5), y5.adjoint().mul(&y5))
        .unwrap()
        .with_pair(7, x5.mul(&x5.adjoint()), y5.mul(&y5.adjoint()))
        .unwrap();
    let fam: Model = Arc::new(fam);
    assert_eq!(CumulantTable::new(fam.clone()).kappa_full(&w("X6 Y7")).unwrap(), Scalar::ratio(-1, 4));
    let report = check_bifree(&fam, 2).unwrap();
    assert!(!report.is_bifree());
    assert!(report.findings.iter().any(|f| f.word == w("X6 Y7") && f.kappa == Scalar::ratio(-1, 4)));
}

#[test]
fn products_reject_shared_pairs() {
    assert!(bifree_product(vec![shift(0), matrix_units(0)]).is_err());
    assert!(bifree_product(vec![]).is_err());
}
