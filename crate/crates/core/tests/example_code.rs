//! The F_{2^6}-[6,3,3] code with generator rows over GF(2^6)/x^6+x^4+x^3+x+1.

mod common;

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigInt;
use qpoly::charpoly::{char_poly, char_poly_contraction, tally, tally_perp, weight_enumerator};
use qpoly::codes::VectorCode;
use qpoly::field::GammaBasis;
use qpoly::lattice::Subspace;

fn code() -> VectorCode {
    common::example_code()
}

fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

const LISTED: [[&str; 3]; 9] = [
    ["010011", "001010", "000100"],
    ["101100", "010000", "000001"],
    ["100001", "011000", "000010"],
    ["100111", "010010", "001101"],
    ["100110", "010101", "001001"],
    ["100010", "001011", "000111"],
    ["110001", "000101", "000011"],
    ["100100", "010100", "001111"],
    ["100000", "010110", "001000"],
];

#[test]
fn weight_distribution_and_formal_self_duality() {
    let c = code();
    let w = big(&[1, 0, 0, 567, 37044, 142884, 81648]);
    assert_eq!(c.weight_distribution().unwrap(), w);
    assert_eq!(c.dual().weight_distribution().unwrap(), w);
    assert_eq!(c.minimum_distance().unwrap(), Some(3));
    assert!(!c.is_mrd().unwrap());
}

#[test]
fn expansion_is_an_18_dimensional_matrix_code() {
    let c = code();
    let mc = c.to_matrix_code(&GammaBasis::polynomial(c.ext().clone()).unwrap()).unwrap();
    assert_eq!((mc.n(), mc.m(), mc.k()), (6, 6, 18));
    assert_eq!(mc.minimum_distance().unwrap(), Some(3));
    let printed = [
        ["100000", "000000", "000000", "100100", "010111", "100010"],
        ["000000", "100000", "000000", "001111", "101101", "010011"],
        ["000000", "000000", "100000", "101001", "001110", "011101"],
    ];
    let gamma = GammaBasis::polynomial(c.ext().clone()).unwrap();
    for (row, want) in c.generator().iter().zip(printed) {
        let got: Vec<String> = gamma.expand(row).unwrap().iter().map(|r| r.iter().map(|x| x.0.to_string()).collect()).collect();
        assert_eq!(got, want);
    }
}

#[test]
fn char_poly_and_tally() {
    let start = Instant::now();
    let m = code().induced_qpm().unwrap();
    assert_eq!(char_poly(&m).unwrap().to_string(), "z^3 - 63z^2 + 1230z - 1168");
    let t = tally(&m).unwrap();
    assert_eq!(t.get(0, 3), 1);
    assert_eq!(t.get(1, 2), 63);
    assert_eq!(t.get(2, 1), 651);
    assert_eq!(t.get(3, 1), 9);
    assert_eq!(t.get(3, 0), 1386);
    assert_eq!(t.get(4, 0), 651);
    assert_eq!(t.get(5, 0), 63);
    assert_eq!(t.get(6, 0), 1);
    let tp = tally_perp(&m).unwrap();
    assert_eq!(tp.get(4, 1), 651);
    assert_eq!(tp.get(5, 2), 63);
    let theta = BigInt::from(64);
    assert_eq!(weight_enumerator(&m).unwrap().eval(&theta), big(&[1, 0, 0, 567, 37044, 142884, 81648]));
    assert!(start.elapsed().as_secs() < 120);
}

#[test]
fn cocircuits_and_supports() {
    let c = code();
    let m = c.induced_qpm().unwrap();
    let e = c.ambient().clone();
    let listed: HashSet<Subspace> = LISTED.iter().map(|rows| e.parse_subspace(rows).unwrap()).collect();
    let co: HashSet<Subspace> = m.cocircuits().unwrap().into_iter().filter(|x| x.dim() == 3).collect();
    assert_eq!(co, listed);
    assert_eq!(m.min_cocircuit_dim().unwrap(), 3);
    for x in &listed {
        assert_eq!(char_poly_contraction(&m, x).unwrap().to_string(), "z - 1");
        assert_eq!(c.codewords_with_support(x).unwrap(), BigInt::from(63));
    }
    let counts = c.support_counts().unwrap();
    let three: HashSet<Subspace> = counts.keys().filter(|s| s.dim() == 3).cloned().collect();
    assert_eq!(three, listed);
    let four: Vec<u64> = counts.iter().filter(|(s, _)| s.dim() == 4).map(|(_, &n)| n).collect();
    assert_eq!(four.len(), 588);
    assert!(four.iter().all(|&n| n == 63));
    let five: Vec<u64> = counts.iter().filter(|(s, _)| s.dim() == 5).map(|(_, &n)| n).collect();
    assert_eq!(five.len(), 63);
    assert!(five.iter().all(|&n| n == 2268));
}
