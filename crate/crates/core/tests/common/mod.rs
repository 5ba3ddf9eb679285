#![allow(dead_code)]

use qpoly::codes::{MatrixCode, VectorCode};
use qpoly::field::GaloisField;
use qpoly::qpm::QPolymatroid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn example_code() -> VectorCode {
    let f = GaloisField::parse_spec("GF(2^6)/x^6+x^4+x^3+x+1").unwrap();
    let rows = [
        ["1", "0", "0", "a^13", "a^47", "a^35"],
        ["0", "1", "0", "a^44", "a^62", "a^32"],
        ["0", "0", "1", "a^34", "a^22", "a^19"],
    ];
    let gen = rows.iter().map(|r| r.iter().map(|x| f.parse_elem(x).unwrap()).collect()).collect();
    VectorCode::new(f, 6, gen).unwrap()
}

/// The F_4-[4,2] code whose dual is generated by `[1, a, 0, 0]` and `[0, 0, 1, a]`.
/// The dual has constant rank weight 2.
pub fn constant_weight_dual_pair() -> VectorCode {
    let f = GaloisField::parse_spec("GF(2^2)/x^2+x+1").unwrap();
    let rows = [["1", "a", "0", "0"], ["0", "0", "1", "a"]];
    let gen = rows.iter().map(|r| r.iter().map(|x| f.parse_elem(x).unwrap()).collect()).collect();
    VectorCode::new(f, 4, gen).unwrap().dual()
}

/// Five F_2-[4×3] matrix codes of dimensions 2, 4, 5, 7 and 9.
pub fn random_matrix_codes() -> Vec<MatrixCode> {
    let f2 = GaloisField::gf(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    [2, 4, 5, 7, 9].iter().map(|&k| MatrixCode::random(f2.clone(), 4, 3, k, &mut rng).unwrap()).collect()
}

pub fn suite() -> Vec<(String, QPolymatroid)> {
    let f2 = GaloisField::gf(2).unwrap();
    let mut out = vec![
        ("U(2,4)".to_string(), QPolymatroid::uniform(f2.clone(), 2, 4).unwrap()),
        ("U(2,5)".to_string(), QPolymatroid::uniform(f2.clone(), 2, 5).unwrap()),
        ("Vamos".to_string(), QPolymatroid::vamos(f2).unwrap()),
        ("example code".to_string(), example_code().induced_qpm().unwrap()),
    ];
    for (i, c) in random_matrix_codes().into_iter().enumerate() {
        out.push((format!("random code {i}"), c.induced_qpm().unwrap()));
    }
    out
}
