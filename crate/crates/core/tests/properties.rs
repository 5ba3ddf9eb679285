//! Lattice, characteristic-polynomial and code identities, exhaustively on small
//! lattices and on random instances up to `F_2^6`.

mod invariants;

use invariants::*;
use proptest::prelude::*;
use qpoly::codes::{Code, MatrixCode, VectorCode};
use qpoly::field::GaloisField;
use qpoly::lattice::AmbientSpace;
use qpoly::qpm::QPolymatroid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix_code(n: usize, m: usize, k: usize, seed: u64) -> Code {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Code::Matrix(MatrixCode::random(f2(), n, m, k, &mut rng).unwrap())
}

fn random_vector_code(n: usize, k: usize, seed: u64) -> Code {
    let f4 = GaloisField::parse_spec("GF(2^2)/x^2+x+1").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let gen: Vec<Vec<_>> = (0..k).map(|_| (0..n).map(|_| qpoly::field::Elem(rng.gen_range(0..4))).collect()).collect();
        if let Ok(c) = VectorCode::new(f4.clone(), n, gen) {
            if c.k() == k {
                return Code::Vector(c);
            }
        }
    }
}

#[test]
fn counting_formula_up_to_eight() {
    for q in [2, 3] {
        for n in 0..=8 {
            for k in 0..=n {
                for i in 0..=k {
                    for j in 0..=(k - i).min(n - i) {
                        counting_formula(n, i, j, k, q).unwrap();
                    }
                }
            }
        }
    }
}

#[test]
fn counting_by_enumeration_on_f2_4() {
    let e = AmbientSpace::binary(4);
    let spaces = all_spaces(&e);
    for a in &spaces {
        for b in &spaces {
            for k in 0..=4 {
                counting_enumerated(&e, a, b, k).unwrap();
            }
        }
    }
}

#[test]
fn counting_by_enumeration_over_f3() {
    let e = AmbientSpace::new(GaloisField::gf(3).unwrap(), 3).unwrap();
    let spaces = all_spaces(&e);
    for a in &spaces {
        for b in &spaces {
            for k in 0..=3 {
                counting_enumerated(&e, a, b, k).unwrap();
            }
        }
    }
}

#[test]
fn uniform_exhaustive() {
    for n in 1..=4 {
        for k in 0..=n {
            let m = QPolymatroid::uniform(f2(), k, n).unwrap();
            Prepared::new(&m).exhaustive().unwrap_or_else(|err| panic!("U({k},{n}): {err}"));
        }
    }
}

#[test]
fn vamos_restrictions_exhaustive() {
    for cols in [[0, 1, 2, 3], [0, 1, 2, 4], [2, 3, 6, 7], [1, 3, 5, 7]] {
        let m = vamos_restricted(&cols);
        Prepared::new(&m).exhaustive().unwrap_or_else(|err| panic!("{cols:?}: {err}"));
    }
}

#[test]
fn codes_exhaustive() {
    let mut seed = 0;
    for n in 2..=4 {
        for m in 1..=3 {
            for k in [1, m * n / 2, m * n - 1] {
                seed += 1;
                let c = random_matrix_code(n, m, k.max(1), seed);
                Prepared::new(&c.induced_qpm().unwrap()).exhaustive().unwrap_or_else(|err| panic!("n={n} m={m} k={k}: {err}"));
                code_exhaustive(&c).unwrap_or_else(|err| panic!("code n={n} m={m} k={k}: {err}"));
            }
        }
    }
    for (n, k) in [(3, 1), (3, 2), (4, 2)] {
        let c = random_vector_code(n, k, 77 + n as u64);
        Prepared::new(&c.induced_qpm().unwrap()).exhaustive().unwrap();
        code_exhaustive(&c).unwrap();
    }
}

#[test]
fn mobius_over_f3() {
    let e = AmbientSpace::new(GaloisField::gf(3).unwrap(), 3).unwrap();
    let spaces = all_spaces(&e);
    for a in &spaces {
        for b in &spaces {
            mobius_interval(&e, a, b).unwrap();
        }
    }
}

#[test]
fn qpascal_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for case in 0..100 {
        let q = [2, 3, 4][case % 3];
        qpascal(&random_rows(&mut rng), q).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn random_matrix_codes_up_to_six(n in 4usize..=6, m in 1usize..=3, k_frac in 0.1f64..0.9, seed in any::<u64>()) {
        let k = ((m * n) as f64 * k_frac).round().max(1.0) as usize;
        prop_assume!(k <= 10);
        let c = random_matrix_code(n, m, k, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qpm = c.induced_qpm().unwrap();
        Prepared::new(&qpm).sampled(12, &mut rng).map_err(TestCaseError::fail)?;
        code_sampled(&c, 12, &mut rng).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn random_vector_codes(n in 3usize..=5, k in 1usize..=3, seed in any::<u64>()) {
        prop_assume!(k < n);
        let c = random_vector_code(n, k, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Prepared::new(&c.induced_qpm().unwrap()).sampled(12, &mut rng).map_err(TestCaseError::fail)?;
        code_sampled(&c, 12, &mut rng).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn vamos_six_dimensional_restrictions(drop in proptest::sample::subsequence((0..8usize).collect::<Vec<_>>(), 2), seed in any::<u64>()) {
        let cols: Vec<usize> = (0..8).filter(|c| !drop.contains(c)).collect();
        let m = vamos_restricted(&cols);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Prepared::new(&m).sampled(12, &mut rng).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn qpascal_rows(rows in proptest::collection::btree_set(0usize..14, 1..=5), q in 2u64..=5) {
        let rows: Vec<usize> = rows.into_iter().collect();
        qpascal(&rows, q).map_err(TestCaseError::fail)?;
    }
}
