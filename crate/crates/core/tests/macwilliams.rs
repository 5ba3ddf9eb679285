//! Duality identities and enumerator recovery on uniform, Vámos, code-induced and random matrix-code instances.

mod common;

use std::time::Instant;

use num_bigint::BigInt;
use qpoly::duality::{dual_weight_distribution, recover_enumerators, AtTheta, DualityContext, RecoveryProblem, Symbolic};
use qpoly::lattice::LatticeIndex;

fn index_subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for j in start..=n {
            cur.push(j);
            go(j + 1, n, size, cur, out);
            cur.pop();
        }
    }
    go(1, n, size, &mut cur, &mut out);
    out
}

#[test]
fn identities_hold_on_the_suite() {
    for (name, m) in common::suite() {
        let start = Instant::now();
        let ctx = DualityContext::new(&m).unwrap();
        let a = ctx.down_sum_identity_all();
        assert!(a.is_ok(), "{name}: {:?}", a.first_failure);
        let b = ctx.dual_contraction_identity_all();
        assert!(b.is_ok(), "{name}: {:?}", b.first_failure);
        assert!(ctx.macwilliams_all().iter().all(|c| c.holds), "{name}");
        let idx = LatticeIndex::new(m.q(), m.dim(), u64::MAX).unwrap();
        for k in 0..=m.dim() {
            let u = idx.unrank(idx.dim_range(k).start + (idx.dim_range(k).end - idx.dim_range(k).start) / 2);
            // The direct route visits every pair A <= U, Y >= A^⊥; keep it to small U on the 8-dim ambient.
            if m.dim() < 8 || k <= 5 {
                assert!(ctx.down_sum_identity(&u).unwrap().holds, "{name} dim {k}");
            }
            assert!(ctx.dual_contraction_identity(&u).unwrap().holds, "{name} dim {k}");
        }
        eprintln!("{name}: {:?}", start.elapsed());
    }
}

#[test]
fn recovery_round_trip() {
    for (name, m) in common::suite() {
        let ctx = DualityContext::new(&m).unwrap();
        let a = ctx.primal_enumerator().entries;
        let b = ctx.dual_enumerator().entries;
        let n = m.dim();
        for size in 1..=3 {
            for s in index_subsets(n, size) {
                let p = RecoveryProblem::withhold(n, m.q() as u64, m.r(), m.full_rank(), &a, &b, &s);
                let got = recover_enumerators(&Symbolic, &p).unwrap();
                assert_eq!(got.primal, a, "{name} {s:?}");
                assert_eq!(got.dual, b, "{name} {s:?}");
            }
        }
    }
}

#[test]
fn example_code_recovery_at_theta() {
    let c = common::example_code();
    let w = c.weight_distribution().unwrap();
    let p = RecoveryProblem::withhold(6, 2, 1, 3, &w, &w, &[3, 4, 5, 6]);
    let got = recover_enumerators(&AtTheta(BigInt::from(64)), &p).unwrap();
    assert_eq!(got.primal, w);
    assert_eq!(got.dual, w);
    assert_eq!(dual_weight_distribution(&w, 2, 1, 3, &BigInt::from(64)).unwrap(), w);
}

#[test]
fn rank_distribution_transform_matches_enumeration() {
    for code in common::random_matrix_codes() {
        let w = code.weight_distribution().unwrap();
        let direct = code.dual().weight_distribution().unwrap();
        let k = code.k() as i64;
        assert_eq!(dual_weight_distribution(&w, 2, code.m() as u32, k, &BigInt::from(2)).unwrap(), direct);
    }
}
