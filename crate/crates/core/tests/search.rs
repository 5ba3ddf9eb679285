use std::collections::{BTreeMap, HashMap, HashSet};

use qpoly::codes::{Code, Matrix, VectorCode};
use qpoly::designs::{am_check_code, verify_design};
use qpoly::field::GaloisField;
use qpoly::search::{dedupe_galois, orbit_size, run_search_with, sample_matrix, search_field, SearchConfig, SearchRecord, Verdict};

fn frobenius(f: &GaloisField, a: &Matrix) -> Matrix {
    a.iter().map(|r| r.iter().map(|&x| f.frobenius(x)).collect()).collect()
}

#[test]
fn orbit_sizes_divide_the_degree() {
    for m in [4, 5, 6] {
        let f = GaloisField::extension_default(GaloisField::gf(2).unwrap(), m).unwrap();
        let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
        for i in 0..1000 {
            let a = sample_matrix(&f, 2, 3, 77, i);
            let size = orbit_size(&f, &a);
            assert_eq!(m % size, 0, "orbit of size {size} over GF(2^{m})");
            // independent count: distinct images among the first m Frobenius powers
            let mut images = HashSet::new();
            let mut cur = a.clone();
            for _ in 0..m {
                images.insert(cur.clone());
                cur = frobenius(&f, &cur);
            }
            assert_eq!(cur, a);
            assert_eq!(images.len(), size);
            let rep = dedupe_galois(&f, &a);
            assert!(images.contains(&rep) && images.iter().all(|x| *x >= rep));
            *histogram.entry(size).or_default() += 1;
        }
        assert_eq!(histogram.values().sum::<u64>(), 1000);
        // a random 2 x 3 matrix is almost never fixed by a proper subfield automorphism
        assert!(histogram[&m] > 900, "{histogram:?}");
    }
}

fn config(workers: usize, dedupe: bool) -> SearchConfig {
    SearchConfig { q: 2, m: 4, n: 5, k: 2, t: 1, count: 600, seed: 11, workers: Some(workers), dedupe, out: None, cross_validate: 20 }
}

fn collect(cfg: &SearchConfig) -> (Vec<SearchRecord>, Vec<String>) {
    let field = search_field(cfg).unwrap();
    let mut records = Vec::new();
    let mut lines = Vec::new();
    run_search_with(cfg, |r| {
        lines.push(r.to_json(&field).to_string());
        records.push(r.clone());
    })
    .unwrap();
    (records, lines)
}

#[test]
fn records_do_not_depend_on_worker_count() {
    let (_, one) = collect(&config(1, true));
    let (_, three) = collect(&config(3, true));
    assert_eq!(one, three);
}

#[test]
fn verdicts_agree_with_a_fresh_code_report() {
    let cfg = config(1, true);
    let field = search_field(&cfg).unwrap();
    let (records, _) = collect(&cfg);
    let by_id: HashMap<u64, &SearchRecord> = records.iter().map(|r| (r.id, r)).collect();
    let mut seen = HashMap::new();
    for r in &records {
        let code = VectorCode::systematic(field.clone(), &r.a).unwrap();
        let weights = code.weight_distribution().unwrap();
        if r.verdict == Verdict::Duplicate {
            let first = by_id[&r.duplicate_of.unwrap()];
            assert_eq!(dedupe_galois(&field, &r.a), dedupe_galois(&field, &first.a));
            // conjugate codes share their weights
            assert_eq!(weights, first.weights);
            continue;
        }
        assert!(seen.insert(dedupe_galois(&field, &r.a), r.id).is_none());
        assert_eq!(weights, r.weights);
        assert_eq!(code.dual().weight_distribution().unwrap(), r.dual_weights);
        if r.d <= cfg.t {
            assert_eq!(r.verdict, Verdict::BelowDistance);
            continue;
        }
        let report = am_check_code(&Code::Vector(code), cfg.t).unwrap();
        assert_eq!(report.d, r.d);
        assert_eq!(report.dual_weights_in_range.len(), r.distinct_dual_weights);
        let expected = match (report.criterion_holds, report.mrd) {
            (false, _) => Verdict::Fail,
            (true, true) => Verdict::Trivial,
            (true, false) => Verdict::Hit,
        };
        assert_eq!(r.verdict, expected, "record {}", r.id);
        for c in &r.certificates {
            assert!(verify_design(&c.design).unwrap().is_verified());
        }
    }
}

#[test]
fn without_dedupe_nothing_is_a_duplicate() {
    let (records, _) = collect(&config(1, false));
    assert!(records.iter().all(|r| r.verdict != Verdict::Duplicate));
    let (deduped, _) = collect(&config(1, true));
    for (a, b) in records.iter().zip(&deduped) {
        assert_eq!(a.a, b.a);
        if b.verdict != Verdict::Duplicate {
            assert_eq!(a.verdict, b.verdict);
        }
    }
}
