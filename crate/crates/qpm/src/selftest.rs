//! Reference values recomputed from scratch.

use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, ensure, Result};
use num_bigint::BigInt;

use qpoly::charpoly::{char_poly, char_poly_contraction, tally};
use qpoly::codes::Code;
use qpoly::designs::{am_check_code, verify_design, Provenance};
use qpoly::field::GaloisField;
use qpoly::io::{parse_input, Input};
use qpoly::lattice::Subspace;
use qpoly::qpm::QPolymatroid;

const EXAMPLE: &str = include_str!("../../../data/self_dual_633.json");
const CONSTANT_WEIGHT: &str = include_str!("../../../data/constant_weight.json");

const EXAMPLE_COCIRCUITS: [[&str; 3]; 9] = [
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

fn code_from(text: &str) -> Result<Code> {
    match parse_input(&serde_json::from_str(text)?, Path::new("."))? {
        Input::Code(c) => Ok(c),
        Input::Qpm(_) => Err(anyhow!("expected a code")),
    }
}

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn vamos_char_poly() -> Result<()> {
    let m = QPolymatroid::vamos(GaloisField::gf(2)?)?;
    let p = char_poly(&m)?.to_string();
    ensure!(p == "z^4 - 255z^3 + 21590z^2 - 776920z + 755584", "got {p}");
    Ok(())
}

fn example_distributions() -> Result<()> {
    let c = code_from(EXAMPLE)?;
    let expected = ints(&[1, 0, 0, 567, 37044, 142884, 81648]);
    let w = c.weight_distribution()?;
    ensure!(w == expected, "code: {w:?}");
    let dw = c.dual().weight_distribution()?;
    ensure!(dw == expected, "dual code: {dw:?}");
    Ok(())
}

fn example_char_poly_and_tally() -> Result<()> {
    let m = code_from(EXAMPLE)?.induced_qpm()?;
    let p = char_poly(&m)?.to_string();
    ensure!(p == "z^3 - 63z^2 + 1230z - 1168", "got {p}");
    let t = tally(&m)?;
    for (dim, ell, count) in [(2, 1, 651), (3, 1, 9), (3, 0, 1386), (4, 0, 651), (5, 0, 63)] {
        ensure!(t.get(dim, ell) == count, "{dim}-spaces with ell = {ell}: {}", t.get(dim, ell));
    }
    Ok(())
}

fn example_cocircuits() -> Result<()> {
    let c = code_from(EXAMPLE)?;
    let m = c.induced_qpm()?;
    let e = c.ambient().clone();
    let mut listed: Vec<Subspace> = EXAMPLE_COCIRCUITS.iter().map(|rows| e.parse_subspace(rows)).collect::<Result<_, _>>()?;
    let mut found: Vec<Subspace> = m.cocircuits()?.into_iter().filter(|x| x.dim() == 3).collect();
    listed.sort_by(|a, b| e.order(a, b));
    found.sort_by(|a, b| e.order(a, b));
    ensure!(found == listed, "{} three-dimensional cocircuits", found.len());
    for x in &listed {
        ensure!(char_poly_contraction(&m, x)?.to_string() == "z - 1");
    }
    Ok(())
}

fn example_supports() -> Result<()> {
    let counts = code_from(EXAMPLE)?.support_counts()?;
    let of_dim = |d: usize| counts.iter().filter(|(s, _)| s.dim() == d).map(|(_, &n)| n).collect::<Vec<u64>>();
    let three = of_dim(3);
    ensure!(three.len() == 9 && three.iter().all(|&n| n == 63), "3-dimensional supports: {three:?}");
    let four = of_dim(4);
    ensure!(four.len() == 588 && four.iter().all(|&n| n == 63), "{} four-dimensional supports", four.len());
    let five = of_dim(5);
    ensure!(five.len() == 63 && five.iter().all(|&n| n == 2268), "{} five-dimensional supports", five.len());
    Ok(())
}

fn constant_weight_spread() -> Result<()> {
    let c = code_from(CONSTANT_WEIGHT)?.dual();
    let report = am_check_code(&c, 1)?;
    let cert = report
        .certificates
        .iter()
        .find(|x| x.provenance == Provenance::DualMinimumWeightSupports { dim: 2 })
        .ok_or_else(|| anyhow!("no design on the minimum-weight dual supports"))?;
    ensure!(cert.design.len() == 5, "{} blocks", cert.design.len());
    ensure!(cert.lambda() == Some(&BigInt::from(1)), "lambda {:?}", cert.lambda());
    ensure!(verify_design(&cert.design)?.is_verified());
    Ok(())
}

/// Prints one line per check and returns whether all passed.
pub fn run() -> bool {
    let checks: [(&str, fn() -> Result<()>); 6] = [
        ("q-Vamos characteristic polynomial", vamos_char_poly),
        ("[6,3,3] code weight distribution and formal self-duality", example_distributions),
        ("[6,3,3] code characteristic polynomial and tally", example_char_poly_and_tally),
        ("[6,3,3] code three-dimensional cocircuits", example_cocircuits),
        ("[6,3,3] code support counts", example_supports),
        ("constant-weight code spread design", constant_weight_spread),
    ];
    let mut ok = true;
    for (name, f) in checks {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {name} ({secs:.2}s)"),
            Err(e) => {
                ok = false;
                println!("FAIL {name}: {e:#} ({secs:.2}s)");
            }
        }
    }
    ok
}
