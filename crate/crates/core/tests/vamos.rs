//! The Vámos q-matroid on F_2^8.

use std::time::Instant;

use qpoly::charpoly::{char_poly, ContractionTable};
use qpoly::field::GaloisField;
use qpoly::qpm::QPolymatroid;

#[test]
fn char_poly_of_vamos() {
    let start = Instant::now();
    let m = QPolymatroid::vamos(GaloisField::gf(2).unwrap()).unwrap();
    let p = char_poly(&m).unwrap();
    assert_eq!(p.to_string(), "z^4 - 255z^3 + 21590z^2 - 776920z + 755584");
    eprintln!("vamos char_poly {:?}", start.elapsed());
    assert!(start.elapsed().as_secs() <= 60);
}

#[test]
fn vamos_tables() {
    let m = QPolymatroid::vamos(GaloisField::gf(2).unwrap()).unwrap();
    let t = Instant::now();
    let d = m.dual();
    d.ranks().unwrap();
    eprintln!("dual {:?}", t.elapsed());
    let t = Instant::now();
    let table = ContractionTable::new(&m).unwrap();
    eprintln!("contraction table {:?}", t.elapsed());
    let w = table.weight_enumerator();
    assert_eq!(w.get(0).to_string(), "1");
    let t = Instant::now();
    let _ = ContractionTable::new(&d).unwrap();
    eprintln!("dual contraction table {:?}", t.elapsed());
}
