//! Identity checks shared by the property tests and the acceptance run.
//!
//! Every check returns `Err` with a readable description of the first failure.
//! The drivers count the individual cases they examined.

#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use qpoly::charpoly::{char_poly, char_poly_contraction, char_poly_quotient, weight_enumerator, weight_enumerator_of_contraction};
use qpoly::codes::Code;
use qpoly::duality::{qpascal_det, qpascal_det_closed_form};
use qpoly::field::GaloisField;
use qpoly::gaussian::{mobius_gap, qbin};
use qpoly::lattice::{AmbientSpace, Constraints, LatticeIndex, Subspace};
use qpoly::poly::IntPoly;
use qpoly::qpm::QPolymatroid;

pub type Check = Result<(), String>;

fn fail<T>(msg: String) -> Result<T, String> {
    Err(msg)
}

fn e_(x: impl std::fmt::Display) -> String {
    x.to_string()
}

/// Standalone copy on the full lattice of its chart, so restrictions can be treated like any other instance.
pub fn standalone(m: &QPolymatroid) -> QPolymatroid {
    let ranks = m.ranks().unwrap().iter().map(|&x| i64::from(x)).collect();
    let chart = AmbientSpace::new(m.chart().field().clone(), m.dim()).unwrap();
    QPolymatroid::from_table(chart, m.r(), ranks).unwrap()
}

pub fn all_spaces(e: &AmbientSpace) -> Vec<Subspace> {
    e.interval(&e.zero(), &e.full(), None).unwrap()
}

pub fn random_space(e: &AmbientSpace, rng: &mut impl Rng) -> Subspace {
    let idx = LatticeIndex::new(e.q(), e.n(), u64::MAX).unwrap();
    idx.unrank(rng.gen_range(0..idx.total()))
}

fn ambient(m: &QPolymatroid) -> Arc<AmbientSpace> {
    assert!(m.frame().bottom().is_zero() && m.dim() == m.frame().outer().n(), "checks expect a q-polymatroid on the full lattice");
    m.frame().outer().clone()
}

fn ell(m: &QPolymatroid, a: &Subspace) -> i64 {
    m.full_rank() - m.rank(a).unwrap()
}

fn z_power_minus_one(k: i64) -> IntPoly {
    &IntPoly::monomial(1, k as usize) - &IntPoly::one()
}

// ---- lattice identities ----

/// Alternating sum against the closed count of `k`-spaces containing an `i`-space and missing a `j`-space.
pub fn counting_formula(n: usize, i: usize, j: usize, k: usize, q: u64) -> Check {
    let mut alt = BigInt::zero();
    for s in 0..=j {
        if k < i + s || n < i + s {
            continue;
        }
        let sign = if s % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        alt += sign * BigInt::from(q).pow((s * s.saturating_sub(1) / 2) as u32) * qbin(j, s, q) * qbin(n - i - s, k - i - s, q);
    }
    let closed = BigInt::from(q).pow((j * (k - i)) as u32) * qbin(n - i - j, k - i, q);
    if alt != closed {
        return fail(format!("n={n} i={i} j={j} k={k} q={q}: alternating {alt}, closed {closed}"));
    }
    Ok(())
}

/// The closed count against direct enumeration for concrete `I`, `J`.
pub fn counting_enumerated(e: &AmbientSpace, i_space: &Subspace, j_space: &Subspace, k: usize) -> Check {
    let (n, i, j, q) = (e.n(), i_space.dim(), j_space.dim(), u64::from(e.q()));
    if e.sum_dim(i_space, j_space) != i + j || i + j > k || k > n {
        return Ok(());
    }
    let c = Constraints { contains: Some(i_space.clone()), contained_in: None, trivial_meet: Some(j_space.clone()) };
    let found = e.enumerate_subspaces(k, &c).map_err(e_)?.len();
    let closed = BigInt::from(q).pow((j * (k - i)) as u32) * qbin(n - i - j, k - i, q);
    if BigInt::from(found) != closed {
        return fail(format!("k={k}, I={:?}, J={:?}: enumerated {found}, closed {closed}", e.format_subspace(i_space), e.format_subspace(j_space)));
    }
    Ok(())
}

/// Möbius values on `[a, b]` from the defining recursion: they match the closed form and sum to zero.
pub fn mobius_interval(e: &AmbientSpace, a: &Subspace, b: &Subspace) -> Check {
    if !e.contains(b, a) {
        return Ok(());
    }
    let q = u64::from(e.q());
    let mut spaces = e.interval(a, b, None).map_err(e_)?;
    spaces.sort_by_key(Subspace::dim);
    let mut mu: Vec<BigInt> = Vec::with_capacity(spaces.len());
    for (ix, x) in spaces.iter().enumerate() {
        let v = if ix == 0 {
            BigInt::one()
        } else {
            -spaces[..ix].iter().zip(&mu).filter(|(y, _)| y.dim() < x.dim() && e.contains(x, y)).map(|(_, m)| m).sum::<BigInt>()
        };
        if v != mobius_gap(x.dim() - a.dim(), q) {
            return fail(format!("mu({:?}, {:?}) = {v}", e.format_subspace(a), e.format_subspace(x)));
        }
        mu.push(v);
    }
    let total: BigInt = mu.iter().sum();
    if a != b && !total.is_zero() {
        return fail(format!("interval sum {total} over [{:?}, {:?}]", e.format_subspace(a), e.format_subspace(b)));
    }
    Ok(())
}

// ---- q-polymatroid identities ----

/// `rank_{M*/T}(A) = rank_{(M|T^⊥)*}(φ(A))` with `φ(A)` the complement of `A^⊥` inside `T^⊥`.
pub fn dual_contraction_phi(m: &QPolymatroid, t: &Subspace, a: &Subspace) -> Check {
    let e = ambient(m);
    if !e.contains(a, t) {
        return Ok(());
    }
    let tp = m.perp(t).map_err(e_)?;
    let lhs = m.dual().contract(t).map_err(e_)?.rank(a).map_err(e_)?;
    let restricted = m.restrict(&tp).map_err(e_)?;
    let ap = m.perp(a).map_err(e_)?;
    let phi = restricted.perp(&ap).map_err(e_)?;
    let rhs = restricted.dual().rank(&phi).map_err(e_)?;
    if lhs != rhs {
        return fail(format!("T={:?}, A={:?}: {lhs} vs {rhs}", e.format_subspace(t), e.format_subspace(a)));
    }
    Ok(())
}

/// `p(M|T^⊥ / W^⊥) = Σ_{A + T = W} p(M.A)` for `T <= W` independent in `M*`.
pub fn restricted_quotient_sum(m: &QPolymatroid, dual: &QPolymatroid, w: &Subspace, t: &Subspace) -> Check {
    let e = ambient(m);
    if !e.contains(w, t) || !dual.is_independent(t).map_err(e_)? {
        return Ok(());
    }
    let tp = m.perp(t).map_err(e_)?;
    let wp = m.perp(w).map_err(e_)?;
    let lhs = char_poly(&m.restrict(&tp).map_err(e_)?.contract(&wp).map_err(e_)?).map_err(e_)?;
    let mut rhs = IntPoly::zero();
    for a in e.interval(&e.zero(), w, None).map_err(e_)? {
        if e.sum(&a, t) == *w {
            rhs += &char_poly_contraction(m, &a).map_err(e_)?;
        }
    }
    if lhs != rhs {
        return fail(format!("W={:?}, T={:?}: {lhs} vs {rhs}", e.format_subspace(w), e.format_subspace(t)));
    }
    Ok(())
}

/// `T` is independent in `M*` exactly when `ℓ(T^⊥) = 0`.
pub fn independence_vs_ell(m: &QPolymatroid, dual: &QPolymatroid, t: &Subspace) -> Check {
    let ind = dual.is_independent(t).map_err(e_)?;
    let l = ell(m, &m.perp(t).map_err(e_)?);
    if ind != (l == 0) {
        return fail(format!("T={:?}: independent {ind}, ell(T^perp) {l}", ambient(m).format_subspace(t)));
    }
    Ok(())
}

/// Circuits of `M*` give `z^{ℓ(T^⊥)} - 1`; nonzero independent spaces of `M*` give 0.
pub fn dual_circuit_poly(m: &QPolymatroid, dual: &QPolymatroid, dual_circuits: &HashSet<Subspace>, t: &Subspace) -> Check {
    let p = char_poly_contraction(m, t).map_err(e_)?;
    let expected = if dual_circuits.contains(t) {
        z_power_minus_one(ell(m, &m.perp(t).map_err(e_)?))
    } else if t.dim() > 0 && dual.is_independent(t).map_err(e_)? {
        IntPoly::zero()
    } else {
        return Ok(());
    };
    if p != expected {
        return fail(format!("T={:?}: p(M.T) = {p}, expected {expected}", ambient(m).format_subspace(t)));
    }
    Ok(())
}

/// For a line `e`: `p(M.e) = 0`, `rank(e^⊥) = rank(E)` and "e is not a loop of M*" agree.
pub fn loop_trichotomy(m: &QPolymatroid, dual_circuits: &HashSet<Subspace>, line: &Subspace) -> Check {
    if line.dim() != 1 {
        return Ok(());
    }
    let a = char_poly_contraction(m, line).map_err(e_)?.is_zero();
    let b = m.rank(&m.perp(line).map_err(e_)?).map_err(e_)? == m.full_rank();
    let c = !dual_circuits.contains(line);
    if a != b || b != c {
        return fail(format!("e={:?}: {a} {b} {c}", ambient(m).format_subspace(line)));
    }
    Ok(())
}

/// With `L = cl(0)` and `X^⊥ <= L`, the `z^{rank E}` coefficient of `p(M.X)` is 1 when `X^⊥ = L` and 0 otherwise;
/// a loopless q-matroid has a monic characteristic polynomial of degree `rank(E)`.
pub fn monicity(m: &QPolymatroid, x: &Subspace) -> Check {
    let e = ambient(m);
    let l = m.closure(&e.zero()).map_err(e_)?;
    let xp = m.perp(x).map_err(e_)?;
    if !e.contains(&l, &xp) {
        return Ok(());
    }
    let p = char_poly_contraction(m, x).map_err(e_)?;
    let top = m.full_rank() as usize;
    let want = i32::from(xp == l);
    if p.coeff(top) != BigInt::from(want) || p.degree().is_some_and(|d| d > top) {
        return fail(format!("X={:?}: p(M.X) = {p}", e.format_subspace(x)));
    }
    if xp == l && !p.is_monic() {
        return fail(format!("X={:?}: p(M.X) = {p} is not monic", e.format_subspace(x)));
    }
    Ok(())
}

pub fn loopless_monic(m: &QPolymatroid) -> Check {
    if !m.is_q_matroid() || !m.loops().map_err(e_)?.is_empty() {
        return Ok(());
    }
    let p = char_poly(m).map_err(e_)?;
    if !p.is_monic() || p.degree() != Some(m.full_rank() as usize) {
        return fail(format!("p(M) = {p} for a loopless q-matroid of rank {}", m.full_rank()));
    }
    Ok(())
}

/// q-matroids: a space containing a single cocircuit `C` has `p(M.X) = z - 1` if `X = C` and 0 otherwise;
/// `p(M.X) != 0` forces `X` to be the sum of the cocircuits it contains.
pub fn unique_cocircuit(m: &QPolymatroid, cocircuits: &[Subspace], x: &Subspace) -> Check {
    if !m.is_q_matroid() {
        return Ok(());
    }
    let e = ambient(m);
    let inside: Vec<&Subspace> = cocircuits.iter().filter(|c| e.contains(x, c)).collect();
    let p = char_poly_contraction(m, x).map_err(e_)?;
    if inside.len() == 1 {
        let expected = if inside[0] == x { z_power_minus_one(1) } else { IntPoly::zero() };
        if p != expected {
            return fail(format!("X={:?} with one cocircuit: p(M.X) = {p}", e.format_subspace(x)));
        }
    }
    if !p.is_zero() {
        let span = inside.iter().fold(e.zero(), |acc, c| e.sum(&acc, c));
        if span != *x {
            return fail(format!("X={:?}: p(M.X) = {p} but X is not a sum of cocircuits", e.format_subspace(x)));
        }
    }
    Ok(())
}

/// Everything that only needs `M`, its dual and one or two subspaces.
pub struct Prepared {
    pub m: QPolymatroid,
    pub dual: QPolymatroid,
    pub dual_circuits: HashSet<Subspace>,
    pub cocircuits: Vec<Subspace>,
    pub e: Arc<AmbientSpace>,
}

impl Prepared {
    pub fn new(m: &QPolymatroid) -> Self {
        let e = ambient(m);
        let dual = m.dual();
        let cocircuits = dual.circuits().unwrap();
        Prepared { m: m.clone(), dual, dual_circuits: cocircuits.iter().cloned().collect(), cocircuits, e }
    }

    /// Checks that involve a single subspace; returns the number run.
    pub fn single(&self, x: &Subspace) -> Result<u64, String> {
        independence_vs_ell(&self.m, &self.dual, x)?;
        dual_circuit_poly(&self.m, &self.dual, &self.dual_circuits, x)?;
        loop_trichotomy(&self.m, &self.dual_circuits, x)?;
        monicity(&self.m, x)?;
        unique_cocircuit(&self.m, &self.cocircuits, x)?;
        Ok(5)
    }

    /// Checks that involve a pair `lower <= upper`.
    pub fn pair(&self, lower: &Subspace, upper: &Subspace) -> Result<u64, String> {
        mobius_interval(&self.e, lower, upper)?;
        dual_contraction_phi(&self.m, lower, upper)?;
        restricted_quotient_sum(&self.m, &self.dual, upper, lower)?;
        Ok(3)
    }

    pub fn exhaustive(&self) -> Result<u64, String> {
        let spaces = all_spaces(&self.e);
        let mut cases = 0;
        loopless_monic(&self.m)?;
        for x in &spaces {
            cases += self.single(x)?;
        }
        for a in &spaces {
            for b in &spaces {
                if self.e.contains(b, a) {
                    cases += self.pair(a, b)?;
                }
            }
        }
        Ok(cases)
    }

    /// `count` random single-space cases and `count` random pairs.
    pub fn sampled(&self, count: usize, rng: &mut impl Rng) -> Result<u64, String> {
        let mut cases = 0;
        loopless_monic(&self.m)?;
        for _ in 0..count {
            cases += self.single(&random_space(&self.e, rng))?;
            let b = random_space(&self.e, rng);
            let inside = self.e.interval(&self.e.zero(), &b, None).map_err(e_)?;
            let a = &inside[rng.gen_range(0..inside.len())];
            cases += self.pair(a, &b)?;
        }
        Ok(cases)
    }
}

// ---- codes ----

/// Parts (1) and (3) of the code correspondence, plus (4) over every dimension.
pub fn code_global(code: &Code) -> Result<u64, String> {
    let m = code.induced_qpm().map_err(e_)?;
    let theta = code.theta();
    if !code.dual().induced_qpm().map_err(e_)?.equals(&m.dual()).map_err(e_)? {
        return fail("the dual code does not induce the dual q-polymatroid".into());
    }
    let a = weight_enumerator(&m).map_err(e_)?.eval(&theta);
    let w = code.weight_distribution().map_err(e_)?;
    if a != w {
        return fail(format!("weight distribution {w:?} vs enumerator {a:?}"));
    }
    let e = code.ambient();
    for (i, ai) in a.iter().enumerate() {
        let all_zero = e
            .interval(&e.zero(), &e.full(), Some(i))
            .map_err(e_)?
            .iter()
            .all(|u| char_poly_contraction(&m, u).map(|p| p.eval(&theta).is_zero()).unwrap_or(false));
        if ai.is_zero() != all_zero {
            return fail(format!("A({i}) = {ai} but every p(M.U) vanishing is {all_zero}"));
        }
    }
    Ok(3)
}

/// Part (2) at `U` against the support counts, and part (5) for contraction by `U`.
pub fn code_at(code: &Code, m: &QPolymatroid, supports: &std::collections::HashMap<Subspace, u64>, u: &Subspace) -> Result<u64, String> {
    let theta = code.theta();
    let e = code.ambient();
    let up = m.perp(u).map_err(e_)?;
    let p = char_poly_quotient(m, u).map_err(e_)?.eval(&theta);
    let direct = BigInt::from(supports.get(&up).copied().unwrap_or(0));
    if p != direct {
        return fail(format!("U={:?}: p(M/U) = {p}, codewords with support U^perp {direct}", e.format_subspace(u)));
    }
    let a = weight_enumerator(m).map_err(e_)?.eval(&theta);
    let at = weight_enumerator_of_contraction(m, u).map_err(e_)?.eval(&theta);
    for (i, v) in at.iter().enumerate() {
        if a.get(i).is_some_and(Zero::is_zero) && !v.is_zero() {
            return fail(format!("U={:?}: A({i}) = 0 but A_(M/U)({i}) = {v}", e.format_subspace(u)));
        }
    }
    Ok(2)
}

pub fn code_exhaustive(code: &Code) -> Result<u64, String> {
    let m = code.induced_qpm().map_err(e_)?;
    let supports = code.support_counts().map_err(e_)?;
    let mut cases = code_global(code)?;
    for u in all_spaces(code.ambient()) {
        cases += code_at(code, &m, &supports, &u)?;
    }
    Ok(cases)
}

pub fn code_sampled(code: &Code, count: usize, rng: &mut impl Rng) -> Result<u64, String> {
    let m = code.induced_qpm().map_err(e_)?;
    let supports = code.support_counts().map_err(e_)?;
    let mut cases = code_global(code)?;
    for _ in 0..count {
        cases += code_at(code, &m, &supports, &random_space(code.ambient(), rng))?;
    }
    Ok(cases)
}

// ---- q-Pascal determinants ----

/// Bareiss elimination against the product formula on distinct sorted row indices.
pub fn qpascal(rows: &[usize], q: u64) -> Check {
    let direct = qpascal_det(rows, q);
    let closed = qpascal_det_closed_form(rows, q);
    if direct != closed {
        return fail(format!("rows {rows:?}, q={q}: elimination {direct}, product {closed}"));
    }
    if direct.is_zero() {
        return fail(format!("rows {rows:?}, q={q}: singular"));
    }
    Ok(())
}

pub fn random_rows(rng: &mut impl Rng) -> Vec<usize> {
    let len = rng.gen_range(1..=5);
    let mut rows: Vec<usize> = Vec::new();
    while rows.len() < len {
        let r = rng.gen_range(0..12);
        if !rows.contains(&r) {
            rows.push(r);
        }
    }
    rows.sort_unstable();
    rows
}

// ---- instance families ----

pub fn f2() -> Arc<GaloisField> {
    GaloisField::gf(2).unwrap()
}

/// Vámos restricted to the span of the given coordinates, as a standalone q-matroid.
pub fn vamos_restricted(cols: &[usize]) -> QPolymatroid {
    let v = QPolymatroid::vamos(f2()).unwrap();
    let t = v.frame().outer().coordinate_subspace(cols);
    standalone(&v.restrict(&t).unwrap())
}
