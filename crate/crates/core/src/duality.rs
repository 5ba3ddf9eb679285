//! Duality between the contraction polynomials and weight enumerators of `M` and `M*`.
//!
//! Identities whose right side carries `z^e` with `e < 0` are compared after
//! multiplying both sides by `z^{-e}`, so everything stays in `Z[z]`.
//!
//! ```
//! use qpoly::duality::DualityContext;
//! use qpoly::field::GaloisField;
//! use qpoly::qpm::QPolymatroid;
//!
//! let u = QPolymatroid::uniform(GaloisField::gf(2).unwrap(), 2, 4).unwrap();
//! let ctx = DualityContext::new(&u).unwrap();
//! assert!(ctx.macwilliams_all().iter().all(|c| c.holds));
//! ```

use std::fmt::Debug;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charpoly::{interval_poly, ContractionTable, WeightEnumerator};
use crate::gaussian::{mobius_gap_i128, GaussianTable};
use crate::lattice::{shared_catalog, AmbientSpace, LatticeIndex, Subspace};
use crate::poly::{Accum, IntPoly};
use crate::qpm::{shared_chart, QPolymatroid, QpmError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualityError {
    #[error(transparent)]
    Qpm(#[from] QpmError),
    #[error("withheld index {0} is outside 1..={1}")]
    BadIndex(usize, usize),
    #[error("withheld indices are not distinct")]
    RepeatedIndex,
    #[error("q-Pascal minor is singular")]
    SingularMinor,
    #[error("known values are inconsistent: {0}")]
    InconsistentKnowns(String),
    #[error("missing known value: {0}")]
    MissingKnown(String),
}

/// Both sides of a polynomial identity after clearing negative powers of `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub lhs: IntPoly,
    pub rhs: IntPoly,
    /// Power of `z` multiplied onto both sides.
    pub shift: u32,
    pub holds: bool,
}

impl IdentityCheck {
    /// Compares `lhs` with `z^exponent · rhs`.
    #[must_use]
    pub fn laurent(lhs: IntPoly, rhs: IntPoly, exponent: i64) -> Self {
        let (lhs, rhs, shift) = if exponent >= 0 {
            (lhs, rhs.shift(exponent as usize), 0)
        } else {
            (lhs.shift(exponent.unsigned_abs() as usize), rhs, exponent.unsigned_abs() as u32)
        };
        let holds = lhs == rhs;
        IdentityCheck { lhs, rhs, shift, holds }
    }
}

/// Outcome of checking an identity at every subspace.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub checked: u64,
    pub failures: u64,
    /// Chart index of the first failing subspace with its two sides.
    pub first_failure: Option<(u64, IdentityCheck)>,
}

impl SweepReport {
    #[must_use]
    pub fn is_ok(&self) -> bool {
        self.failures == 0
    }
}

struct DownSums {
    primal: Vec<i128>,
    dual: Vec<i128>,
}

/// Tables shared by the duality checks of one q-polymatroid and its dual.
pub struct DualityContext {
    primal: QPolymatroid,
    dual: QPolymatroid,
    primal_table: ContractionTable,
    dual_table: ContractionTable,
    index: Arc<LatticeIndex>,
    perp: Arc<Vec<u32>>,
    catalogs: Vec<Arc<Vec<Vec<Subspace>>>>,
    coeff_charts: Vec<Arc<AmbientSpace>>,
    down: OnceLock<DownSums>,
}

impl DualityContext {
    pub fn new(m: &QPolymatroid) -> Result<Self, DualityError> {
        let dual = m.dual();
        let primal_table = ContractionTable::new(m)?;
        let dual_table = ContractionTable::new(&dual)?;
        let index = m.index()?;
        let perp = m.perp_indices()?;
        let q = m.q();
        let catalogs = (0..=m.dim()).map(|d| shared_catalog(q, d)).collect::<Result<Vec<_>, _>>().map_err(QpmError::from)?;
        let coeff_charts = (0..=m.dim()).map(|d| shared_chart(q, d)).collect();
        Ok(DualityContext {
            primal: m.clone(),
            dual,
            primal_table,
            dual_table,
            index,
            perp,
            catalogs,
            coeff_charts,
            down: OnceLock::new(),
        })
    }

    #[must_use]
    pub fn primal(&self) -> &QPolymatroid {
        &self.primal
    }

    #[must_use]
    pub fn dual(&self) -> &QPolymatroid {
        &self.dual
    }

    #[must_use]
    pub fn primal_table(&self) -> &ContractionTable {
        &self.primal_table
    }

    #[must_use]
    pub fn dual_table(&self) -> &ContractionTable {
        &self.dual_table
    }

    #[must_use]
    pub fn primal_enumerator(&self) -> WeightEnumerator {
        self.primal_table.weight_enumerator()
    }

    #[must_use]
    pub fn dual_enumerator(&self) -> WeightEnumerator {
        self.dual_table.weight_enumerator()
    }

    fn n(&self) -> usize {
        self.primal.dim()
    }

    fn rank(&self) -> i64 {
        self.primal.full_rank()
    }

    fn r(&self) -> i64 {
        i64::from(self.primal.r())
    }

    /// Visits the chart index of every subspace of `y`, with its dimension.
    fn for_each_below(&self, y: &Subspace, mut f: impl FnMut(usize, u64)) {
        let k = y.dim();
        let chart = self.primal.chart();
        for (j, layer) in self.catalogs[k].iter().enumerate() {
            for c in layer {
                f(j, self.index.index(&chart.map_through(&self.coeff_charts[k], c, y)));
            }
        }
    }

    fn down_sums(&self) -> &DownSums {
        self.down.get_or_init(|| {
            let total = self.index.total() as usize;
            let (sp, sd) = (self.primal_table.stride(), self.dual_table.stride());
            let mut primal = vec![0i128; total * sp];
            let mut dual = vec![0i128; total * sd];
            const CHUNK: usize = 256;
            primal.par_chunks_mut(sp * CHUNK).zip(dual.par_chunks_mut(sd * CHUNK)).enumerate().for_each(|(c, (pc, dc))| {
                for off in 0..pc.len() / sp {
                    let u = self.index.unrank((c * CHUNK + off) as u64);
                    let (prow, drow) = (&mut pc[off * sp..(off + 1) * sp], &mut dc[off * sd..(off + 1) * sd]);
                    self.for_each_below(&u, |_, a| {
                        prow.iter_mut().zip(self.primal_table.dot_row(a)).for_each(|(x, v)| *x += v);
                        drow.iter_mut().zip(self.dual_table.dot_row(a)).for_each(|(x, v)| *x += v);
                    });
                }
            });
            DownSums { primal, dual }
        })
    }

    /// `Σ_{A <= U} p(M*.A)` against `z^{r dim U - rank(E)} Σ_{A <= U^⊥} p(M.A)`,
    /// each contraction polynomial summed directly over its interval.
    pub fn down_sum_identity(&self, u: &Subspace) -> Result<IdentityCheck, DualityError> {
        let chart = self.primal.chart();
        let u = self.primal.frame().to_chart(u).map_err(QpmError::from)?;
        let side = |m: &QPolymatroid, top: &Subspace| -> Result<IntPoly, DualityError> {
            let mut acc = IntPoly::zero();
            for a in chart.interval(&chart.zero(), top, None).map_err(QpmError::from)? {
                acc += &interval_poly(m, &chart.perp(&a))?;
            }
            Ok(acc)
        };
        let lhs = side(&self.dual, &u)?;
        let rhs = side(&self.primal, &chart.perp(&u))?;
        Ok(IdentityCheck::laurent(lhs, rhs, self.r() * u.dim() as i64 - self.rank()))
    }

    /// [`Self::down_sum_identity`] at every subspace, from the contraction tables.
    #[must_use]
    pub fn down_sum_identity_all(&self) -> SweepReport {
        let down = self.down_sums();
        let (sp, sd) = (self.primal_table.stride(), self.dual_table.stride());
        let mut report = SweepReport { checked: 0, failures: 0, first_failure: None };
        for u in 0..self.index.total() {
            let up = self.perp[u as usize] as usize;
            let lhs = IntPoly::from_i128(&down.dual[u as usize * sd..(u as usize + 1) * sd]);
            let rhs = IntPoly::from_i128(&down.primal[up * sp..(up + 1) * sp]);
            let check = IdentityCheck::laurent(lhs, rhs, self.r() * self.index.dim_of(u) as i64 - self.rank());
            record(&mut report, u, check);
        }
        report
    }

    /// `z^{rank(E)} p(M*.U)` as the sum over all `V` of `p(M.V)` times a polynomial in
    /// `dim(U ∩ V^⊥)`.
    pub fn dual_contraction_poly(&self, u: &Subspace) -> Result<IntPoly, DualityError> {
        let chart = self.primal.chart();
        let u = self.primal.frame().to_chart(u).map_err(QpmError::from)?;
        let k = u.dim();
        let stride = self.primal_table.stride();
        let mut grouped = vec![vec![0i128; stride]; k + 1];
        for v in 0..self.index.total() {
            let vp = self.index.unrank(self.perp[v as usize] as u64);
            let c = k + vp.dim() - chart.sum_dim(&u, &vp);
            grouped[c].iter_mut().zip(self.primal_table.dot_row(v)).for_each(|(x, y)| *x += y);
        }
        let q = u64::from(self.primal.q());
        let gauss = GaussianTable::new(q, k);
        let r = self.primal.r() as usize;
        let mut out = IntPoly::zero();
        for (c, sum) in grouped.iter().enumerate() {
            let mut inner = vec![BigInt::zero(); r * c + 1];
            for j in 0..=c {
                let mu = crate::gaussian::mobius_gap(k - j, q);
                inner[j * r] += gauss.get(c, j) * mu;
            }
            out += &(IntPoly::new(inner) * IntPoly::from_i128(sum));
        }
        Ok(out)
    }

    /// `z^{rank(E)} p(M*.U)` computed directly on the dual, against [`Self::dual_contraction_poly`].
    pub fn dual_contraction_identity(&self, u: &Subspace) -> Result<IdentityCheck, DualityError> {
        let chart = self.primal.chart();
        let uc = self.primal.frame().to_chart(u).map_err(QpmError::from)?;
        let direct = interval_poly(&self.dual, &chart.perp(&uc))?;
        Ok(IdentityCheck::laurent(self.dual_contraction_poly(u)?, direct, self.rank()))
    }

    /// At every `U`: `z^{rank(E)} p(M*.U)` against `Σ_{A <= U} μ(A, U) z^{r dim A} Σ_{V <= A^⊥} p(M.V)`.
    #[must_use]
    pub fn dual_contraction_identity_all(&self) -> SweepReport {
        let down = self.down_sums();
        let sp = self.primal_table.stride();
        let r = self.primal.r() as usize;
        let rank = self.rank() as usize;
        let width = r * self.n() + sp;
        let q = u64::from(self.primal.q());
        let mus: Vec<i128> = (0..=self.n()).map(|g| mobius_gap_i128(g, q)).collect();
        let total = self.index.total();
        let chunks: Vec<(u64, u64)> = (0..total).step_by(256).map(|s| (s, (s + 256).min(total))).collect();
        let parts: Vec<SweepReport> = chunks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut report = SweepReport { checked: 0, failures: 0, first_failure: None };
                let mut acc = Accum::new(width);
                for u in lo..hi {
                    acc.clear();
                    let us = self.index.unrank(u);
                    let k = us.dim();
                    self.for_each_below(&us, |j, a| {
                        let ap = self.perp[a as usize] as usize;
                        acc.add_scaled(&down.primal[ap * sp..(ap + 1) * sp], mus[k - j], r * j);
                    });
                    let direct = IntPoly::from_i128(self.dual_table.dot_row(u));
                    let check = IdentityCheck::laurent(acc.to_poly(), direct, rank as i64);
                    record(&mut report, u, check);
                }
                report
            })
            .collect();
        merge(parts)
    }

    /// `Σ_{i<=n-s} [n-i, s] A_M(i)` against `z^{rank(E) - rs} Σ_{i<=s} [n-i, s-i] A_{M*}(i)`.
    #[must_use]
    pub fn macwilliams(&self, s: usize) -> IdentityCheck {
        macwilliams_sides(
            &self.primal_enumerator(),
            &self.dual_enumerator(),
            self.n(),
            u64::from(self.primal.q()),
            self.r(),
            self.rank(),
            s,
        )
    }

    #[must_use]
    pub fn macwilliams_all(&self) -> Vec<IdentityCheck> {
        let (a, b) = (self.primal_enumerator(), self.dual_enumerator());
        let q = u64::from(self.primal.q());
        (0..=self.n()).into_par_iter().map(|s| macwilliams_sides(&a, &b, self.n(), q, self.r(), self.rank(), s)).collect()
    }
}

fn record(report: &mut SweepReport, u: u64, check: IdentityCheck) {
    report.checked += 1;
    if !check.holds {
        report.failures += 1;
        if report.first_failure.is_none() {
            report.first_failure = Some((u, check));
        }
    }
}

fn merge(parts: Vec<SweepReport>) -> SweepReport {
    let mut out = SweepReport { checked: 0, failures: 0, first_failure: None };
    for p in parts {
        out.checked += p.checked;
        out.failures += p.failures;
        if out.first_failure.is_none() {
            out.first_failure = p.first_failure;
        }
    }
    out
}

/// Both sides of the weight-enumerator identity at `s` for given enumerators.
#[must_use]
pub fn macwilliams_sides(primal: &WeightEnumerator, dual: &WeightEnumerator, n: usize, q: u64, r: i64, rank: i64, s: usize) -> IdentityCheck {
    let gauss = GaussianTable::new(q, n);
    let mut lhs = IntPoly::zero();
    for i in 0..=n - s {
        lhs += &primal.get(i).scale(&gauss.get(n - i, s));
    }
    let mut rhs = IntPoly::zero();
    for i in 0..=s {
        rhs += &dual.get(i).scale(&gauss.get(n - i, s - i));
    }
    IdentityCheck::laurent(lhs, rhs, rank - r * s as i64)
}

/// Determinant by fraction-free elimination.
#[must_use]
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// The matrix `([r_i, j-1]_q)` with `1 <= i, j <= len`.
#[must_use]
pub fn qpascal_matrix(rows: &[usize], q: u64) -> Vec<Vec<BigInt>> {
    let max = rows.iter().copied().max().unwrap_or(0).max(rows.len());
    let gauss = GaussianTable::new(q, max);
    rows.iter().map(|&r| (0..rows.len()).map(|j| gauss.get(r, j)).collect()).collect()
}

/// `det([r_i, j-1]_q)` by elimination.
#[must_use]
pub fn qpascal_det(rows: &[usize], q: u64) -> BigInt {
    bareiss_det(qpascal_matrix(rows, q))
}

/// `q^{C(n,2)} Π_{i<j} (q^{r_j} - q^{r_i}) / (q^j - q^i)`.
#[must_use]
pub fn qpascal_det_closed_form(rows: &[usize], q: u64) -> BigInt {
    let n = rows.len();
    let qb = BigInt::from(q);
    let pw = |e: usize| qb.pow(e as u32);
    let mut num = pw(n * n.saturating_sub(1) / 2);
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= pw(rows[j]) - pw(rows[i]);
            den *= pw(j + 1) - pw(i + 1);
        }
    }
    let (quo, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "q-Pascal determinant is an integer");
    quo
}

/// The coefficient ring of a weight enumerator: polynomials in `z`, or their values at `z = θ`.
pub trait EnumeratorRing {
    type Value: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn scale(&self, a: &Self::Value, c: &BigInt) -> Self::Value;
    fn div_exact(&self, a: &Self::Value, c: &BigInt) -> Option<Self::Value>;
    /// Multiplication by `z^k`, when the result stays in the ring.
    fn shift(&self, a: &Self::Value, k: i64) -> Option<Self::Value>;
}

/// `Z[z]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Symbolic;

impl EnumeratorRing for Symbolic {
    type Value = IntPoly;

    fn zero(&self) -> IntPoly {
        IntPoly::zero()
    }

    fn one(&self) -> IntPoly {
        IntPoly::one()
    }

    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a + b
    }

    fn sub(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a - b
    }

    fn scale(&self, a: &IntPoly, c: &BigInt) -> IntPoly {
        a.scale(c)
    }

    fn div_exact(&self, a: &IntPoly, c: &BigInt) -> Option<IntPoly> {
        a.div_exact(c)
    }

    fn shift(&self, a: &IntPoly, k: i64) -> Option<IntPoly> {
        a.shift_signed(k)
    }
}

/// Integers, with `z` evaluated at `θ`.
#[derive(Debug, Clone)]
pub struct AtTheta(pub BigInt);

impl EnumeratorRing for AtTheta {
    type Value = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn scale(&self, a: &BigInt, c: &BigInt) -> BigInt {
        a * c
    }

    fn div_exact(&self, a: &BigInt, c: &BigInt) -> Option<BigInt> {
        let (quo, rem) = a.div_rem(c);
        rem.is_zero().then_some(quo)
    }

    fn shift(&self, a: &BigInt, k: i64) -> Option<BigInt> {
        let p = self.0.pow(k.unsigned_abs() as u32);
        if k >= 0 {
            Some(a * p)
        } else {
            self.div_exact(a, &p)
        }
    }
}

/// Known entries of the two weight enumerators, with `A_M(j)` withheld for `j ∈ S`.
#[derive(Debug, Clone)]
pub struct RecoveryProblem<V> {
    pub n: usize,
    pub q: u64,
    pub r: u32,
    /// `rank(E)` of the primal.
    pub rank: i64,
    pub withheld: Vec<usize>,
    /// `A_M(j)` for `0 <= j <= n`; `None` exactly at the withheld indices.
    pub primal: Vec<Option<V>>,
    /// `A_{M*}(i)` for `0 <= i < |S|`.
    pub dual_prefix: Vec<V>,
}

impl<V: Clone> RecoveryProblem<V> {
    /// Hides the withheld entries of two complete enumerators.
    #[must_use]
    pub fn withhold(n: usize, q: u64, r: u32, rank: i64, primal: &[V], dual: &[V], withheld: &[usize]) -> Self {
        RecoveryProblem {
            n,
            q,
            r,
            rank,
            withheld: withheld.to_vec(),
            primal: primal.iter().enumerate().map(|(j, v)| (!withheld.contains(&j)).then(|| v.clone())).collect(),
            dual_prefix: dual.iter().take(withheld.len()).cloned().collect(),
        }
    }
}

/// Both enumerators in full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovered<V> {
    pub primal: Vec<V>,
    pub dual: Vec<V>,
}

/// Solves for the withheld `A_M(j)`, then obtains every `A_{M*}(i)` from the weight-enumerator identity.
pub fn recover_enumerators<R: EnumeratorRing>(ring: &R, p: &RecoveryProblem<R::Value>) -> Result<Recovered<R::Value>, DualityError> {
    let n = p.n;
    let t = p.withheld.len();
    for (i, &j) in p.withheld.iter().enumerate() {
        if j == 0 || j > n {
            return Err(DualityError::BadIndex(j, n));
        }
        if p.withheld[..i].contains(&j) {
            return Err(DualityError::RepeatedIndex);
        }
    }
    if p.primal.len() != n + 1 {
        return Err(DualityError::MissingKnown(format!("expected {} primal entries", n + 1)));
    }
    for j in 0..=n {
        if !p.withheld.contains(&j) && p.primal[j].is_none() {
            return Err(DualityError::MissingKnown(format!("A_M({j})")));
        }
    }
    if p.dual_prefix.len() < t {
        return Err(DualityError::MissingKnown(format!("A_M*(i) for i < {t}")));
    }
    if p.primal[0].as_ref().is_some_and(|v| *v != ring.one()) || (t > 0 && p.dual_prefix[0] != ring.one()) {
        return Err(DualityError::InconsistentKnowns("the dimension-zero entries must be 1".into()));
    }
    let gauss = GaussianTable::new(p.q, n);
    let r = i64::from(p.r);
    let shift = |v: &R::Value, k: i64, what: &str| {
        ring.shift(v, k).ok_or_else(|| DualityError::InconsistentKnowns(format!("{what} is not divisible by z^{}", -k)))
    };

    let mut matrix: Vec<Vec<BigInt>> = Vec::with_capacity(t);
    let mut rhs: Vec<R::Value> = Vec::with_capacity(t);
    for s in 0..t {
        matrix.push(p.withheld.iter().map(|&j| gauss.get(n - j, s)).collect());
        let mut dual_side = ring.zero();
        for i in 0..=s {
            dual_side = ring.add(&dual_side, &ring.scale(&p.dual_prefix[i], &gauss.get(n - i, s - i)));
        }
        let mut b = shift(&dual_side, p.rank - r * s as i64, "a dual-side sum")?;
        for (i, v) in p.primal.iter().enumerate().take(n - s + 1) {
            if let Some(v) = v {
                b = ring.sub(&b, &ring.scale(v, &gauss.get(n - i, s)));
            }
        }
        rhs.push(b);
    }
    let solved = solve_exact(ring, matrix, rhs)?;

    let mut primal: Vec<R::Value> = p.primal.iter().map(|v| v.clone().unwrap_or_else(|| ring.zero())).collect();
    for (&j, v) in p.withheld.iter().zip(solved) {
        primal[j] = v;
    }
    let mut dual: Vec<R::Value> = p.dual_prefix[..t].to_vec();
    for s in t..=n {
        let mut lhs = ring.zero();
        for i in 0..=n - s {
            lhs = ring.add(&lhs, &ring.scale(&primal[i], &gauss.get(n - i, s)));
        }
        let mut v = shift(&lhs, r * s as i64 - p.rank, "a primal-side sum")?;
        for (i, d) in dual.iter().enumerate() {
            v = ring.sub(&v, &ring.scale(d, &gauss.get(n - i, s - i)));
        }
        dual.push(v);
    }
    Ok(Recovered { primal, dual })
}

/// `A_{M*}` from `A_M` alone.
pub fn dual_enumerator<R: EnumeratorRing>(ring: &R, n: usize, q: u64, r: u32, rank: i64, primal: &[R::Value]) -> Result<Vec<R::Value>, DualityError> {
    let p = RecoveryProblem { n, q, r, rank, withheld: Vec::new(), primal: primal.iter().cloned().map(Some).collect(), dual_prefix: Vec::new() };
    Ok(recover_enumerators(ring, &p)?.dual)
}

/// Rank distribution of the dual code from that of the code, with `z = θ`.
///
/// Matrix codes of `F_q`-dimension `k` use `r = m`, `rank = k`, `θ = q`; vector codes of
/// `F_{q^m}`-dimension `k` use `r = 1`, `rank = k`, `θ = q^m`.
pub fn dual_weight_distribution(w: &[BigInt], q: u64, r: u32, rank: i64, theta: &BigInt) -> Result<Vec<BigInt>, DualityError> {
    dual_enumerator(&AtTheta(theta.clone()), w.len() - 1, q, r, rank, w)
}

/// Fraction-free elimination on an integer matrix with right-hand sides in the ring, then exact back-substitution.
fn solve_exact<R: EnumeratorRing>(ring: &R, mut a: Vec<Vec<BigInt>>, mut b: Vec<R::Value>) -> Result<Vec<R::Value>, DualityError> {
    let n = a.len();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let i = (k + 1..n).find(|&i| !a[i][k].is_zero()).ok_or(DualityError::SingularMinor)?;
            a.swap(k, i);
            b.swap(k, i);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
            let bi = ring.sub(&ring.scale(&b[i], &a[k][k]), &ring.scale(&b[k], &a[i][k]));
            b[i] = ring.div_exact(&bi, &prev).ok_or_else(|| DualityError::InconsistentKnowns("elimination left a remainder".into()))?;
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x: Vec<R::Value> = vec![ring.zero(); n];
    for k in (0..n).rev() {
        let mut v = b[k].clone();
        for j in k + 1..n {
            v = ring.sub(&v, &ring.scale(&x[j], &a[k][j]));
        }
        let d = a[k][k].abs();
        let v = if a[k][k].is_negative() { ring.scale(&v, &-BigInt::one()) } else { v };
        x[k] = ring
            .div_exact(&v, &d)
            .ok_or_else(|| DualityError::InconsistentKnowns("withheld entries are not integral".into()))?;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaloisField;

    #[test]
    fn qpascal_examples() {
        assert_eq!(qpascal_det(&[5], 2), BigInt::one());
        assert_eq!(qpascal_det(&[1, 2], 2), BigInt::from(2));
        assert_eq!(qpascal_det_closed_form(&[1, 2], 2), BigInt::from(2));
        assert!(qpascal_det(&[3, 1, 3], 3).is_zero());
        assert!(qpascal_det_closed_form(&[3, 1, 3], 3).is_zero());
    }

    #[test]
    fn uniform_checks() {
        let u = QPolymatroid::uniform(GaloisField::gf(2).unwrap(), 2, 4).unwrap();
        let ctx = DualityContext::new(&u).unwrap();
        assert!(ctx.down_sum_identity_all().is_ok());
        assert!(ctx.dual_contraction_identity_all().is_ok());
        for x in u.chart().enumerate_subspaces(2, &Default::default()).unwrap() {
            assert!(ctx.down_sum_identity(&x).unwrap().holds);
            assert!(ctx.dual_contraction_identity(&x).unwrap().holds);
        }
        let zero = u.chart().zero();
        assert_eq!(ctx.dual_contraction_poly(&zero).unwrap(), IntPoly::monomial(1, 2));
        let a = ctx.primal_enumerator().entries;
        let b = ctx.dual_enumerator().entries;
        let p = RecoveryProblem::withhold(4, 2, 1, 2, &a, &b, &[2, 4]);
        let got = recover_enumerators(&Symbolic, &p).unwrap();
        assert_eq!((got.primal, got.dual), (a, b));
    }
}
