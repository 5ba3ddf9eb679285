//! q-polymatroids and their minors.
//!
//! A [`QPolymatroid`] lives on an interval `[B, F]` of the subspace lattice of
//! some outer space `F_q^n`, described by a [`Frame`]. The whole space is the
//! interval `[0, E]`; a restriction `M|T` uses `[0, T]` and a contraction
//! `M/T` uses `[T, E]`. Each frame carries a chart: `[B, F]` is identified
//! with the subspaces of a complement `Y` of `B` in `F` via `X -> X ∩ Y`, and
//! `Y` is given coordinates. Rank tables and all bulk algorithms work in the
//! chart, so every ground lattice looks like `L(F_q^d)` to them.
//!
//! The involution `⊥` on `[B, F]` is transported from the chart, where it is
//! the perp of the form restricted to `Y` (or the coordinate dot product when
//! that restriction is degenerate).
//!
//! ```
//! use qpoly::qpm::QPolymatroid;
//! use qpoly::field::GaloisField;
//!
//! let u24 = QPolymatroid::uniform(GaloisField::gf(2).unwrap(), 2, 4).unwrap();
//! assert_eq!(u24.full_rank(), 2);
//! assert!(u24.dual().dual().equals(&u24).unwrap());
//! ```

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::GaloisField;
use crate::lattice::{shared_catalog, shared_index, AmbientSpace, LatticeError, LatticeIndex, Subspace, DEFAULT_CEILING};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QpmError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("rank table has {found} entries, expected {expected}")]
    TableSize { expected: u64, found: u64 },
    #[error("the dual has no dependent space, so there are no cocircuits")]
    NoCocircuits,
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("rank function is not a q-polymatroid rank function: {0}")]
    NotAPolymatroid(String),
}

/// Rank oracle on chart subspaces.
pub type RankFn = dyn Fn(&Subspace) -> i64 + Send + Sync;

/// An interval `[bottom, top]` of `L(F_q^n)` with its chart.
#[derive(Debug)]
pub struct Frame {
    outer: Arc<AmbientSpace>,
    bottom: Subspace,
    top: Subspace,
    basis: Subspace,
    chart: Arc<AmbientSpace>,
}

impl Frame {
    /// The whole lattice `[0, E]`.
    #[must_use]
    pub fn full(outer: Arc<AmbientSpace>) -> Arc<Self> {
        let top = outer.full();
        Self::interval(outer.clone(), outer.zero(), top).expect("0 <= E")
    }

    pub fn interval(outer: Arc<AmbientSpace>, bottom: Subspace, top: Subspace) -> Result<Arc<Self>, LatticeError> {
        outer.check(&bottom)?;
        outer.check(&top)?;
        if !outer.contains(&top, &bottom) {
            return Err(LatticeError::NotASubspaceOf);
        }
        let basis = outer.complement_in(&bottom, &top);
        let chart = outer.chart_for(&basis);
        Ok(Arc::new(Frame { outer, bottom, top, basis, chart }))
    }

    #[must_use]
    pub fn outer(&self) -> &Arc<AmbientSpace> {
        &self.outer
    }

    #[must_use]
    pub fn bottom(&self) -> &Subspace {
        &self.bottom
    }

    #[must_use]
    pub fn top(&self) -> &Subspace {
        &self.top
    }

    #[must_use]
    pub fn chart(&self) -> &Arc<AmbientSpace> {
        &self.chart
    }

    /// Dimension of the chart, `dim top - dim bottom`.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    #[must_use]
    pub fn contains(&self, x: &Subspace) -> bool {
        self.outer.check(x).is_ok() && self.outer.contains(&self.top, x) && self.outer.contains(x, &self.bottom)
    }

    pub fn to_chart(&self, x: &Subspace) -> Result<Subspace, LatticeError> {
        self.outer.check(x)?;
        if !self.contains(x) {
            return Err(LatticeError::NotASubspaceOf);
        }
        if self.bottom.is_zero() {
            return Ok(self.outer.to_coordinates(&self.chart, &self.basis, x));
        }
        let reduced: Vec<u64> = x.rows().iter().map(|&r| self.outer.reduce(&self.bottom, r)).filter(|&r| r != 0).collect();
        let coords = reduced.iter().map(|&r| self.chart.pack(&self.outer.coordinates(&self.basis, r)).expect("chart dim"));
        Ok(self.chart.canonical(coords))
    }

    #[must_use]
    pub fn from_chart(&self, z: &Subspace) -> Subspace {
        let img = self.outer.map_through(&self.chart, z, &self.basis);
        if self.bottom.is_zero() {
            img
        } else {
            self.outer.sum(&self.bottom, &img)
        }
    }

    /// The frame's involution, in outer coordinates.
    pub fn perp(&self, x: &Subspace) -> Result<Subspace, LatticeError> {
        Ok(self.from_chart(&self.chart.perp(&self.to_chart(x)?)))
    }
}

#[derive(Clone)]
enum Source {
    Table(Arc<Vec<i32>>),
    Oracle(Arc<RankFn>),
}

#[derive(Default)]
struct Memo {
    table: OnceLock<Arc<Vec<i32>>>,
    perp: OnceLock<Arc<Vec<u32>>>,
    circuits: OnceLock<Arc<Vec<u32>>>,
}

/// A `(q, r)`-polymatroid on the interval described by its [`Frame`].
#[derive(Clone)]
pub struct QPolymatroid {
    frame: Arc<Frame>,
    r: u32,
    source: Source,
    memo: Arc<Memo>,
}

impl std::fmt::Debug for QPolymatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QPolymatroid")
            .field("q", &self.q())
            .field("dim", &self.dim())
            .field("r", &self.r)
            .field("tabulated", &matches!(self.source, Source::Table(_)))
            .finish()
    }
}

/// Which polymatroid axiom failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `0 <= rank(A) <= r dim A`.
    Bounded,
    /// `A <= B` implies `rank(A) <= rank(B)`.
    Monotone,
    /// `rank(A + B) + rank(A ∩ B) <= rank(A) + rank(B)`.
    Submodular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub a: Subspace,
    pub b: Option<Subspace>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checked: u64,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    #[must_use]
    pub fn is_ok(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, Copy)]
pub enum AxiomMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// Flats or hyperplanes, with a flag for rank functions outside the q-matroid case.
#[derive(Debug, Clone)]
pub struct FlatList {
    pub spaces: Vec<Subspace>,
    /// Set when `r > 1`; closure-based notions are only standard for q-matroids.
    pub outside_qmatroid_scope: bool,
}

impl QPolymatroid {
    /// Rank oracle on subspaces of `E`.
    pub fn from_rank_fn(ambient: Arc<AmbientSpace>, r: u32, f: impl Fn(&Subspace) -> i64 + Send + Sync + 'static) -> Self {
        Self::from_source(Frame::full(ambient), r, Source::Oracle(Arc::new(f)))
    }

    /// Ranks listed in [`LatticeIndex`] order.
    pub fn from_table(ambient: Arc<AmbientSpace>, r: u32, ranks: Vec<i64>) -> Result<Self, QpmError> {
        let idx = shared_index(ambient.q(), ambient.n(), u64::MAX)?;
        if ranks.len() as u64 != idx.total() {
            return Err(QpmError::TableSize { expected: idx.total(), found: ranks.len() as u64 });
        }
        let table = ranks.into_iter().map(|x| i32::try_from(x).map_err(|_| QpmError::BadParams("rank out of range".into()))).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_source(Frame::full(ambient), r, Source::Table(Arc::new(table))))
    }

    fn from_source(frame: Arc<Frame>, r: u32, source: Source) -> Self {
        QPolymatroid { frame, r, source, memo: Arc::new(Memo::default()) }
    }

    /// The uniform q-matroid `U_{k,n}`: `rank(A) = min(dim A, k)`.
    pub fn uniform(field: Arc<GaloisField>, k: usize, n: usize) -> Result<Self, QpmError> {
        if k > n {
            return Err(QpmError::BadParams(format!("U_{{{k},{n}}} needs k <= n")));
        }
        let e = AmbientSpace::new(field, n)?;
        let m = Self::from_rank_fn(e, 1, move |a| a.dim().min(k) as i64);
        Ok(m.materialize(DEFAULT_CEILING).unwrap_or(m))
    }

    /// The q-analogue of the Vámos matroid on `F_q^8`.
    pub fn vamos(field: Arc<GaloisField>) -> Result<Self, QpmError> {
        let e = AmbientSpace::new(field, 8)?;
        let circuits: Vec<Subspace> = [[0, 1, 2, 3], [0, 1, 4, 5], [2, 3, 4, 5], [2, 3, 6, 7], [4, 5, 6, 7]]
            .iter()
            .map(|cols| e.coordinate_subspace(cols))
            .collect();
        let m = Self::from_rank_fn(e, 1, move |a| match a.dim() {
            d if d <= 3 => d as i64,
            4 if circuits.contains(a) => 3,
            _ => 4,
        });
        Ok(m.materialize(DEFAULT_CEILING).unwrap_or(m))
    }

    #[must_use]
    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    #[must_use]
    pub fn chart(&self) -> &Arc<AmbientSpace> {
        &self.frame.chart
    }

    #[must_use]
    pub fn r(&self) -> u32 {
        self.r
    }

    #[must_use]
    pub fn q(&self) -> u32 {
        self.frame.chart.q()
    }

    /// Dimension of the ground space.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    #[must_use]
    pub fn is_q_matroid(&self) -> bool {
        self.r == 1
    }

    #[must_use]
    pub fn is_tabulated(&self) -> bool {
        matches!(self.source, Source::Table(_))
    }

    pub fn index(&self) -> Result<Arc<LatticeIndex>, QpmError> {
        Ok(shared_index(self.q(), self.dim(), DEFAULT_CEILING)?)
    }

    /// Rank of a chart subspace.
    #[must_use]
    pub fn rank_chart(&self, z: &Subspace) -> i64 {
        match &self.source {
            Source::Table(t) => {
                let idx = shared_index(self.q(), self.dim(), u64::MAX).expect("tabulated lattice");
                t[idx.index(z) as usize] as i64
            }
            Source::Oracle(f) => f(z),
        }
    }

    /// Rank of an element of the ground interval, in outer coordinates.
    pub fn rank(&self, x: &Subspace) -> Result<i64, QpmError> {
        Ok(self.rank_chart(&self.frame.to_chart(x)?))
    }

    /// Rank of the top element.
    #[must_use]
    pub fn full_rank(&self) -> i64 {
        self.rank_chart(&self.frame.chart.full())
    }

    /// Dense ranks in chart index order, computed once.
    pub fn ranks(&self) -> Result<Arc<Vec<i32>>, QpmError> {
        if let Source::Table(t) = &self.source {
            return Ok(t.clone());
        }
        if let Some(t) = self.memo.table.get() {
            return Ok(t.clone());
        }
        let idx = self.index()?;
        let Source::Oracle(f) = &self.source else { unreachable!() };
        let table: Vec<i32> = idx.iter().map(|z| f(&z) as i32).collect();
        Ok(self.memo.table.get_or_init(|| Arc::new(table)).clone())
    }

    /// A tabulated copy; fails when the lattice exceeds `ceiling`.
    pub fn materialize(&self, ceiling: u64) -> Result<Self, QpmError> {
        shared_index(self.q(), self.dim(), ceiling)?;
        let table = self.ranks()?;
        Ok(QPolymatroid { frame: self.frame.clone(), r: self.r, source: Source::Table(table), memo: self.memo.clone() })
    }

    /// Index of the chart perp of every element.
    pub fn perp_indices(&self) -> Result<Arc<Vec<u32>>, QpmError> {
        if let Some(p) = self.memo.perp.get() {
            return Ok(p.clone());
        }
        let idx = self.index()?;
        let chart = self.chart();
        let perm: Vec<u32> = idx.iter().map(|z| idx.index(&chart.perp(&z)) as u32).collect();
        Ok(self.memo.perp.get_or_init(|| Arc::new(perm)).clone())
    }

    /// The frame involution applied to an outer subspace.
    pub fn perp(&self, x: &Subspace) -> Result<Subspace, QpmError> {
        Ok(self.frame.perp(x)?)
    }

    /// `rank*(A) = r dim A - rank(E) + rank(A^⊥)`.
    #[must_use]
    pub fn dual(&self) -> Self {
        let r = self.r as i64;
        let full = self.full_rank();
        if let (Ok(table), Ok(perp)) = (self.ranks(), self.perp_indices()) {
            let idx = self.index().expect("tabulated");
            let mut out = vec![0i32; table.len()];
            for k in 0..=self.dim() {
                for i in idx.dim_range(k) {
                    out[i as usize] = (r * k as i64 - full + table[perp[i as usize] as usize] as i64) as i32;
                }
            }
            return Self::from_source(self.frame.clone(), self.r, Source::Table(Arc::new(out)));
        }
        let parent = self.clone();
        let chart = self.frame.chart.clone();
        Self::from_source(
            self.frame.clone(),
            self.r,
            Source::Oracle(Arc::new(move |z| r * z.dim() as i64 - full + parent.rank_chart(&chart.perp(z)))),
        )
    }

    fn derive(&self, frame: Arc<Frame>, offset: i64) -> Result<Self, QpmError> {
        let parent = self.clone();
        let pf = self.frame.clone();
        let nf = frame.clone();
        let rank = move |z: &Subspace| parent.rank_chart(&pf.to_chart(&nf.from_chart(z)).expect("sub-interval")) - offset;
        if self.is_tabulated() {
            if let Ok(idx) = shared_index(self.q(), frame.dim(), DEFAULT_CEILING) {
                let table: Vec<i32> = idx.iter().map(|z| rank(&z) as i32).collect();
                return Ok(Self::from_source(frame, self.r, Source::Table(Arc::new(table))));
            }
        }
        Ok(Self::from_source(frame, self.r, Source::Oracle(Arc::new(rank))))
    }

    /// `M|T` on `[bottom, T]`.
    pub fn restrict(&self, t: &Subspace) -> Result<Self, QpmError> {
        if !self.frame.contains(t) {
            return Err(LatticeError::NotASubspaceOf.into());
        }
        let frame = Frame::interval(self.frame.outer.clone(), self.frame.bottom.clone(), t.clone())?;
        self.derive(frame, 0)
    }

    /// `M/T` on `[T, top]`, with `rank(X) - rank(T)`.
    pub fn contract(&self, t: &Subspace) -> Result<Self, QpmError> {
        if !self.frame.contains(t) {
            return Err(LatticeError::NotASubspaceOf.into());
        }
        let offset = self.rank(t)?;
        let frame = Frame::interval(self.frame.outer.clone(), t.clone(), self.frame.top.clone())?;
        self.derive(frame, offset)
    }

    /// `M.X = M / X^⊥`.
    pub fn contract_to(&self, x: &Subspace) -> Result<Self, QpmError> {
        self.contract(&self.perp(x)?)
    }

    /// Same frame and the same rank on every element.
    pub fn equals(&self, other: &Self) -> Result<bool, QpmError> {
        if self.r != other.r
            || self.q() != other.q()
            || self.frame.bottom != other.frame.bottom
            || self.frame.top != other.frame.top
            || self.frame.outer.n() != other.frame.outer.n()
        {
            return Ok(false);
        }
        Ok(self.ranks()? == other.ranks()?)
    }

    /// `Some(k)` when the rank is `min(dim, k)` throughout, i.e. the q-matroid is
    /// lattice-equivalent to `U_{k,n}`.
    pub fn as_uniform(&self) -> Result<Option<usize>, QpmError> {
        if self.r != 1 {
            return Ok(None);
        }
        let k = self.full_rank() as usize;
        let idx = self.index()?;
        let ranks = self.ranks()?;
        for d in 0..=self.dim() {
            if idx.dim_range(d).any(|i| ranks[i as usize] as usize != d.min(k)) {
                return Ok(None);
            }
        }
        Ok(Some(k))
    }

    /// Returns a copy whose rank at `x` is replaced by `value`.
    pub fn with_rank_at(&self, x: &Subspace, value: i64) -> Result<Self, QpmError> {
        let z = self.frame.to_chart(x)?;
        let idx = self.index()?;
        let mut table = (*self.ranks()?).clone();
        table[idx.index(&z) as usize] = value as i32;
        Ok(Self::from_source(self.frame.clone(), self.r, Source::Table(Arc::new(table))))
    }

    /// Checks the three rank axioms; a failure carries a concrete witness.
    pub fn check_axioms(&self, mode: AxiomMode) -> Result<AxiomReport, QpmError> {
        let idx = self.index()?;
        let ranks = self.ranks()?;
        let chart = self.chart().clone();
        let cat = shared_catalog(self.q(), self.dim())?;
        let all: Vec<&Subspace> = cat.iter().flatten().collect();
        let rank = |z: &Subspace| ranks[idx.index(z) as usize] as i64;
        let r = self.r as i64;
        let witness = |axiom, a: &Subspace, b: Option<&Subspace>, detail: String| AxiomViolation {
            axiom,
            a: self.frame.from_chart(a),
            b: b.map(|b| self.frame.from_chart(b)),
            detail,
        };
        let mut checked = 0u64;
        for a in &all {
            checked += 1;
            let ra = rank(a);
            if ra < 0 || ra > r * a.dim() as i64 {
                let v = witness(Axiom::Bounded, a, None, format!("rank {ra} outside [0, {}]", r * a.dim() as i64));
                return Ok(AxiomReport { checked, violation: Some(v) });
            }
        }
        let lines = &cat[1.min(self.dim())];
        let check_pair = |a: &Subspace, b: &Subspace| -> Option<AxiomViolation> {
            let s = chart.sum(a, b);
            let i = chart.intersection(a, b);
            let (ra, rb, rs, ri) = (rank(a), rank(b), rank(&s), rank(&i));
            (rs + ri > ra + rb).then(|| {
                witness(Axiom::Submodular, a, Some(b), format!("rank(A+B) + rank(A∩B) = {} > {} = rank(A) + rank(B)", rs + ri, ra + rb))
            })
        };
        match mode {
            AxiomMode::Exhaustive => {
                for a in &all {
                    for l in lines.iter().filter(|l| self.dim() > 0 && !chart.contains(a, l)) {
                        checked += 1;
                        let b = chart.sum(a, l);
                        if rank(a) > rank(&b) {
                            let v = witness(Axiom::Monotone, a, Some(&b), format!("rank(A) = {} > {} = rank(B)", rank(a), rank(&b)));
                            return Ok(AxiomReport { checked, violation: Some(v) });
                        }
                    }
                }
                for (i, a) in all.iter().enumerate() {
                    for b in &all[i + 1..] {
                        checked += 1;
                        if let Some(v) = check_pair(a, b) {
                            return Ok(AxiomReport { checked, violation: Some(v) });
                        }
                    }
                }
            }
            AxiomMode::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    checked += 1;
                    let a = all[rng.gen_range(0..all.len())];
                    let b = all[rng.gen_range(0..all.len())];
                    let s = chart.sum(a, b);
                    if rank(a) > rank(&s) {
                        let v = witness(Axiom::Monotone, a, Some(&s), format!("rank(A) = {} > {} = rank(A+B)", rank(a), rank(&s)));
                        return Ok(AxiomReport { checked, violation: Some(v) });
                    }
                    if let Some(v) = check_pair(a, b) {
                        return Ok(AxiomReport { checked, violation: Some(v) });
                    }
                }
            }
        }
        Ok(AxiomReport { checked, violation: None })
    }

    /// `rank(X) = r dim X`.
    pub fn is_independent(&self, x: &Subspace) -> Result<bool, QpmError> {
        Ok(self.rank(x)? == self.r as i64 * self.frame.to_chart(x)?.dim() as i64)
    }

    /// Chart indices of the circuits, in index order.
    pub fn circuit_indices(&self) -> Result<Arc<Vec<u32>>, QpmError> {
        if let Some(c) = self.memo.circuits.get() {
            return Ok(c.clone());
        }
        let idx = self.index()?;
        let ranks = self.ranks()?;
        let chart = self.chart().clone();
        let r = self.r as i64;
        let mut out = Vec::new();
        for d in 1..=self.dim() {
            let hyper = &shared_catalog(self.q(), d)?[d - 1];
            for (i, z) in idx.dim_range(d).zip(idx.iter_dim(d)) {
                if ranks[i as usize] as i64 == r * d as i64 {
                    continue;
                }
                let sub_ok = hyper.iter().all(|h| {
                    let y = chart.map_through(&shared_chart(self.q(), d), h, &z);
                    ranks[idx.index(&y) as usize] as i64 == r * (d as i64 - 1)
                });
                if sub_ok {
                    out.push(i as u32);
                }
            }
        }
        Ok(self.memo.circuits.get_or_init(|| Arc::new(out)).clone())
    }

    /// Minimal dependent spaces, in outer coordinates.
    pub fn circuits(&self) -> Result<Vec<Subspace>, QpmError> {
        let idx = self.index()?;
        Ok(self.circuit_indices()?.iter().map(|&i| self.frame.from_chart(&idx.unrank(i as u64))).collect())
    }

    /// Circuits of the dual.
    pub fn cocircuits(&self) -> Result<Vec<Subspace>, QpmError> {
        self.dual().circuits()
    }

    /// Smallest cocircuit dimension.
    pub fn min_cocircuit_dim(&self) -> Result<usize, QpmError> {
        let dual = self.dual();
        let idx = self.index()?;
        let first = dual.circuit_indices()?.first().copied().ok_or(QpmError::NoCocircuits)?;
        Ok(idx.dim_of(first as u64))
    }

    /// Sum of all `X >= A` with `rank(X) = rank(A)`.
    pub fn closure(&self, x: &Subspace) -> Result<Subspace, QpmError> {
        let z = self.frame.to_chart(x)?;
        Ok(self.frame.from_chart(&self.closure_chart(&z)?))
    }

    fn closure_chart(&self, z: &Subspace) -> Result<Subspace, QpmError> {
        let chart = self.chart();
        let rz = self.rank_chart(z);
        let mut acc = z.clone();
        if self.dim() == 0 {
            return Ok(acc);
        }
        for l in &shared_catalog(self.q(), self.dim())?[1] {
            if !chart.contains(&acc, l) && self.rank_chart(&chart.sum(z, l)) == rz {
                acc = chart.sum(&acc, l);
            }
        }
        Ok(acc)
    }

    /// Subspaces equal to their closure.
    pub fn flats(&self) -> Result<FlatList, QpmError> {
        let cat = shared_catalog(self.q(), self.dim())?;
        let mut spaces = Vec::new();
        for z in cat.iter().flatten() {
            if &self.closure_chart(z)? == z {
                spaces.push(self.frame.from_chart(z));
            }
        }
        Ok(FlatList { spaces, outside_qmatroid_scope: self.r != 1 })
    }

    /// Maximal proper flats.
    pub fn hyperplanes(&self) -> Result<FlatList, QpmError> {
        let chart = self.chart();
        let top = chart.full();
        let cat = shared_catalog(self.q(), self.dim())?;
        let mut spaces = Vec::new();
        for z in cat.iter().flatten() {
            if z == &top || &self.closure_chart(z)? != z {
                continue;
            }
            let mut maximal = true;
            for l in cat[1].iter().filter(|l| !chart.contains(z, l)) {
                if self.closure_chart(&chart.sum(z, l))? != top {
                    maximal = false;
                    break;
                }
            }
            if maximal {
                spaces.push(self.frame.from_chart(z));
            }
        }
        Ok(FlatList { spaces, outside_qmatroid_scope: self.r != 1 })
    }

    /// One-dimensional circuits.
    pub fn loops(&self) -> Result<Vec<Subspace>, QpmError> {
        let idx = self.index()?;
        let ones = idx.dim_range(1.min(self.dim()));
        Ok(self
            .circuit_indices()?
            .iter()
            .filter(|&&i| self.dim() > 0 && ones.contains(&(i as u64)))
            .map(|&i| self.frame.from_chart(&idx.unrank(i as u64)))
            .collect())
    }
}

/// `F_q^d` with the dot product, shared.
pub(crate) fn shared_chart(q: u32, d: usize) -> Arc<AmbientSpace> {
    use std::collections::HashMap;
    use std::sync::Mutex;
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<AmbientSpace>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("chart cache");
    guard
        .entry((q, d))
        .or_insert_with(|| AmbientSpace::new(GaloisField::gf(q as u64).expect("prime power"), d).expect("fits"))
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Arc<GaloisField> {
        GaloisField::gf(2).unwrap()
    }

    #[test]
    fn uniform_dual_is_uniform() {
        let u = QPolymatroid::uniform(gf2(), 2, 5).unwrap();
        assert_eq!(u.dual().as_uniform().unwrap(), Some(3));
        assert!(u.dual().dual().equals(&u).unwrap());
    }

    #[test]
    fn vamos_circuits_and_axioms() {
        let v = QPolymatroid::vamos(gf2()).unwrap();
        assert_eq!(v.full_rank(), 4);
        let e = v.frame().outer().clone();
        let c1 = e.coordinate_subspace(&[0, 1, 2, 3]);
        assert_eq!(v.rank(&c1).unwrap(), 3);
        let t = e.coordinate_subspace(&[0, 1, 2, 3, 4]);
        let restricted = v.restrict(&t).unwrap();
        assert!(restricted.check_axioms(AxiomMode::Exhaustive).unwrap().is_ok());
    }

    #[test]
    fn corruption_is_detected() {
        let u = QPolymatroid::uniform(gf2(), 2, 4).unwrap();
        let e = u.frame().outer().clone();
        let x = e.coordinate_subspace(&[0, 1, 2]);
        let bad = u.with_rank_at(&x, 3).unwrap();
        let report = bad.check_axioms(AxiomMode::Exhaustive).unwrap();
        let v = report.violation.expect("violation");
        assert!(v.a == x || v.b.as_ref() == Some(&x));
    }

    #[test]
    fn uniform_circuits_have_dimension_k_plus_one() {
        let u = QPolymatroid::uniform(gf2(), 2, 4).unwrap();
        let c = u.circuits().unwrap();
        assert_eq!(c.len(), 15);
        assert!(c.iter().all(|x| x.dim() == 3));
        assert_eq!(u.min_cocircuit_dim().unwrap(), 3);
        assert!(u.loops().unwrap().is_empty());
        let hyper = u.hyperplanes().unwrap();
        assert!(hyper.spaces.iter().all(|h| h.dim() == 1));
        assert_eq!(hyper.spaces.len(), 15);
    }

    #[test]
    fn contraction_and_restriction_frames() {
        let u = QPolymatroid::uniform(gf2(), 3, 5).unwrap();
        let e = u.frame().outer().clone();
        let t = e.coordinate_subspace(&[1, 3]);
        let c = u.contract(&t).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.full_rank(), 1);
        assert_eq!(c.as_uniform().unwrap(), Some(1));
        let r = u.restrict(&e.coordinate_subspace(&[0, 1, 2, 3])).unwrap();
        assert_eq!(r.as_uniform().unwrap(), Some(3));
        assert!(u.restrict(&e.zero()).unwrap().dim() == 0);
    }

    #[test]
    fn no_cocircuits_error() {
        // U_{0,3}: the dual is U_{3,3}, which is free.
        let u = QPolymatroid::uniform(gf2(), 0, 3).unwrap();
        assert_eq!(u.min_cocircuit_dim().unwrap_err(), QpmError::NoCocircuits);
    }
}
