//! Subspaces of `E = F_q^n`.
//!
//! A vector is packed into a `u64`: entry `j` occupies bits
//! `[j*w, (j+1)*w)` where `w` is the bit width of `q - 1`, so over `F_2`
//! column `j` is simply bit `j`. A [`Subspace`] stores the rows of its
//! reduced row echelon form, which makes equality and hashing canonical.
//!
//! [`LatticeIndex`] ranks every subspace of `F_q^n` into `0..total`: first by
//! dimension, then by pivot columns in lexicographic order, then by the free
//! entries read as a mixed-radix number. Dense tables over the whole lattice
//! are indexed this way.
//!
//! ```
//! use qpoly::lattice::AmbientSpace;
//!
//! let e = AmbientSpace::binary(4);
//! let u = e.parse_subspace(&["1100", "0011"]).unwrap();
//! let up = e.perp(&u);
//! assert_eq!(up.dim(), 2);
//! assert_eq!(e.perp(&up), u);
//! ```

use std::cmp::Ordering;
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::field::{Elem, FieldOps, GaloisField};
use crate::linalg;

/// Lattices with more subspaces than this are not enumerated by default.
pub const DEFAULT_CEILING: u64 = 1 << 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("subspace is not contained in the given space")]
    NotASubspaceOf,
    #[error("enumeration constraints cannot be satisfied")]
    InconsistentConstraints,
    #[error("lattice has {0} elements, above the enumeration ceiling")]
    TooLargeToEnumerate(u128),
    #[error("F_{q}^{n} does not fit the packed row representation")]
    Unsupported { q: u32, n: usize },
    #[error("bilinear form must be a symmetric invertible n x n matrix")]
    BadForm,
    #[error("cannot parse subspace row {0:?}")]
    Parse(String),
}

/// Packed rows of a reduced row echelon form.
pub type Rows = SmallVec<[u64; 8]>;

/// A subspace, stored as the rows of its reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    n: u8,
    rows: Rows,
}

impl Subspace {
    #[inline]
    #[must_use]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    #[must_use]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    #[must_use]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Builds a subspace from rows already in reduced echelon form.
    pub(crate) fn from_rref(n: usize, rows: Rows) -> Self {
        Subspace { n: n as u8, rows }
    }
}

/// Restrictions applied by [`AmbientSpace::enumerate_subspaces`].
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    pub contains: Option<Subspace>,
    pub contained_in: Option<Subspace>,
    pub trivial_meet: Option<Subspace>,
}

/// `F_q^n` with a symmetric non-degenerate bilinear form.
#[derive(Debug)]
pub struct AmbientSpace {
    field: Arc<GaloisField>,
    q: u32,
    n: usize,
    width: u32,
    mask: u64,
    gram: Option<Vec<Vec<Elem>>>,
}

fn entry_width(q: u32) -> u32 {
    32 - (q - 1).leading_zeros()
}

impl AmbientSpace {
    /// `F_q^n` with the standard dot product.
    pub fn new(field: Arc<GaloisField>, n: usize) -> Result<Arc<Self>, LatticeError> {
        Self::build(field, n, None)
    }

    /// `F_q^n` with the form `b(x, y) = x G y^T`.
    pub fn with_form(field: Arc<GaloisField>, n: usize, gram: Vec<Vec<Elem>>) -> Result<Arc<Self>, LatticeError> {
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::BadForm);
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] || !field.contains(gram[i][j]) {
                    return Err(LatticeError::BadForm);
                }
            }
        }
        if linalg::rank(field.as_ref(), &gram) != n {
            return Err(LatticeError::BadForm);
        }
        let identity = (0..n).all(|i| (0..n).all(|j| gram[i][j] == if i == j { Elem::ONE } else { Elem::ZERO }));
        Self::build(field, n, if identity { None } else { Some(gram) })
    }

    fn build(field: Arc<GaloisField>, n: usize, gram: Option<Vec<Vec<Elem>>>) -> Result<Arc<Self>, LatticeError> {
        let q = field.order();
        let width = entry_width(q).max(1);
        if n as u32 * width > 64 || n > 64 {
            return Err(LatticeError::Unsupported { q, n });
        }
        let mask = if n as u32 * width == 64 { u64::MAX } else { (1u64 << (n as u32 * width)) - 1 };
        Ok(Arc::new(AmbientSpace { field, q, n, width, mask, gram }))
    }

    /// `F_2^n` with the dot product.
    #[must_use]
    pub fn binary(n: usize) -> Arc<Self> {
        Self::new(GaloisField::gf(2).expect("GF(2)"), n).expect("n <= 64")
    }

    #[inline]
    #[must_use]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    /// The Gram matrix, or `None` for the dot product.
    #[must_use]
    pub fn gram(&self) -> Option<&Vec<Vec<Elem>>> {
        self.gram.as_ref()
    }

    #[inline]
    fn binary_field(&self) -> bool {
        self.q == 2
    }

    #[inline]
    #[must_use]
    pub fn get(&self, row: u64, j: usize) -> Elem {
        if self.binary_field() {
            return Elem(((row >> j) & 1) as u32);
        }
        Elem(((row >> (j as u32 * self.width)) & ((1u64 << self.width) - 1)) as u32)
    }

    #[inline]
    fn set(&self, row: u64, j: usize, v: Elem) -> u64 {
        let shift = j as u32 * self.width;
        let m = ((1u64 << self.width) - 1) << shift;
        (row & !m) | ((v.0 as u64) << shift)
    }

    pub fn pack(&self, v: &[Elem]) -> Result<u64, LatticeError> {
        if v.len() != self.n {
            return Err(LatticeError::AmbientMismatch);
        }
        let mut row = 0;
        for (j, &x) in v.iter().enumerate() {
            if !self.field.contains(x) {
                return Err(LatticeError::AmbientMismatch);
            }
            row = self.set(row, j, x);
        }
        Ok(row)
    }

    #[must_use]
    pub fn unpack(&self, row: u64) -> Vec<Elem> {
        (0..self.n).map(|j| self.get(row, j)).collect()
    }

    /// `dst + c * src`.
    #[inline]
    fn axpy(&self, dst: u64, c: Elem, src: u64) -> u64 {
        if self.binary_field() {
            return if c.is_zero() { dst } else { dst ^ src };
        }
        if c.is_zero() {
            return dst;
        }
        let f = self.field.as_ref();
        let mut out = dst;
        for j in 0..self.n {
            let s = self.get(src, j);
            if !s.is_zero() {
                out = self.set(out, j, f.add(self.get(out, j), f.mul(c, s)));
            }
        }
        out
    }

    fn scale(&self, c: Elem, row: u64) -> u64 {
        if self.binary_field() || c == Elem::ONE {
            return row;
        }
        let f = self.field.as_ref();
        let mut out = 0;
        for j in 0..self.n {
            out = self.set(out, j, f.mul(c, self.get(row, j)));
        }
        out
    }

    /// First nonzero column of a packed row.
    #[inline]
    #[must_use]
    pub fn lead(&self, row: u64) -> Option<usize> {
        if row == 0 {
            None
        } else {
            Some((row.trailing_zeros() / self.width) as usize)
        }
    }

    fn rref_rows(&self, rows: &mut Rows) {
        let mut r = 0;
        for c in 0..self.n {
            if r == rows.len() {
                break;
            }
            let Some(sel) = (r..rows.len()).find(|&i| !self.get(rows[i], c).is_zero()) else {
                continue;
            };
            rows.swap(r, sel);
            if self.binary_field() {
                let bit = 1u64 << c;
                let piv = rows[r];
                for (i, row) in rows.iter_mut().enumerate() {
                    if i != r && *row & bit != 0 {
                        *row ^= piv;
                    }
                }
            } else {
                let f = self.field.as_ref();
                let inv = f.inv(self.get(rows[r], c)).expect("nonzero");
                rows[r] = self.scale(inv, rows[r]);
                let piv = rows[r];
                for i in 0..rows.len() {
                    let x = self.get(rows[i], c);
                    if i != r && !x.is_zero() {
                        rows[i] = self.axpy(rows[i], f.neg(x), piv);
                    }
                }
            }
            r += 1;
        }
        rows.truncate(r);
    }

    /// The span of packed rows.
    #[must_use]
    pub fn canonical(&self, rows: impl IntoIterator<Item = u64>) -> Subspace {
        let mut rows: Rows = rows.into_iter().filter(|&r| r != 0).collect();
        self.rref_rows(&mut rows);
        Subspace::from_rref(self.n, rows)
    }

    /// The span of explicit vectors.
    pub fn span(&self, vectors: &[Vec<Elem>]) -> Result<Subspace, LatticeError> {
        let rows = vectors.iter().map(|v| self.pack(v)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.canonical(rows))
    }

    #[must_use]
    pub fn zero(&self) -> Subspace {
        Subspace::from_rref(self.n, Rows::new())
    }

    #[must_use]
    pub fn full(&self) -> Subspace {
        self.coordinate_subspace((0..self.n).collect::<Vec<_>>().as_slice())
    }

    /// `span{ e_j : j in cols }` for increasing `cols`.
    #[must_use]
    pub fn coordinate_subspace(&self, cols: &[usize]) -> Subspace {
        let rows = cols.iter().map(|&j| self.set(0, j, Elem::ONE)).collect();
        Subspace::from_rref(self.n, rows)
    }

    pub fn check(&self, s: &Subspace) -> Result<(), LatticeError> {
        if s.n() != self.n || s.rows.iter().any(|&r| r & !self.mask != 0) {
            return Err(LatticeError::AmbientMismatch);
        }
        Ok(())
    }

    /// Reduces `v` against the echelon rows of `s`.
    #[inline]
    #[must_use]
    pub fn reduce(&self, s: &Subspace, mut v: u64) -> u64 {
        if self.binary_field() {
            for &r in &s.rows {
                if v & (r & r.wrapping_neg()) != 0 {
                    v ^= r;
                }
            }
            return v;
        }
        let f = self.field.as_ref();
        for &r in &s.rows {
            let c = self.lead(r).expect("nonzero row");
            let x = self.get(v, c);
            if !x.is_zero() {
                v = self.axpy(v, f.neg(x), r);
            }
        }
        v
    }

    #[must_use]
    pub fn contains_vector(&self, s: &Subspace, v: u64) -> bool {
        self.reduce(s, v) == 0
    }

    /// `small <= big`.
    #[must_use]
    pub fn contains(&self, big: &Subspace, small: &Subspace) -> bool {
        small.dim() <= big.dim() && small.rows.iter().all(|&r| self.contains_vector(big, r))
    }

    #[must_use]
    pub fn sum(&self, a: &Subspace, b: &Subspace) -> Subspace {
        self.canonical(a.rows.iter().chain(&b.rows).copied())
    }

    /// Dimension of `a + b`.
    #[must_use]
    pub fn sum_dim(&self, a: &Subspace, b: &Subspace) -> usize {
        let mut acc = a.clone();
        for &r in &b.rows {
            let red = self.reduce(&acc, r);
            if red != 0 {
                acc = self.canonical(acc.rows.iter().copied().chain(std::iter::once(red)));
            }
        }
        acc.dim()
    }

    #[must_use]
    pub fn intersection(&self, a: &Subspace, b: &Subspace) -> Subspace {
        if a.dim() == 0 || b.dim() == 0 {
            return self.zero();
        }
        if self.contains(a, b) {
            return b.clone();
        }
        if self.contains(b, a) {
            return a.clone();
        }
        // Solve sum_i x_i a_i = sum_j y_j b_j through the kernel of the stacked coordinates.
        let f = self.field.as_ref();
        let da = a.dim();
        let cols: Vec<Vec<Elem>> = (0..self.n)
            .map(|j| {
                a.rows
                    .iter()
                    .map(|&r| self.get(r, j))
                    .chain(b.rows.iter().map(|&r| f.neg(self.get(r, j))))
                    .collect()
            })
            .collect();
        let ker = linalg::kernel(f, &cols, da + b.dim());
        let vecs = ker.iter().map(|x| {
            let mut v = 0u64;
            for (i, &c) in x[..da].iter().enumerate() {
                v = self.axpy(v, c, a.rows[i]);
            }
            v
        });
        self.canonical(vecs)
    }

    /// `b(x, y)` for packed vectors.
    #[must_use]
    pub fn bilinear(&self, x: u64, y: u64) -> Elem {
        let f = self.field.as_ref();
        match &self.gram {
            None if self.binary_field() => Elem((x & y).count_ones() & 1),
            None => (0..self.n).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(self.get(x, j), self.get(y, j)))),
            Some(g) => {
                let mut acc = Elem::ZERO;
                for i in 0..self.n {
                    let xi = self.get(x, i);
                    if xi.is_zero() {
                        continue;
                    }
                    for j in 0..self.n {
                        acc = f.add(acc, f.mul(xi, f.mul(g[i][j], self.get(y, j))));
                    }
                }
                acc
            }
        }
    }

    /// Right kernel of the matrix with the given packed rows.
    fn right_kernel(&self, rows: impl IntoIterator<Item = u64>) -> Subspace {
        let s = self.canonical(rows);
        let f = self.field.as_ref();
        let mut pivot_mask = 0u64;
        let pivots: SmallVec<[usize; 8]> = s.rows.iter().map(|&r| self.lead(r).unwrap()).collect();
        for &p in &pivots {
            pivot_mask |= 1 << p;
        }
        let mut out = Rows::new();
        for free in (0..self.n).filter(|&c| pivot_mask & (1 << c) == 0) {
            let mut v = self.set(0, free, Elem::ONE);
            for (&r, &p) in s.rows.iter().zip(&pivots) {
                v = self.set(v, p, f.neg(self.get(r, free)));
            }
            out.push(v);
        }
        self.canonical(out)
    }

    /// `U^perp` with respect to the ambient form.
    #[must_use]
    pub fn perp(&self, u: &Subspace) -> Subspace {
        match &self.gram {
            None => self.right_kernel(u.rows.iter().copied()),
            Some(g) => {
                let f = self.field.as_ref();
                let rows: Vec<u64> = u
                    .rows
                    .iter()
                    .map(|&r| {
                        let v = linalg::vec_mat(f, &self.unpack(r), g);
                        self.pack(&v).expect("same length")
                    })
                    .collect();
                self.right_kernel(rows)
            }
        }
    }

    /// Coordinates of `v` in the echelon basis of `basis`; assumes `v` lies in it.
    #[must_use]
    pub fn coordinates(&self, basis: &Subspace, v: u64) -> Vec<Elem> {
        basis.rows.iter().map(|&r| self.get(v, self.lead(r).unwrap())).collect()
    }

    /// `sum_i coeffs[i] * basis_i`.
    #[must_use]
    pub fn combine(&self, basis: &Subspace, coeffs: &[Elem]) -> u64 {
        coeffs.iter().zip(&basis.rows).fold(0, |acc, (&c, &r)| self.axpy(acc, c, r))
    }

    /// Image of `coeffs`, a subspace of `F_q^{dim basis}`, under the basis map.
    /// Reduced echelon rows map to reduced echelon rows, so no reduction is needed.
    #[must_use]
    pub fn map_through(&self, chart: &AmbientSpace, coeffs: &Subspace, basis: &Subspace) -> Subspace {
        let rows = coeffs
            .rows
            .iter()
            .map(|&c| {
                if self.binary_field() {
                    let mut v = 0;
                    let mut bits = c;
                    while bits != 0 {
                        let i = bits.trailing_zeros() as usize;
                        v ^= basis.rows[i];
                        bits &= bits - 1;
                    }
                    v
                } else {
                    self.combine(basis, &chart.unpack(c))
                }
            })
            .collect();
        Subspace::from_rref(self.n, rows)
    }

    /// The chart `F_q^{dim basis}` for a subspace: the restricted form when it is
    /// non-degenerate, otherwise the dot product in coordinates.
    pub fn chart_for(&self, basis: &Subspace) -> Arc<AmbientSpace> {
        let d = basis.dim();
        let gram: Vec<Vec<Elem>> = basis
            .rows
            .iter()
            .map(|&x| basis.rows.iter().map(|&y| self.bilinear(x, y)).collect())
            .collect();
        let field = self.field.clone();
        if d == 0 || linalg::rank(field.as_ref(), &gram) != d {
            return AmbientSpace::new(field, d).expect("smaller than ambient");
        }
        AmbientSpace::with_form(field, d, gram).expect("checked non-degenerate")
    }

    /// Coordinates of a subspace of `basis` as a subspace of its chart.
    #[must_use]
    pub fn to_coordinates(&self, chart: &AmbientSpace, basis: &Subspace, u: &Subspace) -> Subspace {
        chart.canonical(u.rows.iter().map(|&r| chart.pack(&self.coordinates(basis, r)).expect("dims")))
    }

    /// `U^perp` taken inside `F`, using [`AmbientSpace::chart_for`].
    pub fn relative_perp(&self, u: &Subspace, f: &Subspace) -> Result<Subspace, LatticeError> {
        self.check(u)?;
        self.check(f)?;
        if !self.contains(f, u) {
            return Err(LatticeError::NotASubspaceOf);
        }
        let chart = self.chart_for(f);
        let coords = self.to_coordinates(&chart, f, u);
        Ok(self.map_through(&chart, &chart.perp(&coords), f))
    }

    /// `span{ e_j : j not a pivot column of b }`, a complement of `b`.
    #[must_use]
    pub fn pivot_complement(&self, b: &Subspace) -> Subspace {
        let piv: Vec<usize> = b.rows.iter().map(|&r| self.lead(r).unwrap()).collect();
        let cols: Vec<usize> = (0..self.n).filter(|c| !piv.contains(c)).collect();
        self.coordinate_subspace(&cols)
    }

    /// `W ∩ span{e_j : j not a pivot of I}` for `I <= W`; a complement of `I` in `W`.
    #[must_use]
    pub fn complement_in(&self, i: &Subspace, w: &Subspace) -> Subspace {
        self.canonical(w.rows.iter().map(|&r| self.reduce(i, r)))
    }

    /// All subspaces `X` with `I <= X <= W` and `dim X = k` (any `k` when `None`), unsorted.
    pub fn interval(&self, bottom: &Subspace, top: &Subspace, k: Option<usize>) -> Result<Vec<Subspace>, LatticeError> {
        if !self.contains(top, bottom) {
            return Err(LatticeError::InconsistentConstraints);
        }
        let y = self.complement_in(bottom, top);
        let chart = AmbientSpace::new(self.field.clone(), y.dim())?;
        let dims: Vec<usize> = match k {
            Some(k) if k < bottom.dim() || k > top.dim() => return Ok(Vec::new()),
            Some(k) => vec![k - bottom.dim()],
            None => (0..=y.dim()).collect(),
        };
        let index = LatticeIndex::new(self.q, y.dim(), u64::MAX)?;
        let mut out = Vec::new();
        for d in dims {
            for z in index.iter_dim(d) {
                let img = self.map_through(&chart, &z, &y);
                out.push(if bottom.dim() == 0 { img } else { self.sum(bottom, &img) });
            }
        }
        Ok(out)
    }

    /// `k`-dimensional subspaces meeting the constraints, in [`LatticeIndex`] order.
    pub fn enumerate_subspaces(&self, k: usize, c: &Constraints) -> Result<Vec<Subspace>, LatticeError> {
        for s in [&c.contains, &c.contained_in, &c.trivial_meet].into_iter().flatten() {
            self.check(s)?;
        }
        let bottom = c.contains.clone().unwrap_or_else(|| self.zero());
        let top = c.contained_in.clone().unwrap_or_else(|| self.full());
        if !self.contains(&top, &bottom) {
            return Err(LatticeError::InconsistentConstraints);
        }
        if k > self.n {
            return Err(LatticeError::InconsistentConstraints);
        }
        let mut out = self.interval(&bottom, &top, Some(k))?;
        if let Some(j) = &c.trivial_meet {
            out.retain(|x| self.sum(x, j).dim() == x.dim() + j.dim());
        }
        out.sort_by(|a, b| self.order(a, b));
        Ok(out)
    }

    /// The total order used by [`LatticeIndex`].
    #[must_use]
    pub fn order(&self, a: &Subspace, b: &Subspace) -> Ordering {
        a.dim().cmp(&b.dim()).then_with(|| {
            let pa: Vec<usize> = a.rows.iter().map(|&r| self.lead(r).unwrap()).collect();
            let pb: Vec<usize> = b.rows.iter().map(|&r| self.lead(r).unwrap()).collect();
            pa.cmp(&pb).then_with(|| self.free_digits(a).cmp(&self.free_digits(b)))
        })
    }

    /// Free entries, most significant first.
    fn free_digits(&self, s: &Subspace) -> Vec<u32> {
        let piv: Vec<usize> = s.rows.iter().map(|&r| self.lead(r).unwrap()).collect();
        let mut out = Vec::new();
        for (&r, &p) in s.rows.iter().zip(&piv) {
            for j in (p + 1..self.n).rev().filter(|j| !piv.contains(j)) {
                out.push(self.get(r, j).0);
            }
        }
        out
    }

    /// Rows as digit strings, e.g. `"010011"`; entries above 9 are comma separated.
    #[must_use]
    pub fn format_subspace(&self, s: &Subspace) -> Vec<String> {
        s.rows.iter().map(|&r| self.format_vector(r)).collect()
    }

    #[must_use]
    pub fn format_vector(&self, r: u64) -> String {
        let digits = self.unpack(r);
        if self.q <= 10 {
            digits.iter().map(|d| char::from_digit(d.0, 10).unwrap()).collect()
        } else {
            digits.iter().map(|d| d.0.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse_vector(&self, text: &str) -> Result<u64, LatticeError> {
        let err = || LatticeError::Parse(text.to_string());
        let digits: Vec<Elem> = if text.contains(',') {
            text.split(',').map(|t| t.trim().parse().map(Elem).map_err(|_| err())).collect::<Result<_, _>>()?
        } else {
            text.chars().filter(|c| !c.is_whitespace()).map(|c| c.to_digit(10).map(Elem).ok_or_else(err)).collect::<Result<_, _>>()?
        };
        if digits.len() != self.n || digits.iter().any(|d| d.0 >= self.q) {
            return Err(err());
        }
        self.pack(&digits)
    }

    /// The span of the given rows (they need not be independent or reduced).
    pub fn parse_subspace<S: AsRef<str>>(&self, rows: &[S]) -> Result<Subspace, LatticeError> {
        let rows = rows.iter().map(|r| self.parse_vector(r.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(self.canonical(rows))
    }
}

/// Ranks the subspaces of `F_q^n` into `0..total`.
#[derive(Debug)]
pub struct LatticeIndex {
    q: u32,
    n: usize,
    width: u32,
    dim_offset: Vec<u64>,
    /// Offset and free-entry count of each pivot set, indexed by its bitmask.
    by_mask: Vec<(u64, u32)>,
    /// Pivot masks of each dimension in lexicographic order, with offsets.
    patterns: Vec<Vec<(u64, u64)>>,
    qpow: Vec<u64>,
}

impl LatticeIndex {
    /// Fails when the lattice has more than `ceiling` elements.
    pub fn new(q: u32, n: usize, ceiling: u64) -> Result<Self, LatticeError> {
        if n > 20 {
            return Err(LatticeError::TooLargeToEnumerate(u128::MAX));
        }
        let total = (0..=n).try_fold(0u128, |acc, k| {
            crate::gaussian::qbin_u128(n, k, q as u64).and_then(|c| acc.checked_add(c))
        });
        match total {
            Some(t) if t <= ceiling as u128 => {}
            Some(t) => return Err(LatticeError::TooLargeToEnumerate(t)),
            None => return Err(LatticeError::TooLargeToEnumerate(u128::MAX)),
        }
        let width = entry_width(q).max(1);
        let mut qpow = vec![1u64; n * n + 1];
        for i in 1..qpow.len() {
            qpow[i] = qpow[i - 1].saturating_mul(q as u64);
        }
        let mut by_mask = vec![(0u64, 0u32); 1 << n];
        let mut patterns = vec![Vec::new(); n + 1];
        let mut dim_offset = vec![0u64; n + 2];
        let mut offset = 0u64;
        for k in 0..=n {
            dim_offset[k] = offset;
            let mut combo: Vec<usize> = (0..k).collect();
            loop {
                let mask = combo.iter().fold(0u64, |m, &c| m | (1 << c));
                let free: u32 = combo
                    .iter()
                    .map(|&p| (p + 1..n).filter(|j| mask & (1 << j) == 0).count() as u32)
                    .sum();
                by_mask[mask as usize] = (offset, free);
                patterns[k].push((mask, offset));
                offset += qpow[free as usize];
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
        dim_offset[n + 1] = offset;
        Ok(LatticeIndex { q, n, width, dim_offset, by_mask, patterns, qpow })
    }

    #[must_use]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn total(&self) -> u64 {
        self.dim_offset[self.n + 1]
    }

    /// Index range of the `k`-dimensional subspaces.
    #[must_use]
    pub fn dim_range(&self, k: usize) -> std::ops::Range<u64> {
        self.dim_offset[k]..self.dim_offset[k + 1]
    }

    #[must_use]
    pub fn dim_of(&self, idx: u64) -> usize {
        self.dim_offset.partition_point(|&o| o <= idx) - 1
    }

    #[inline]
    fn digit(&self, row: u64, j: usize) -> u64 {
        (row >> (j as u32 * self.width)) & ((1u64 << self.width) - 1)
    }

    #[inline]
    #[must_use]
    pub fn index(&self, s: &Subspace) -> u64 {
        let full = (1u64 << self.n) - 1;
        if self.q == 2 {
            let mut mask = 0u64;
            for &r in &s.rows {
                mask |= r & r.wrapping_neg();
            }
            let (base, _) = self.by_mask[mask as usize];
            let mut value = 0u64;
            for &r in &s.rows {
                let low = r & r.wrapping_neg();
                let free = !mask & full & !(low | (low - 1));
                let mut bits = free;
                let mut block = 0u64;
                let mut bb = 1u64;
                while bits != 0 {
                    let b = bits & bits.wrapping_neg();
                    if r & b != 0 {
                        block |= bb;
                    }
                    bb <<= 1;
                    bits &= bits - 1;
                }
                value = (value << free.count_ones()) | block;
            }
            return base + value;
        }
        let piv: SmallVec<[usize; 8]> = s.rows.iter().map(|&r| (r.trailing_zeros() / self.width) as usize).collect();
        let mask = piv.iter().fold(0u64, |m, &p| m | (1 << p));
        let (base, _) = self.by_mask[mask as usize];
        let mut value = 0u64;
        for (&r, &p) in s.rows.iter().zip(&piv) {
            let mut block = 0u64;
            let mut count = 0;
            for j in (p + 1..self.n).filter(|j| mask & (1 << j) == 0) {
                block += self.digit(r, j) * self.qpow[count];
                count += 1;
            }
            value = value * self.qpow[count] + block;
        }
        base + value
    }

    #[must_use]
    pub fn unrank(&self, idx: u64) -> Subspace {
        let k = self.dim_of(idx);
        let pats = &self.patterns[k];
        let pi = pats.partition_point(|&(_, o)| o <= idx) - 1;
        let (mask, offset) = pats[pi];
        self.build(mask, idx - offset)
    }

    fn build(&self, mask: u64, mut value: u64) -> Subspace {
        let piv: SmallVec<[usize; 8]> = (0..self.n).filter(|&j| mask & (1 << j) != 0).collect();
        let mut rows: Rows = SmallVec::from_elem(0, piv.len());
        for (i, &p) in piv.iter().enumerate().rev() {
            let frees: SmallVec<[usize; 16]> = (p + 1..self.n).filter(|j| mask & (1 << j) == 0).collect();
            let base = self.qpow[frees.len()];
            let mut block = value % base;
            value /= base;
            let mut row = 1u64 << (p as u32 * self.width);
            for &j in &frees {
                let d = block % self.q as u64;
                block /= self.q as u64;
                row |= d << (j as u32 * self.width);
            }
            rows[i] = row;
        }
        Subspace::from_rref(self.n, rows)
    }

    /// The `k`-dimensional subspaces in index order.
    pub fn iter_dim(&self, k: usize) -> impl Iterator<Item = Subspace> + '_ {
        self.patterns[k].iter().flat_map(move |&(mask, _)| {
            let free = self.by_mask[mask as usize].1;
            (0..self.qpow[free as usize]).map(move |v| self.build(mask, v))
        })
    }

    /// Every subspace in index order.
    pub fn iter(&self) -> impl Iterator<Item = Subspace> + '_ {
        (0..=self.n).flat_map(move |k| self.iter_dim(k))
    }
}

/// Process-wide cache of lattice indices, keyed by `(q, n)`.
pub fn shared_index(q: u32, n: usize, ceiling: u64) -> Result<Arc<LatticeIndex>, LatticeError> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<LatticeIndex>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(idx) = cache.lock().expect("index cache").get(&(q, n)) {
        if idx.total() > ceiling {
            return Err(LatticeError::TooLargeToEnumerate(idx.total() as u128));
        }
        return Ok(idx.clone());
    }
    let idx = Arc::new(LatticeIndex::new(q, n, ceiling)?);
    cache.lock().expect("index cache").insert((q, n), idx.clone());
    Ok(idx)
}

/// Every subspace of `F_q^d`, grouped by dimension, in index order.
pub fn shared_catalog(q: u32, d: usize) -> Result<Arc<Vec<Vec<Subspace>>>, LatticeError> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<Vec<Vec<Subspace>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("catalog cache").get(&(q, d)) {
        return Ok(c.clone());
    }
    let idx = shared_index(q, d, DEFAULT_CEILING)?;
    let cat: Vec<Vec<Subspace>> = (0..=d).map(|k| idx.iter_dim(k).collect()).collect();
    let cat = Arc::new(cat);
    cache.lock().expect("catalog cache").insert((q, d), cat.clone());
    Ok(cat)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
