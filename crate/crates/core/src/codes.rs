//! Rank-metric codes in matrix form (`F_q^{n×m}`) and vector form (`F_{q^m}^n`).
//!
//! The support of a codeword is its column space in `E = F_q^n` (after
//! expansion in a basis of `F_{q^m}` for vector codes). With
//! `C_U = {x : supp x <= U^⊥}` the induced rank function is
//! `rank(U) = k - dim C_U`: a `(q, m)`-polymatroid for matrix codes and a
//! q-matroid for vector codes, where dimensions are counted over `F_{q^m}`.
//!
//! ```
//! use qpoly::codes::VectorCode;
//! use qpoly::field::GaloisField;
//!
//! let f4 = GaloisField::gf(4).unwrap();
//! let a = f4.alpha();
//! let c = VectorCode::new(f4, 2, vec![vec![qpoly::field::Elem::ONE, a]]).unwrap();
//! assert_eq!(c.minimum_distance().unwrap(), Some(2));
//! assert!(c.is_mrd().unwrap());
//! ```

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::field::{Elem, FieldError, FieldOps, GaloisField, GammaBasis};
use crate::gaussian::mobius_gap;
use crate::lattice::{AmbientSpace, LatticeError, Subspace, DEFAULT_CEILING};
use crate::linalg;
use crate::qpm::{QPolymatroid, QpmError};

/// Codes with more words than this are not enumerated.
pub const ENUMERATION_CEILING: u128 = 1 << 27;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Qpm(#[from] QpmError),
    #[error("basis matrices are linearly dependent")]
    Dependent,
    #[error("generator matrix does not have full row rank")]
    NotFullRank,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("enumeration of {0} codewords exceeds the ceiling")]
    TooLargeToEnumerate(u128),
}

/// Row-major matrix.
pub type Matrix = Vec<Vec<Elem>>;

fn rank_bits(rows: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for mut v in rows {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

/// Column space, in `F_q^n`, of a matrix given by packed binary rows of width `m`.
fn binary_support(e: &AmbientSpace, rows: &[u64], m: usize) -> Subspace {
    e.canonical((0..m).map(|j| rows.iter().enumerate().fold(0u64, |acc, (i, &r)| acc | (((r >> j) & 1) << i))))
}

/// Rank of a matrix over `field`.
#[must_use]
pub fn matrix_rank(field: &GaloisField, x: &Matrix) -> usize {
    linalg::rank(field, x)
}

/// Column space of an `n × m` matrix as a subspace of `F_q^n`.
pub fn matrix_support(e: &AmbientSpace, x: &Matrix) -> Result<Subspace, CodeError> {
    let m = x.first().map_or(0, Vec::len);
    let cols = (0..m).map(|j| e.pack(&x.iter().map(|row| row[j]).collect::<Vec<_>>())).collect::<Result<Vec<_>, _>>()?;
    Ok(e.canonical(cols))
}

/// `|C_{=U}| = Σ_{V >= U} μ(U, V) θ^(k - rank V)`.
fn mobius_count(e: &AmbientSpace, u: &Subspace, k: usize, theta: &BigInt, rank: impl Fn(&Subspace) -> usize) -> Result<BigInt, CodeError> {
    e.check(u)?;
    let mut total = BigInt::zero();
    for v in e.interval(u, &e.full(), None)? {
        total += mobius_gap(v.dim() - u.dim(), e.q() as u64) * theta.pow((k - rank(&v)) as u32);
    }
    Ok(total)
}

fn check_size(q: u64, k: usize) -> Result<(), CodeError> {
    let size = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_CEILING {
        return Err(CodeError::TooLargeToEnumerate(size));
    }
    Ok(())
}

pub(crate) fn is_mrd_params(dim_over_q: usize, n: usize, m: usize, d: Option<usize>) -> bool {
    match d {
        Some(d) => dim_over_q == n.max(m) * (n.min(m) + 1 - d),
        None => false,
    }
}

pub(crate) fn min_distance(w: &[BigInt]) -> Option<usize> {
    w.iter().enumerate().skip(1).find(|(_, c)| !c.is_zero()).map(|(i, _)| i)
}

fn constant_weight(w: &[BigInt]) -> bool {
    w.iter().skip(1).filter(|c| !c.is_zero()).count() == 1
}

/// An `F_q`-linear code of `n × m` matrices.
#[derive(Debug, Clone)]
pub struct MatrixCode {
    field: Arc<GaloisField>,
    ambient: Arc<AmbientSpace>,
    n: usize,
    m: usize,
    basis: Vec<Matrix>,
}

impl MatrixCode {
    pub fn new(field: Arc<GaloisField>, n: usize, m: usize, basis: Vec<Matrix>) -> Result<Self, CodeError> {
        for b in &basis {
            if b.len() != n || b.iter().any(|r| r.len() != m || r.iter().any(|x| !field.contains(*x))) {
                return Err(CodeError::Shape(format!("expected {n}×{m} matrices over GF({})", field.order())));
            }
        }
        let flat: Vec<Vec<Elem>> = basis.iter().map(|b| b.concat()).collect();
        if linalg::rank(field.as_ref(), &flat) != basis.len() {
            return Err(CodeError::Dependent);
        }
        let ambient = AmbientSpace::new(field.clone(), n)?;
        Ok(MatrixCode { field, ambient, n, m, basis })
    }

    /// A random `k`-dimensional code.
    pub fn random(field: Arc<GaloisField>, n: usize, m: usize, k: usize, rng: &mut impl Rng) -> Result<Self, CodeError> {
        if k > n * m {
            return Err(CodeError::Shape(format!("k = {k} exceeds nm = {}", n * m)));
        }
        let q = field.order();
        loop {
            let basis: Vec<Matrix> = (0..k)
                .map(|_| (0..n).map(|_| (0..m).map(|_| Elem(rng.gen_range(0..q))).collect()).collect())
                .collect();
            match Self::new(field.clone(), n, m, basis) {
                Err(CodeError::Dependent) => continue,
                other => return other,
            }
        }
    }

    #[must_use]
    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    /// `F_q^n` with the dot product.
    #[must_use]
    pub fn ambient(&self) -> &Arc<AmbientSpace> {
        &self.ambient
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension over `F_q`.
    #[must_use]
    pub fn k(&self) -> usize {
        self.basis.len()
    }

    #[must_use]
    pub fn q(&self) -> u32 {
        self.field.order()
    }

    #[must_use]
    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// Dual under `Tr(X Y^T)`.
    #[must_use]
    pub fn dual(&self) -> Self {
        let flat: Vec<Vec<Elem>> = self.basis.iter().map(|b| b.concat()).collect();
        let ker = linalg::kernel(self.field.as_ref(), &flat, self.n * self.m);
        let basis = ker.into_iter().map(|v| v.chunks(self.m).map(<[Elem]>::to_vec).collect()).collect();
        MatrixCode { field: self.field.clone(), ambient: self.ambient.clone(), n: self.n, m: self.m, basis }
    }

    /// The code of transposed matrices, whose supports are the row spaces.
    pub fn transpose(&self) -> Result<Self, CodeError> {
        let basis = self.basis.iter().map(|b| linalg::transpose(b)).collect();
        Self::new(self.field.clone(), self.m, self.n, basis)
    }

    #[must_use]
    pub fn contains(&self, x: &Matrix) -> bool {
        let mut flat: Vec<Vec<Elem>> = self.basis.iter().map(|b| b.concat()).collect();
        flat.push(x.concat());
        linalg::rank(self.field.as_ref(), &flat) == self.k()
    }

    /// `rank(U) = k - dim C_U`: the rank of the system `u^T B_i` over a basis of `U`.
    #[must_use]
    pub fn rank_of(&self, u: &Subspace) -> usize {
        let f = self.field.as_ref();
        let us: Vec<Vec<Elem>> = u.rows().iter().map(|&r| self.ambient.unpack(r)).collect();
        let rows: Vec<Vec<Elem>> = self
            .basis
            .iter()
            .map(|b| {
                us.iter()
                    .flat_map(|uv| (0..self.m).map(move |j| (0..self.n).fold(Elem::ZERO, |acc, i| f.add(acc, f.mul(uv[i], b[i][j])))))
                    .collect()
            })
            .collect();
        if rows.first().map_or(true, Vec::is_empty) {
            return 0;
        }
        linalg::rank(f, &rows)
    }

    /// The induced `(q, m)`-polymatroid, tabulated when the lattice is small enough.
    pub fn induced_qpm(&self) -> Result<QPolymatroid, CodeError> {
        let code = self.clone();
        let m = QPolymatroid::from_rank_fn(self.ambient.clone(), self.m as u32, move |u| code.rank_of(u) as i64);
        Ok(m.materialize(DEFAULT_CEILING).unwrap_or(m))
    }

    /// Visits every codeword as `(rank, support)`; the support is computed only when asked for.
    fn scan(&self, want_support: bool, mut visit: impl FnMut(usize, Option<Subspace>)) -> Result<(), CodeError> {
        let k = self.k();
        check_size(self.q() as u64, k)?;
        if self.q() == 2 && self.m <= 64 {
            let packed: Vec<Vec<u64>> = self
                .basis
                .iter()
                .map(|b| b.iter().map(|row| row.iter().enumerate().fold(0u64, |acc, (j, x)| acc | ((x.0 as u64) << j))).collect())
                .collect();
            let mut cur = vec![0u64; self.n];
            for t in 0u64..(1u64 << k) {
                if t > 0 {
                    let bit = t.trailing_zeros() as usize;
                    cur.iter_mut().zip(&packed[bit]).for_each(|(c, b)| *c ^= b);
                }
                if want_support {
                    let s = binary_support(&self.ambient, &cur, self.m);
                    visit(s.dim(), Some(s));
                } else {
                    visit(rank_bits(cur.iter().copied()), None);
                }
            }
            return Ok(());
        }
        let f = self.field.as_ref();
        let q = self.q();
        let mut digits = vec![0u32; k];
        let mut cur: Matrix = vec![vec![Elem::ZERO; self.m]; self.n];
        loop {
            if want_support {
                let s = matrix_support(&self.ambient, &cur)?;
                visit(s.dim(), Some(s));
            } else {
                visit(linalg::rank(f, &cur), None);
            }
            let mut i = 0;
            loop {
                if i == k {
                    return Ok(());
                }
                let old = Elem(digits[i]);
                digits[i] = (digits[i] + 1) % q;
                let new = Elem(digits[i]);
                for (row, brow) in cur.iter_mut().zip(&self.basis[i]) {
                    for (x, &b) in row.iter_mut().zip(brow) {
                        *x = f.add(*x, f.mul(f.sub(new, old), b));
                    }
                }
                if digits[i] != 0 {
                    break;
                }
                i += 1;
            }
        }
    }

    /// `[W_0, ..., W_n]` by enumeration.
    pub fn weight_distribution(&self) -> Result<Vec<BigInt>, CodeError> {
        let mut w = vec![0u64; self.n + 1];
        self.scan(false, |r, _| w[r] += 1)?;
        Ok(w.into_iter().map(BigInt::from).collect())
    }

    /// Number of codewords with each support, by enumeration.
    pub fn support_counts(&self) -> Result<HashMap<Subspace, u64>, CodeError> {
        let mut out = HashMap::new();
        self.scan(true, |_, s| *out.entry(s.expect("support")).or_insert(0) += 1)?;
        Ok(out)
    }

    /// `|C_{=U}|`, the number of codewords with support exactly `U^⊥`.
    pub fn c_eq_count(&self, u: &Subspace) -> Result<BigInt, CodeError> {
        mobius_count(&self.ambient, u, self.k(), &BigInt::from(self.q()), |v| self.rank_of(v))
    }

    /// Number of codewords whose support is exactly `s`.
    pub fn codewords_with_support(&self, s: &Subspace) -> Result<BigInt, CodeError> {
        self.ambient.check(s)?;
        self.c_eq_count(&self.ambient.perp(s))
    }

    /// `None` for the zero code.
    pub fn minimum_distance(&self) -> Result<Option<usize>, CodeError> {
        Ok(min_distance(&self.weight_distribution()?))
    }

    /// `k = max(m, n)(min(m, n) - d + 1)`.
    pub fn is_mrd(&self) -> Result<bool, CodeError> {
        Ok(is_mrd_params(self.k(), self.n, self.m, self.minimum_distance()?))
    }

    pub fn is_constant_weight(&self) -> Result<bool, CodeError> {
        Ok(constant_weight(&self.weight_distribution()?))
    }
}

/// An `F_{q^m}`-linear code in `F_{q^m}^n`, given by a generator matrix.
#[derive(Debug, Clone)]
pub struct VectorCode {
    ext: Arc<GaloisField>,
    base: Arc<GaloisField>,
    ambient: Arc<AmbientSpace>,
    n: usize,
    gen: Matrix,
}

impl VectorCode {
    pub fn new(ext: Arc<GaloisField>, n: usize, gen: Matrix) -> Result<Self, CodeError> {
        let base = ext.base().cloned().ok_or(FieldError::NoBaseField)?;
        if gen.iter().any(|r| r.len() != n || r.iter().any(|x| !ext.contains(*x))) {
            return Err(CodeError::Shape(format!("generator rows must have {n} entries in the field")));
        }
        if linalg::rank(ext.as_ref(), &gen) != gen.len() {
            return Err(CodeError::NotFullRank);
        }
        let ambient = AmbientSpace::new(base.clone(), n)?;
        Ok(VectorCode { ext, base, ambient, n, gen })
    }

    /// The code generated by `(I_k | A)`.
    pub fn systematic(ext: Arc<GaloisField>, a: &Matrix) -> Result<Self, CodeError> {
        let k = a.len();
        let n = k + a.first().map_or(0, Vec::len);
        let gen = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut g = vec![Elem::ZERO; k];
                g[i] = Elem::ONE;
                g.extend_from_slice(row);
                g
            })
            .collect();
        Self::new(ext, n, gen)
    }

    #[must_use]
    pub fn ext(&self) -> &Arc<GaloisField> {
        &self.ext
    }

    #[must_use]
    pub fn base(&self) -> &Arc<GaloisField> {
        &self.base
    }

    #[must_use]
    pub fn ambient(&self) -> &Arc<AmbientSpace> {
        &self.ambient
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension over `F_{q^m}`.
    #[must_use]
    pub fn k(&self) -> usize {
        self.gen.len()
    }

    /// Extension degree.
    #[must_use]
    pub fn m(&self) -> usize {
        self.ext.degree()
    }

    #[must_use]
    pub fn q(&self) -> u32 {
        self.base.order()
    }

    /// `q^m`.
    #[must_use]
    pub fn qm(&self) -> u32 {
        self.ext.order()
    }

    #[must_use]
    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    /// Dual under the dot product on `F_{q^m}^n`.
    #[must_use]
    pub fn dual(&self) -> Self {
        let gen = linalg::kernel(self.ext.as_ref(), &self.gen, self.n);
        VectorCode { ext: self.ext.clone(), base: self.base.clone(), ambient: self.ambient.clone(), n: self.n, gen }
    }

    #[must_use]
    pub fn encode(&self, coeffs: &[Elem]) -> Vec<Elem> {
        linalg::vec_mat(self.ext.as_ref(), coeffs, &self.gen)
    }

    fn binary_base(&self) -> bool {
        self.q() == 2
    }

    /// Rank of the expansion of `x`.
    #[must_use]
    pub fn weight(&self, x: &[Elem]) -> usize {
        if self.binary_base() {
            return rank_bits(x.iter().map(|e| e.0 as u64));
        }
        let rows: Matrix = x.iter().map(|&e| self.ext.digits(e)).collect();
        linalg::rank(self.base.as_ref(), &rows)
    }

    /// Column space of the expansion of `x`.
    #[must_use]
    pub fn support(&self, x: &[Elem]) -> Subspace {
        if self.binary_base() {
            let rows: Vec<u64> = x.iter().map(|e| e.0 as u64).collect();
            return binary_support(&self.ambient, &rows, self.m());
        }
        let rows: Matrix = x.iter().map(|&e| self.ext.digits(e)).collect();
        matrix_support(&self.ambient, &rows).expect("digits lie in the base field")
    }

    /// Visits one codeword per nonzero scalar class, with leading coefficient 1.
    pub fn for_each_projective(&self, mut visit: impl FnMut(&[Elem])) -> Result<(), CodeError> {
        let k = self.k();
        let qm = self.qm();
        check_size(qm as u64, k)?;
        let f = self.ext.as_ref();
        let mut cur = vec![Elem::ZERO; self.n];
        for lead in 0..k {
            let free = k - lead - 1;
            cur.copy_from_slice(&self.gen[lead]);
            let mut digits = vec![0u32; free];
            loop {
                visit(&cur);
                let mut i = 0;
                loop {
                    if i == free {
                        break;
                    }
                    let row = &self.gen[lead + 1 + i];
                    let old = Elem(digits[i]);
                    digits[i] = (digits[i] + 1) % qm;
                    let delta = f.sub(Elem(digits[i]), old);
                    for (x, &g) in cur.iter_mut().zip(row) {
                        *x = f.add(*x, f.mul(delta, g));
                    }
                    if digits[i] != 0 {
                        break;
                    }
                    i += 1;
                }
                if i == free {
                    break;
                }
            }
        }
        Ok(())
    }

    /// `[W_0, ..., W_n]`, enumerating scalar classes.
    pub fn weight_distribution(&self) -> Result<Vec<BigInt>, CodeError> {
        let mut w = vec![0u64; self.n + 1];
        self.for_each_projective(|x| w[self.weight(x)] += 1)?;
        let scale = BigInt::from(self.qm() - 1);
        let mut out: Vec<BigInt> = w.into_iter().map(|c| BigInt::from(c) * &scale).collect();
        out[0] = BigInt::one();
        Ok(out)
    }

    /// Number of codewords with each support, by enumeration.
    pub fn support_counts(&self) -> Result<HashMap<Subspace, u64>, CodeError> {
        let mut out = HashMap::new();
        let scale = (self.qm() - 1) as u64;
        self.for_each_projective(|x| *out.entry(self.support(x)).or_insert(0) += scale)?;
        out.insert(self.ambient.zero(), 1);
        Ok(out)
    }

    /// `rank(U)`: the `F_{q^m}`-rank of `G U^T` for a basis of `U`.
    #[must_use]
    pub fn rank_of(&self, u: &Subspace) -> usize {
        if u.is_zero() || self.gen.is_empty() {
            return 0;
        }
        let f = self.ext.as_ref();
        let us: Vec<Vec<Elem>> = u.rows().iter().map(|&r| self.ambient.unpack(r)).collect();
        let rows: Matrix = self
            .gen
            .iter()
            .map(|g| us.iter().map(|uv| g.iter().zip(uv).fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, f.embed(b))))).collect())
            .collect();
        linalg::rank(f, &rows)
    }

    /// The induced q-matroid, tabulated when the lattice is small enough.
    pub fn induced_qpm(&self) -> Result<QPolymatroid, CodeError> {
        let code = self.clone();
        let m = QPolymatroid::from_rank_fn(self.ambient.clone(), 1, move |u| code.rank_of(u) as i64);
        Ok(m.materialize(DEFAULT_CEILING).unwrap_or(m))
    }

    /// The `F_q`-linear matrix code spanned by the expansions of `a^j g_i`.
    pub fn to_matrix_code(&self, gamma: &GammaBasis) -> Result<MatrixCode, CodeError> {
        if !Arc::ptr_eq(gamma.field(), &self.ext) && gamma.field().spec_string() != self.ext.spec_string() {
            return Err(FieldError::FieldMismatch.into());
        }
        let f = self.ext.as_ref();
        let alpha = self.ext.alpha();
        let mut basis = Vec::with_capacity(self.k() * self.m());
        for g in &self.gen {
            for j in 0..self.m() {
                let s = self.ext.pow_u(alpha, j as u64);
                let row: Vec<Elem> = g.iter().map(|&x| f.mul(s, x)).collect();
                basis.push(gamma.expand(&row)?);
            }
        }
        MatrixCode::new(self.base.clone(), self.n, self.m(), basis)
    }

    /// `|C_{=U}|`, the number of codewords with support exactly `U^⊥`.
    pub fn c_eq_count(&self, u: &Subspace) -> Result<BigInt, CodeError> {
        mobius_count(&self.ambient, u, self.k(), &BigInt::from(self.qm()), |v| self.rank_of(v))
    }

    /// Number of codewords whose support is exactly `s`.
    pub fn codewords_with_support(&self, s: &Subspace) -> Result<BigInt, CodeError> {
        self.ambient.check(s)?;
        self.c_eq_count(&self.ambient.perp(s))
    }

    pub fn minimum_distance(&self) -> Result<Option<usize>, CodeError> {
        Ok(min_distance(&self.weight_distribution()?))
    }

    /// MRD test on the expanded `F_q`-dimension `km`.
    pub fn is_mrd(&self) -> Result<bool, CodeError> {
        Ok(is_mrd_params(self.k() * self.m(), self.n, self.m(), self.minimum_distance()?))
    }

    pub fn is_constant_weight(&self) -> Result<bool, CodeError> {
        Ok(constant_weight(&self.weight_distribution()?))
    }

    /// `x` is minimal when every codeword supported inside `supp x` is a multiple of `x`,
    /// i.e. when `C_{(supp x)^⊥}` is one-dimensional.
    #[must_use]
    pub fn is_minimal(&self, x: &[Elem]) -> bool {
        let s = self.support(x);
        !s.is_zero() && self.k() - self.rank_of(&self.ambient.perp(&s)) == 1
    }

    /// Scalar-class representatives of the minimal codewords of rank at most `up_to_rank`.
    pub fn minimal_codewords(&self, up_to_rank: usize) -> Result<Vec<Vec<Elem>>, CodeError> {
        let mut out = Vec::new();
        self.for_each_projective(|x| {
            if self.weight(x) <= up_to_rank && self.is_minimal(x) {
                out.push(x.to_vec());
            }
        })?;
        Ok(out)
    }

    /// Greatest `p` such that every codeword of rank at most `p` is minimal.
    pub fn minimal_rank_bound(&self) -> Result<usize, CodeError> {
        let mut p = self.n;
        self.for_each_projective(|x| {
            let w = self.weight(x);
            if w <= p && !self.is_minimal(x) {
                p = w - 1;
            }
        })?;
        Ok(p)
    }
}

/// Either kind of code.
#[derive(Debug, Clone)]
pub enum Code {
    Matrix(MatrixCode),
    Vector(VectorCode),
}

impl Code {
    #[must_use]
    pub fn n(&self) -> usize {
        match self {
            Code::Matrix(c) => c.n(),
            Code::Vector(c) => c.n(),
        }
    }

    #[must_use]
    pub fn ambient(&self) -> &Arc<AmbientSpace> {
        match self {
            Code::Matrix(c) => c.ambient(),
            Code::Vector(c) => c.ambient(),
        }
    }

    /// Size of the scalar field: `q` for matrix codes, `q^m` for vector codes.
    #[must_use]
    pub fn theta(&self) -> BigInt {
        match self {
            Code::Matrix(c) => BigInt::from(c.q()),
            Code::Vector(c) => BigInt::from(c.qm()),
        }
    }

    #[must_use]
    pub fn dual(&self) -> Self {
        match self {
            Code::Matrix(c) => Code::Matrix(c.dual()),
            Code::Vector(c) => Code::Vector(c.dual()),
        }
    }

    pub fn induced_qpm(&self) -> Result<QPolymatroid, CodeError> {
        match self {
            Code::Matrix(c) => c.induced_qpm(),
            Code::Vector(c) => c.induced_qpm(),
        }
    }

    pub fn weight_distribution(&self) -> Result<Vec<BigInt>, CodeError> {
        match self {
            Code::Matrix(c) => c.weight_distribution(),
            Code::Vector(c) => c.weight_distribution(),
        }
    }

    pub fn minimum_distance(&self) -> Result<Option<usize>, CodeError> {
        match self {
            Code::Matrix(c) => c.minimum_distance(),
            Code::Vector(c) => c.minimum_distance(),
        }
    }

    pub fn is_mrd(&self) -> Result<bool, CodeError> {
        match self {
            Code::Matrix(c) => c.is_mrd(),
            Code::Vector(c) => c.is_mrd(),
        }
    }

    pub fn c_eq_count(&self, u: &Subspace) -> Result<BigInt, CodeError> {
        match self {
            Code::Matrix(c) => c.c_eq_count(u),
            Code::Vector(c) => c.c_eq_count(u),
        }
    }

    pub fn support_counts(&self) -> Result<HashMap<Subspace, u64>, CodeError> {
        match self {
            Code::Matrix(c) => c.support_counts(),
            Code::Vector(c) => c.support_counts(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gabidulin_like_code() {
        let f4 = GaloisField::gf(4).unwrap();
        let c = VectorCode::new(f4.clone(), 2, vec![vec![Elem::ONE, f4.alpha()]]).unwrap();
        assert_eq!(c.weight_distribution().unwrap(), vec![BigInt::from(1), BigInt::from(0), BigInt::from(3)]);
        let mc = c.to_matrix_code(&GammaBasis::polynomial(f4).unwrap()).unwrap();
        assert_eq!(mc.weight_distribution().unwrap(), c.weight_distribution().unwrap());
        assert!(mc.is_mrd().unwrap());
    }

    #[test]
    fn matrix_dual_and_mobius_counts() {
        let f2 = GaloisField::gf(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = MatrixCode::random(f2, 3, 3, 4, &mut rng).unwrap();
        let d = c.dual();
        assert_eq!(d.k(), 5);
        assert!(d.dual().basis().iter().all(|b| c.contains(b)));
        let counts = c.support_counts().unwrap();
        let e = c.ambient().clone();
        for k in 0..=3 {
            for s in e.enumerate_subspaces(k, &Default::default()).unwrap() {
                let direct = counts.get(&s).copied().unwrap_or(0);
                assert_eq!(c.codewords_with_support(&s).unwrap(), BigInt::from(direct));
            }
        }
    }

    #[test]
    fn general_q_enumeration() {
        let f3 = GaloisField::gf(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = MatrixCode::random(f3, 2, 2, 2, &mut rng).unwrap();
        let w = c.weight_distribution().unwrap();
        assert_eq!(w.iter().sum::<BigInt>(), BigInt::from(9));
        assert_eq!(w[0], BigInt::one());
    }
}
