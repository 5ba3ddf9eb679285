//! Finite fields `GF(p^e)` and their extensions `GF(q^m)`.
//!
//! A field is presented as `GF(b)[x] / (f)` over a smaller field `GF(b)`,
//! bottoming out at a prime field `Z/p`. An element is stored as the integer
//! whose base-`b` digits are its coordinates in the polynomial basis
//! `1, x, ..., x^(m-1)`. The same encoding therefore serves `GF(q)` over
//! `GF(p)` and `GF(q^m)` over `GF(q)`.
//!
//! ```
//! use qpoly::field::{FieldOps, GaloisField};
//!
//! let f = GaloisField::parse_spec("GF(2^6)/x^6+x^4+x^3+x+1").unwrap();
//! let a13 = f.parse_elem("a^13").unwrap();
//! let a50 = f.parse_elem("a^50").unwrap();
//! assert_eq!(f.mul(a13, a50), f.one());
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order accepted by the constructors.
pub const MAX_ORDER: u64 = 1 << 30;

/// Fields up to this order get exp/log tables.
pub const TABLE_ORDER: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus is not irreducible over GF({0})")]
    NotIrreducible(u32),
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus has degree {found}, expected {expected}")]
    BadDegree { expected: usize, found: usize },
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the supported maximum")]
    TooLarge(u64),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("zero has no inverse")]
    DivisionByZero,
    #[error("basis elements are linearly dependent")]
    SingularBasis,
    #[error("field is a prime field and has no subfield basis")]
    NoBaseField,
}

/// A field element, encoded by its polynomial-basis digits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    #[must_use]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic needed by the generic linear algebra.
pub trait FieldOps: Send + Sync {
    fn order(&self) -> u32;
    fn add(&self, a: Elem, b: Elem) -> Elem;
    fn neg(&self, a: Elem) -> Elem;
    fn mul(&self, a: Elem, b: Elem) -> Elem;
    fn inv(&self, a: Elem) -> Option<Elem>;

    #[inline]
    fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    fn contains(&self, a: Elem) -> bool {
        a.0 < self.order()
    }
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// `GF(b^m)` presented over `GF(b)`, or a prime field when `base` is `None`.
#[derive(Debug)]
pub struct GaloisField {
    p: u32,
    order: u32,
    base: Option<Arc<GaloisField>>,
    degree: usize,
    modulus: Vec<Elem>,
    alpha: Elem,
    alpha_primitive: bool,
    tables: Option<Tables>,
    add_table: Option<Vec<u32>>,
}

impl GaloisField {
    /// The prime field `Z/p`.
    pub fn prime(p: u32) -> Result<Arc<Self>, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrimePower(p as u64));
        }
        let alpha = Elem(primitive_root(p));
        Ok(Arc::new(GaloisField {
            p,
            order: p,
            base: None,
            degree: 1,
            modulus: Vec::new(),
            alpha,
            alpha_primitive: true,
            tables: None,
            add_table: None,
        }))
    }

    /// `GF(q)` for a prime power `q`, with the default modulus when `q` is not prime.
    pub fn gf(q: u64) -> Result<Arc<Self>, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let prime = Self::prime(p as u32)?;
        if e == 1 {
            Ok(prime)
        } else {
            Self::extension_default(prime, e as usize)
        }
    }

    /// `base[x] / (modulus)`; `modulus` lists coefficients from the constant term up.
    pub fn extension(base: Arc<Self>, modulus: Vec<Elem>) -> Result<Arc<Self>, FieldError> {
        let mut modulus = modulus;
        while modulus.len() > 1 && modulus.last() == Some(&Elem::ZERO) {
            modulus.pop();
        }
        if modulus.len() < 2 {
            return Err(FieldError::BadDegree { expected: 1, found: 0 });
        }
        if modulus.iter().any(|c| !base.contains(*c)) {
            return Err(FieldError::FieldMismatch);
        }
        if *modulus.last().unwrap() != Elem::ONE {
            return Err(FieldError::NotMonic);
        }
        let m = modulus.len() - 1;
        if !poly::is_irreducible(base.as_ref(), &modulus) {
            return Err(FieldError::NotIrreducible(base.order));
        }
        let order = (base.order as u64)
            .checked_pow(m as u32)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(FieldError::TooLarge(u64::MAX))?;
        let mut field = GaloisField {
            p: base.p,
            order: order as u32,
            base: Some(base),
            degree: m,
            modulus,
            alpha: Elem::ZERO,
            alpha_primitive: false,
            tables: None,
            add_table: None,
        };
        field.alpha = field.root_of_modulus();
        field.alpha_primitive = field.has_full_order(field.alpha);
        if field.p != 2 && field.order <= 256 {
            let n = field.order;
            let mut tab = vec![0u32; (n * n) as usize];
            for a in 0..n {
                for b in 0..n {
                    tab[(a * n + b) as usize] = field.add_digits(Elem(a), Elem(b)).0;
                }
            }
            field.add_table = Some(tab);
        }
        if field.order <= TABLE_ORDER {
            field.build_tables();
        }
        Ok(Arc::new(field))
    }

    /// Extension of degree `m` using the first monic irreducible polynomial
    /// (ordered by coefficient encoding) whose root generates the unit group.
    pub fn extension_default(base: Arc<Self>, m: usize) -> Result<Arc<Self>, FieldError> {
        let b = base.order as u64;
        let count = b.checked_pow(m as u32).filter(|&c| c <= MAX_ORDER).ok_or(FieldError::TooLarge(u64::MAX))?;
        for code in 0..count {
            let mut coeffs = Vec::with_capacity(m + 1);
            let mut c = code;
            for _ in 0..m {
                coeffs.push(Elem((c % b) as u32));
                c /= b;
            }
            coeffs.push(Elem::ONE);
            if coeffs[0].is_zero() && m > 0 {
                continue;
            }
            if let Ok(f) = Self::extension(base.clone(), coeffs) {
                if f.alpha_primitive {
                    return Ok(f);
                }
            }
        }
        Err(FieldError::NotIrreducible(base.order))
    }

    /// Parses `GF(N)`, `GF(b^m)` or either followed by `/modulus`.
    pub fn parse_spec(spec: &str) -> Result<Arc<Self>, FieldError> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || FieldError::Parse(spec.to_string());
        let rest = s.strip_prefix("GF(").ok_or_else(err)?;
        let close = rest.find(')').ok_or_else(err)?;
        let inside = &rest[..close];
        let tail = &rest[close + 1..];
        let modulus_text = match tail {
            "" => None,
            t => Some(t.strip_prefix('/').ok_or_else(err)?),
        };
        let (base, m) = match inside.split_once('^') {
            Some((b, m)) => {
                let b: u64 = b.parse().map_err(|_| err())?;
                let m: usize = m.parse().map_err(|_| err())?;
                (Self::gf(b)?, m)
            }
            None => {
                let n: u64 = inside.parse().map_err(|_| err())?;
                let (p, e) = prime_power(n).ok_or(FieldError::NotPrimePower(n))?;
                (Self::prime(p as u32)?, e as usize)
            }
        };
        if m == 0 {
            return Err(err());
        }
        match modulus_text {
            None if m == 1 => Ok(base),
            None => Self::extension_default(base, m),
            Some(text) => {
                let terms = poly::parse_terms(text, 'x').ok_or_else(err)?;
                let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
                if deg != m {
                    return Err(FieldError::BadDegree { expected: m, found: deg });
                }
                let mut coeffs = vec![Elem::ZERO; deg + 1];
                for (c, k, negate) in terms {
                    let c = Elem(u32::try_from(c).map_err(|_| err())?);
                    if !base.contains(c) {
                        return Err(FieldError::FieldMismatch);
                    }
                    let c = if negate { base.neg(c) } else { c };
                    coeffs[k] = base.add(coeffs[k], c);
                }
                Self::extension(base, coeffs)
            }
        }
    }

    /// Canonical textual description, parseable by [`GaloisField::parse_spec`].
    pub fn spec_string(&self) -> String {
        match &self.base {
            None => format!("GF({})", self.p),
            Some(base) => {
                let mut s = format!("GF({}^{})/", base.order, self.degree);
                let mut first = true;
                for (k, c) in self.modulus.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    if !first {
                        s.push('+');
                    }
                    first = false;
                    let coef = if c.0 == 1 && k > 0 { String::new() } else { c.0.to_string() };
                    match k {
                        0 => s.push_str(&c.0.to_string()),
                        1 => {
                            let _ = write!(s, "{coef}x");
                        }
                        _ => {
                            let _ = write!(s, "{coef}x^{k}");
                        }
                    }
                }
                s
            }
        }
    }

    #[must_use]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the immediate base field.
    #[must_use]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[must_use]
    pub fn base(&self) -> Option<&Arc<GaloisField>> {
        self.base.as_ref()
    }

    /// Number of elements.
    #[must_use]
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Order of the immediate base field (`p` for a prime field).
    #[must_use]
    pub fn base_order(&self) -> u32 {
        self.base.as_ref().map_or(self.p, |b| b.order)
    }

    #[must_use]
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    #[must_use]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[must_use]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The distinguished element `a`: the class of `x`, or a primitive root for prime fields.
    #[must_use]
    pub fn alpha(&self) -> Elem {
        self.alpha
    }

    #[must_use]
    pub fn alpha_is_primitive(&self) -> bool {
        self.alpha_primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    /// Coordinates over the immediate base field, constant term first.
    #[must_use]
    pub fn digits(&self, a: Elem) -> Vec<Elem> {
        let b = self.base_order();
        let mut v = Vec::with_capacity(self.degree);
        let mut x = a.0;
        for _ in 0..self.degree {
            v.push(Elem(x % b));
            x /= b;
        }
        if self.base.is_none() {
            v[0] = a;
        }
        v
    }

    #[must_use]
    pub fn from_digits(&self, digits: &[Elem]) -> Elem {
        if self.base.is_none() {
            return digits.first().copied().unwrap_or(Elem::ZERO);
        }
        let b = self.base_order();
        digits.iter().rev().fold(Elem::ZERO, |acc, d| Elem(acc.0 * b + d.0))
    }

    /// Embeds an element of the immediate base field.
    #[must_use]
    pub fn embed(&self, c: Elem) -> Elem {
        c
    }

    pub fn pow(&self, a: Elem, k: i64) -> Result<Elem, FieldError> {
        if k < 0 {
            let inv = self.inv(a).ok_or(FieldError::ZeroToNegativePower)?;
            return Ok(self.pow_u(inv, k.unsigned_abs()));
        }
        Ok(self.pow_u(a, k as u64))
    }

    #[must_use]
    pub fn pow_u(&self, a: Elem, mut k: u64) -> Elem {
        if let Some(t) = &self.tables {
            if a.is_zero() {
                return if k == 0 { Elem::ONE } else { Elem::ZERO };
            }
            let n1 = (self.order - 1) as u64;
            let e = (t.log[a.0 as usize] as u64 * (k % n1)) % n1;
            return Elem(t.exp[e as usize]);
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Discrete logarithm to the base `a`, when `a` is primitive.
    #[must_use]
    pub fn log_alpha(&self, x: Elem) -> Option<u32> {
        if x.is_zero() || !self.alpha_primitive {
            return None;
        }
        if let (Some(t), Some(_)) = (&self.tables, &self.base) {
            return Some(t.log[x.0 as usize]);
        }
        let mut cur = Elem::ONE;
        for k in 0..self.order - 1 {
            if cur == x {
                return Some(k);
            }
            cur = self.mul(cur, self.alpha);
        }
        None
    }

    /// `x -> x^b` where `b` is the order of the immediate base field.
    #[must_use]
    pub fn frobenius(&self, x: Elem) -> Elem {
        match &self.base {
            None => x,
            Some(b) => self.pow_u(x, b.order as u64),
        }
    }

    /// Parses `0`, `1`, `a^k`, or a sum such as `a^5+a^2+1`.
    pub fn parse_elem(&self, text: &str) -> Result<Elem, FieldError> {
        let err = || FieldError::Parse(text.to_string());
        let terms = poly::parse_terms(text, 'a').ok_or_else(err)?;
        let mut acc = Elem::ZERO;
        for (c, k, negate) in terms {
            let coef = if self.base.is_none() {
                Elem((c % self.p as u64) as u32)
            } else {
                let c = Elem(u32::try_from(c).map_err(|_| err())?);
                if c.0 >= self.base_order() {
                    return Err(FieldError::FieldMismatch);
                }
                c
            };
            let term = self.mul(coef, self.pow_u(self.alpha, k as u64));
            let term = if negate { self.neg(term) } else { term };
            acc = self.add(acc, term);
        }
        Ok(acc)
    }

    /// Inverse of [`GaloisField::parse_elem`].
    #[must_use]
    pub fn format_elem(&self, x: Elem) -> String {
        if x.is_zero() {
            return "0".into();
        }
        if x == Elem::ONE {
            return "1".into();
        }
        if self.base.is_none() {
            return x.0.to_string();
        }
        match self.log_alpha(x) {
            Some(1) => return "a".into(),
            Some(k) => return format!("a^{k}"),
            None => {}
        }
        let mut parts = Vec::new();
        for (k, d) in self.digits(x).iter().enumerate().rev() {
            if d.is_zero() {
                continue;
            }
            let coef = if d.0 == 1 && k > 0 { String::new() } else { d.0.to_string() };
            parts.push(match k {
                0 => d.0.to_string(),
                1 => format!("{coef}a"),
                _ => format!("{coef}a^{k}"),
            });
        }
        parts.join("+")
    }

    fn root_of_modulus(&self) -> Elem {
        let base = self.base.as_ref().expect("extension");
        if self.degree == 1 {
            base.neg(self.modulus[0])
        } else {
            Elem(base.order)
        }
    }

    fn has_full_order(&self, g: Elem) -> bool {
        if g.is_zero() {
            return false;
        }
        let n1 = (self.order - 1) as u64;
        prime_factors(n1).into_iter().all(|r| self.pow_slow(g, n1 / r) != Elem::ONE)
    }

    fn pow_slow(&self, a: Elem, mut k: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_digits(acc, base);
            }
            base = self.mul_digits(base, base);
            k >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let g = if self.alpha_primitive {
            self.alpha
        } else {
            (2..self.order).map(Elem).find(|&g| self.has_full_order(g)).expect("unit group is cyclic")
        };
        let n1 = (self.order - 1) as usize;
        let mut exp = vec![0u32; 2 * n1];
        let mut log = vec![0u32; self.order as usize];
        let mut cur = Elem::ONE;
        for (i, slot) in exp.iter_mut().take(n1).enumerate() {
            *slot = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_digits(cur, g);
        }
        for i in n1..2 * n1 {
            exp[i] = exp[i - n1];
        }
        self.tables = Some(Tables { exp, log });
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        match &self.base {
            None => Elem((a.0 + b.0) % self.p),
            Some(base) => {
                let bo = base.order;
                let (mut x, mut y, mut out, mut scale) = (a.0, b.0, 0u32, 1u32);
                for _ in 0..self.degree {
                    let d = base.add(Elem(x % bo), Elem(y % bo)).0;
                    out += d * scale;
                    scale = scale.wrapping_mul(bo);
                    x /= bo;
                    y /= bo;
                }
                Elem(out)
            }
        }
    }

    fn neg_digits(&self, a: Elem) -> Elem {
        match &self.base {
            None => Elem((self.p - a.0) % self.p),
            Some(base) => {
                let digits: Vec<Elem> = self.digits(a).into_iter().map(|d| base.neg(d)).collect();
                self.from_digits(&digits)
            }
        }
    }

    fn mul_digits(&self, a: Elem, b: Elem) -> Elem {
        let base = match &self.base {
            None => return Elem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
            Some(base) => base,
        };
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let m = self.degree;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![Elem::ZERO; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = base.add(prod[i + j], base.mul(x, y));
            }
        }
        for deg in (m..prod.len()).rev() {
            let c = prod[deg];
            if c.is_zero() {
                continue;
            }
            for i in 0..m {
                let t = base.mul(c, self.modulus[i]);
                prod[deg - m + i] = base.sub(prod[deg - m + i], t);
            }
            prod[deg] = Elem::ZERO;
        }
        self.from_digits(&prod[..m])
    }
}

impl FieldOps for GaloisField {
    #[inline]
    fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if let Some(t) = &self.add_table {
            return Elem(t[(a.0 * self.order + b.0) as usize]);
        }
        self.add_digits(a, b)
    }

    #[inline]
    fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        self.neg_digits(a)
    }

    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.tables {
            if a.0 == 0 || b.0 == 0 {
                return Elem::ZERO;
            }
            return Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]);
        }
        self.mul_digits(a, b)
    }

    fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        if let Some(t) = &self.tables {
            let n1 = self.order - 1;
            return Some(Elem(t.exp[((n1 - t.log[a.0 as usize]) % n1) as usize]));
        }
        if self.base.is_none() {
            return Some(Elem(mod_inverse(a.0 as i64, self.p as i64) as u32));
        }
        Some(self.pow_slow(a, (self.order - 2) as u64))
    }
}

/// A basis of `GF(q^m)` over `GF(q)`, used to expand vectors into matrices.
#[derive(Debug, Clone)]
pub struct GammaBasis {
    field: Arc<GaloisField>,
    basis: Vec<Elem>,
    /// Rows map polynomial-basis digits to coordinates; `None` for the polynomial basis.
    to_coords: Option<Vec<Vec<Elem>>>,
}

impl GammaBasis {
    /// The basis `1, a, ..., a^(m-1)`.
    pub fn polynomial(field: Arc<GaloisField>) -> Result<Self, FieldError> {
        if field.base.is_none() {
            return Err(FieldError::NoBaseField);
        }
        let basis = (0..field.degree).map(|k| field.pow_u(field.alpha, k as u64)).collect();
        Ok(GammaBasis { field, basis, to_coords: None })
    }

    pub fn new(field: Arc<GaloisField>, basis: Vec<Elem>) -> Result<Self, FieldError> {
        let base = field.base.clone().ok_or(FieldError::NoBaseField)?;
        let m = field.degree;
        if basis.len() != m || basis.iter().any(|e| !field.contains(*e)) {
            return Err(FieldError::SingularBasis);
        }
        let rows: Vec<Vec<Elem>> = basis.iter().map(|&g| field.digits(g)).collect();
        let inv = crate::linalg::inverse(base.as_ref(), &rows).ok_or(FieldError::SingularBasis)?;
        Ok(GammaBasis { field, basis, to_coords: Some(inv) })
    }

    #[must_use]
    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    #[must_use]
    pub fn elements(&self) -> &[Elem] {
        &self.basis
    }

    /// Coordinates of `x` with respect to this basis.
    #[must_use]
    pub fn coords(&self, x: Elem) -> Vec<Elem> {
        let d = self.field.digits(x);
        match &self.to_coords {
            None => d,
            Some(inv) => {
                let base = self.field.base.as_ref().unwrap();
                crate::linalg::vec_mat(base.as_ref(), &d, inv)
            }
        }
    }

    /// `sum_i c_i * gamma_i`.
    #[must_use]
    pub fn combine(&self, coords: &[Elem]) -> Elem {
        coords.iter().zip(&self.basis).fold(Elem::ZERO, |acc, (&c, &g)| {
            self.field.add(acc, self.field.mul(self.field.embed(c), g))
        })
    }

    /// Row `i` of the result holds the coordinates of `xs[i]`.
    pub fn expand(&self, xs: &[Elem]) -> Result<Vec<Vec<Elem>>, FieldError> {
        xs.iter()
            .map(|&x| if self.field.contains(x) { Ok(self.coords(x)) } else { Err(FieldError::FieldMismatch) })
            .collect()
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, e))` when `n = p^e` with `p` prime and `e >= 1`.
#[must_use]
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let (mut x, mut e) = (n, 0);
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    (x == 1).then_some((p, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let p = p as u64;
    let fs = prime_factors(p - 1);
    (2..p).find(|&g| fs.iter().all(|&r| mod_pow(g, (p - 1) / r, p) != 1)).unwrap() as u32
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (m, a.rem_euclid(m), 0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m)
}

/// Dense polynomials over a field, coefficients from the constant term up.
pub(crate) mod poly {
    use super::{Elem, FieldOps};

    fn trim(v: &mut Vec<Elem>) {
        while v.last() == Some(&Elem::ZERO) {
            v.pop();
        }
    }

    fn rem<F: FieldOps + ?Sized>(f: &F, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = f.inv(m[dm]).expect("nonzero modulus");
        while r.len() > dm {
            let top = r.len() - 1;
            let c = f.mul(r[top], lead_inv);
            for i in 0..=dm {
                let t = f.mul(c, m[i]);
                r[top - dm + i] = f.sub(r[top - dm + i], t);
            }
            trim(&mut r);
        }
        r
    }

    fn mulmod<F: FieldOps + ?Sized>(f: &F, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![Elem::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        rem(f, &prod, m)
    }

    fn gcd<F: FieldOps + ?Sized>(f: &F, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(f, &x, &y);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or's test: no irreducible factor of degree up to `deg/2`.
    pub(crate) fn is_irreducible<F: FieldOps + ?Sized>(f: &F, m: &[Elem]) -> bool {
        let deg = m.len() - 1;
        if deg <= 1 {
            return deg == 1;
        }
        let q = f.order() as u64;
        let x = vec![Elem::ZERO, Elem::ONE];
        let mut h = x.clone();
        for _ in 0..deg / 2 {
            // h <- h^q mod m
            let mut acc = vec![Elem::ONE];
            let mut b = h.clone();
            let mut e = q;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(f, &acc, &b, m);
                }
                b = mulmod(f, &b, &b, m);
                e >>= 1;
            }
            h = acc;
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), Elem::ZERO);
            diff[1] = f.sub(diff[1], Elem::ONE);
            trim(&mut diff);
            if diff.is_empty() {
                return false;
            }
            if gcd(f, m, &diff).len() > 1 {
                return false;
            }
        }
        true
    }

    /// Terms `(coefficient, exponent, negated)` of an expression such as `x^6+x^4+x+1`.
    pub(crate) fn parse_terms(text: &str, var: char) -> Option<Vec<(u64, usize, bool)>> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        let mut out = Vec::new();
        let mut chunk = String::new();
        let mut negate = false;
        let mut flush = |chunk: &mut String, negate: bool| -> Option<()> {
            if chunk.is_empty() {
                return None;
            }
            let t = chunk.replace('*', "");
            let (coef, exp) = match t.find(var) {
                None => (t.parse().ok()?, 0),
                Some(pos) => {
                    let coef = if pos == 0 { 1 } else { t[..pos].parse().ok()? };
                    let after = &t[pos + var.len_utf8()..];
                    let exp = if after.is_empty() { 1 } else { after.strip_prefix('^')?.parse().ok()? };
                    (coef, exp)
                }
            };
            out.push((coef, exp, negate));
            chunk.clear();
            Some(())
        };
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '+' | '-' if i > 0 && !chunk.is_empty() => {
                    flush(&mut chunk, negate)?;
                    negate = ch == '-';
                }
                '-' if i == 0 => negate = true,
                _ => chunk.push(ch),
            }
        }
        flush(&mut chunk, negate)?;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn reducible_modulus_rejected() {
        let err = GaloisField::parse_spec("GF(2^2)/x^2+1").unwrap_err();
        assert_eq!(err, FieldError::NotIrreducible(2));
        let err = GaloisField::parse_spec("GF(2^4)/x^4+x^2+1").unwrap_err();
        assert_eq!(err, FieldError::NotIrreducible(2));
    }

    #[test]
    fn degree_mismatch_rejected() {
        let err = GaloisField::parse_spec("GF(2^3)/x^2+x+1").unwrap_err();
        assert_eq!(err, FieldError::BadDegree { expected: 3, found: 2 });
    }

    #[test]
    fn non_monic_rejected() {
        let base = GaloisField::prime(3).unwrap();
        let err = GaloisField::extension(base, vec![Elem(1), Elem(0), Elem(2)]).unwrap_err();
        assert_eq!(err, FieldError::NotMonic);
    }

    #[test]
    fn zero_negative_power() {
        let f = GaloisField::gf(8).unwrap();
        assert_eq!(f.pow(Elem::ZERO, -1), Err(FieldError::ZeroToNegativePower));
        assert_eq!(f.pow(Elem::ZERO, 0), Ok(Elem::ONE));
    }

    #[test]
    fn gf64_alpha_power_identity() {
        let f = GaloisField::parse_spec("GF(2^6)/x^6+x^4+x^3+x+1").unwrap();
        assert!(f.alpha_is_primitive());
        assert_eq!(f.mul(f.parse_elem("a^13").unwrap(), f.parse_elem("a^50").unwrap()), Elem::ONE);
        assert_eq!(f.parse_elem("a^63").unwrap(), Elem::ONE);
        // a^6 = a^4 + a^3 + a + 1
        assert_eq!(f.parse_elem("a^6").unwrap(), f.parse_elem("a^4+a^3+a+1").unwrap());
    }

    #[test]
    fn spec_string_round_trip() {
        for spec in ["GF(2^6)/x^6+x^4+x^3+x+1", "GF(3^2)/x^2+1", "GF(4^2)/x^2+x+2", "GF(5)"] {
            let f = GaloisField::parse_spec(spec).unwrap();
            let g = GaloisField::parse_spec(&f.spec_string()).unwrap();
            assert_eq!(f.modulus(), g.modulus(), "{spec}");
            assert_eq!(f.order(), g.order());
        }
    }

    #[test]
    fn default_moduli_are_primitive() {
        for (b, m) in [(2u64, 5usize), (2, 6), (3, 3), (4, 2), (2, 1)] {
            let base = GaloisField::gf(b).unwrap();
            let f = GaloisField::extension_default(base, m).unwrap();
            assert!(f.alpha_is_primitive());
            assert_eq!(f.order() as u64, b.pow(m as u32));
        }
    }

    #[test]
    fn element_text_round_trip() {
        for spec in ["GF(2^6)/x^6+x^4+x^3+x+1", "GF(3^3)", "GF(7)", "GF(4^2)"] {
            let f = GaloisField::parse_spec(spec).unwrap();
            for x in f.elements() {
                assert_eq!(f.parse_elem(&f.format_elem(x)).unwrap(), x, "{spec}");
            }
        }
    }

    #[test]
    fn frobenius_fixes_base_field() {
        let f = GaloisField::parse_spec("GF(4^3)").unwrap();
        let fixed = f.elements().filter(|&x| f.frobenius(x) == x).count();
        assert_eq!(fixed, 4);
        let f = GaloisField::parse_spec("GF(2^6)").unwrap();
        for x in f.elements() {
            let mut y = x;
            for _ in 0..6 {
                y = f.frobenius(y);
            }
            assert_eq!(y, x);
        }
    }

    #[test]
    fn table_free_multiplication_agrees() {
        // GF(2^17) exceeds the table threshold.
        let f = GaloisField::parse_spec("GF(2^17)").unwrap();
        let a = f.pow_u(f.alpha(), 1000);
        let b = f.pow_u(f.alpha(), 131_071 - 1000);
        assert_eq!(f.mul(a, b), Elem::ONE);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
    }

    #[test]
    fn gamma_expansion_of_custom_basis() {
        let f = GaloisField::parse_spec("GF(2^3)").unwrap();
        let a = f.alpha();
        let basis = vec![f.one(), f.add(a, f.one()), f.pow_u(a, 2)];
        let g = GammaBasis::new(f.clone(), basis).unwrap();
        for x in f.elements() {
            assert_eq!(g.combine(&g.coords(x)), x);
        }
        let dependent = vec![f.one(), a, f.add(a, f.one())];
        assert_eq!(GammaBasis::new(f, dependent).unwrap_err(), FieldError::SingularBasis);
    }
}
