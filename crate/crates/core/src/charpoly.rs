//! Corank, characteristic polynomials and weight enumerators.
//!
//! With `ℓ(A) = rank(E) - rank(A)`, the characteristic polynomial is
//! `p(M; z) = Σ_X μ(0, X) z^ℓ(X)` and the contraction polynomials are
//! `p(M/B; z) = Σ_{Y >= B} μ(B, Y) z^ℓ(Y)`, with `p(M.X) = p(M/X^⊥)`.
//!
//! [`ContractionTable`] computes `p(M/B)` for every `B` at once. Since
//! `Σ_{Y >= B} μ(B, Y) = [B = E]`, only the `Y` with `ℓ(Y) > 0` contribute
//! beyond the top element, and each such `Y` pushes `μ(B, Y)(z^ℓ(Y) - 1)`
//! down to its subspaces.
//!
//! ```
//! use qpoly::charpoly::char_poly;
//! use qpoly::field::GaloisField;
//! use qpoly::qpm::QPolymatroid;
//!
//! let u = QPolymatroid::uniform(GaloisField::gf(2).unwrap(), 1, 1).unwrap();
//! assert_eq!(char_poly(&u).unwrap().to_string(), "z - 1");
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gaussian::{mobius_gap, mobius_gap_i128};
use crate::lattice::{shared_catalog, LatticeIndex, Subspace};
use crate::poly::IntPoly;
use crate::qpm::{shared_chart, QPolymatroid, QpmError};

/// `ℓ(A) = rank(E) - rank(A)` for `A` in the ground interval.
pub fn ell(m: &QPolymatroid, a: &Subspace) -> Result<i64, QpmError> {
    Ok(m.full_rank() - m.rank(a)?)
}

/// Number of subspaces with each `(dimension, ℓ)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    /// `counts[dim][ℓ]`.
    pub counts: Vec<Vec<u64>>,
}

impl Tally {
    #[must_use]
    pub fn get(&self, dim: usize, ell: usize) -> u64 {
        self.counts.get(dim).and_then(|row| row.get(ell)).copied().unwrap_or(0)
    }

    /// `Σ_dim μ(0, dim) Σ_ℓ count z^ℓ`.
    #[must_use]
    pub fn to_char_poly(&self, q: u32) -> IntPoly {
        let mut out = IntPoly::zero();
        for (d, row) in self.counts.iter().enumerate() {
            let mu = mobius_gap(d, q as u64);
            for (l, &c) in row.iter().enumerate() {
                if c != 0 {
                    out += &IntPoly::monomial(&mu * BigInt::from(c), l);
                }
            }
        }
        out
    }
}

fn ell_table(m: &QPolymatroid) -> Result<(Arc<LatticeIndex>, Vec<u32>), QpmError> {
    let idx = m.index()?;
    let ranks = m.ranks()?;
    let full = m.full_rank();
    let ell = ranks
        .iter()
        .map(|&r| u32::try_from(full - r as i64).map_err(|_| QpmError::NotAPolymatroid("rank exceeds rank(E)".into())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((idx, ell))
}

fn tally_by(m: &QPolymatroid, perp: bool) -> Result<Tally, QpmError> {
    let (idx, ell) = ell_table(m)?;
    let perm = if perp { Some(m.perp_indices()?) } else { None };
    let width = ell.iter().copied().max().unwrap_or(0) as usize + 1;
    let counts = (0..=m.dim())
        .into_par_iter()
        .map(|d| {
            let mut row = vec![0u64; width];
            for i in idx.dim_range(d) {
                let j = perm.as_ref().map_or(i as usize, |p| p[i as usize] as usize);
                row[ell[j] as usize] += 1;
            }
            row
        })
        .collect();
    Ok(Tally { counts })
}

/// Counts of subspaces `U` by `dim U` and `ℓ(U)`.
pub fn tally(m: &QPolymatroid) -> Result<Tally, QpmError> {
    tally_by(m, false)
}

/// Counts of subspaces `U` by `dim U` and `ℓ(U^⊥)`.
pub fn tally_perp(m: &QPolymatroid) -> Result<Tally, QpmError> {
    tally_by(m, true)
}

/// `p(M; z)`, from the dimension/corank tally.
pub fn char_poly(m: &QPolymatroid) -> Result<IntPoly, QpmError> {
    Ok(tally(m)?.to_char_poly(m.q()))
}

/// `Σ_{B <= Y <= E} μ(B, Y) z^ℓ(Y)` for a chart subspace `B`, summed directly.
pub(crate) fn interval_poly(m: &QPolymatroid, b: &Subspace) -> Result<IntPoly, QpmError> {
    let chart = m.chart();
    let full = m.full_rank();
    let mut coeffs: Vec<BigInt> = Vec::new();
    for y in chart.interval(b, &chart.full(), None)? {
        let l = (full - m.rank_chart(&y)) as usize;
        if coeffs.len() <= l {
            coeffs.resize(l + 1, BigInt::default());
        }
        coeffs[l] += mobius_gap(y.dim() - b.dim(), m.q() as u64);
    }
    Ok(IntPoly::new(coeffs))
}

/// `p(M/T; z)`, summed over the interval `[T, E]`.
pub fn char_poly_quotient(m: &QPolymatroid, t: &Subspace) -> Result<IntPoly, QpmError> {
    interval_poly(m, &m.frame().to_chart(t)?)
}

/// `p(M.X; z)`, summed over the interval `[X^⊥, E]` without building the quotient.
pub fn char_poly_contraction(m: &QPolymatroid, x: &Subspace) -> Result<IntPoly, QpmError> {
    let z = m.frame().to_chart(x)?;
    interval_poly(m, &m.chart().perp(&z))
}

/// `p(M/B; z)` for every chart subspace `B`, stored densely as `i128`.
#[derive(Debug, Clone)]
pub struct ContractionTable {
    index: Arc<LatticeIndex>,
    perp: Option<Arc<Vec<u32>>>,
    stride: usize,
    data: Vec<i128>,
}

impl ContractionTable {
    pub fn new(m: &QPolymatroid) -> Result<Self, QpmError> {
        let (index, ell) = ell_table(m)?;
        let total = index.total() as usize;
        let stride = ell.iter().copied().max().unwrap_or(0) as usize + 1;
        let q = m.q();
        let d = m.dim();
        let chart = m.chart().clone();
        let chunks: Vec<(usize, Vec<u64>)> = (0..=d)
            .map(|k| (k, index.dim_range(k).filter(|&i| ell[i as usize] > 0).collect::<Vec<u64>>()))
            .collect();
        let work: Vec<(usize, &[u64])> = chunks
            .iter()
            .flat_map(|(k, ids)| ids.chunks(4096).map(move |c| (*k, c)))
            .collect();
        let data = work
            .par_iter()
            .try_fold(
                || vec![0i128; total * stride],
                |mut acc, &(k, ids)| -> Result<Vec<i128>, QpmError> {
                    let subs = shared_catalog(q, k)?;
                    let coeff_space = shared_chart(q, k);
                    let mus: Vec<i128> = (0..=k).map(|j| mobius_gap_i128(k - j, q as u64)).collect();
                    for &yi in ids {
                        let y = index.unrank(yi);
                        let l = ell[yi as usize] as usize;
                        for (j, layer) in subs.iter().enumerate() {
                            let mu = mus[j];
                            for c in layer {
                                let b = chart.map_through(&coeff_space, c, &y);
                                let at = index.index(&b) as usize * stride;
                                acc[at + l] += mu;
                                acc[at] -= mu;
                            }
                        }
                    }
                    Ok(acc)
                },
            )
            .try_reduce(
                || vec![0i128; total * stride],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    Ok(a)
                },
            )?;
        let mut data = data;
        data[(total - 1) * stride] += 1;
        Ok(ContractionTable { index, perp: m.perp_indices().ok(), stride, data })
    }

    #[must_use]
    pub fn index(&self) -> &Arc<LatticeIndex> {
        &self.index
    }

    /// Number of coefficient slots per polynomial.
    #[must_use]
    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Coefficients of `p(M/B)` for the chart subspace with index `b`.
    #[must_use]
    pub fn quotient_row(&self, b: u64) -> &[i128] {
        let at = b as usize * self.stride;
        &self.data[at..at + self.stride]
    }

    /// Coefficients of `p(M.X)` for the chart subspace with index `x`.
    #[must_use]
    pub fn dot_row(&self, x: u64) -> &[i128] {
        let perp = self.perp.as_ref().expect("perp indices");
        self.quotient_row(perp[x as usize] as u64)
    }

    #[must_use]
    pub fn quotient(&self, b: &Subspace) -> IntPoly {
        IntPoly::from_i128(self.quotient_row(self.index.index(b)))
    }

    /// `p(M.X)` for a chart subspace `X`.
    #[must_use]
    pub fn dot(&self, x: &Subspace) -> IntPoly {
        IntPoly::from_i128(self.dot_row(self.index.index(x)))
    }

    /// Chart index of the perp of `x`.
    #[must_use]
    pub fn perp_of(&self, x: u64) -> u64 {
        self.perp.as_ref().expect("perp indices")[x as usize] as u64
    }

    /// `A_M(i; z)` for every `i`, using `X ↦ X^⊥` between dimensions `i` and `n - i`.
    #[must_use]
    pub fn weight_enumerator(&self) -> WeightEnumerator {
        let n = self.index.n();
        let entries = (0..=n)
            .map(|i| {
                let mut acc = vec![0i128; self.stride];
                for b in self.index.dim_range(n - i) {
                    acc.iter_mut().zip(self.quotient_row(b)).for_each(|(a, v)| *a += v);
                }
                IntPoly::from_i128(&acc)
            })
            .collect();
        WeightEnumerator { entries }
    }

    /// `A_{M/T}(j; z) = Σ_{X <= T^⊥, dim X = j} p(M.X; z)` for a chart subspace `T`,
    /// rewritten as a sum of `p(M/B)` over `B >= T`.
    pub fn contraction_enumerator(&self, m: &QPolymatroid, t: &Subspace) -> Result<WeightEnumerator, QpmError> {
        let n = self.index.n();
        let chart = m.chart();
        let mut acc = vec![vec![0i128; self.stride]; n - t.dim() + 1];
        for b in chart.interval(t, &chart.full(), None)? {
            let row = self.quotient_row(self.index.index(&b));
            acc[n - b.dim()].iter_mut().zip(row).for_each(|(a, v)| *a += v);
        }
        Ok(WeightEnumerator { entries: acc.iter().map(|c| IntPoly::from_i128(c)).collect() })
    }
}

/// `[A_M(i; z) : 0 <= i <= n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEnumerator {
    pub entries: Vec<IntPoly>,
}

impl WeightEnumerator {
    #[must_use]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[must_use]
    pub fn get(&self, i: usize) -> IntPoly {
        self.entries.get(i).cloned().unwrap_or_default()
    }

    #[must_use]
    pub fn eval(&self, theta: &BigInt) -> Vec<BigInt> {
        self.entries.iter().map(|p| p.eval(theta)).collect()
    }
}

/// `A_M(i; z) = Σ_{dim X = i} p(M.X; z)`.
pub fn weight_enumerator(m: &QPolymatroid) -> Result<WeightEnumerator, QpmError> {
    Ok(ContractionTable::new(m)?.weight_enumerator())
}

/// `A_M(i; z)` with every `p(M.X; z)` summed directly over its interval.
pub fn weight_enumerator_direct(m: &QPolymatroid) -> Result<WeightEnumerator, QpmError> {
    let idx = m.index()?;
    let chart = m.chart();
    let entries = (0..=m.dim())
        .map(|i| {
            let mut acc = IntPoly::zero();
            for x in idx.iter_dim(i) {
                acc += &interval_poly(m, &chart.perp(&x))?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>, QpmError>>()?;
    Ok(WeightEnumerator { entries })
}

/// `A_{M/T}(j; z)` via sums over `X <= T^⊥`; the quotient is never built.
pub fn weight_enumerator_of_contraction(m: &QPolymatroid, t: &Subspace) -> Result<WeightEnumerator, QpmError> {
    let tc = m.frame().to_chart(t)?;
    ContractionTable::new(m)?.contraction_enumerator(m, &tc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaloisField;

    #[test]
    fn uniform_small() {
        let f = GaloisField::gf(2).unwrap();
        let u = QPolymatroid::uniform(f.clone(), 1, 1).unwrap();
        assert_eq!(char_poly(&u).unwrap(), IntPoly::from_i64(&[-1, 1]));
        let u = QPolymatroid::uniform(f, 2, 4).unwrap();
        let p = char_poly(&u).unwrap();
        assert_eq!(p.eval(&BigInt::from(1)), BigInt::from(0));
        let w = weight_enumerator(&u).unwrap();
        assert_eq!(w, weight_enumerator_direct(&u).unwrap());
        assert_eq!(w.get(0), IntPoly::one());
    }

    #[test]
    fn bulk_matches_direct_on_every_subspace() {
        let f = GaloisField::gf(3).unwrap();
        let u = QPolymatroid::uniform(f, 2, 3).unwrap();
        let table = ContractionTable::new(&u).unwrap();
        for x in u.index().unwrap().iter() {
            assert_eq!(table.dot(&x), char_poly_contraction(&u, &x).unwrap());
            assert_eq!(table.quotient(&x), char_poly_quotient(&u, &x).unwrap());
        }
    }

    #[test]
    fn trivial_lattice() {
        let f = GaloisField::gf(2).unwrap();
        let u = QPolymatroid::uniform(f, 0, 0).unwrap();
        assert_eq!(char_poly(&u).unwrap(), IntPoly::one());
    }
}
