//! Gaussian binomial coefficients and the Möbius function of the subspace lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Number of `b`-dimensional subspaces of an `a`-dimensional space over `F_q`.
/// Zero when `b > a`.
#[must_use]
pub fn qbin(a: usize, b: usize, q: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let q = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..b {
        num *= q.pow((a - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// [`qbin`] in machine integers; `None` on overflow.
#[must_use]
pub fn qbin_u128(a: usize, b: usize, q: u64) -> Option<u128> {
    if b > a {
        return Some(0);
    }
    let mut row = vec![0u128; b + 1];
    row[0] = 1;
    // q-Pascal: [a, b] = [a-1, b-1] + q^b [a-1, b]
    for i in 1..=a {
        for j in (1..=b.min(i)).rev() {
            let qj = (q as u128).checked_pow(j as u32)?;
            row[j] = row[j - 1].checked_add(qj.checked_mul(row[j])?)?;
        }
    }
    Some(row[b])
}

/// Total number of subspaces of `F_q^n`.
#[must_use]
pub fn count_subspaces(n: usize, q: u64) -> BigInt {
    (0..=n).map(|k| qbin(n, k, q)).sum()
}

/// `mu(U, V)` for `U <= V` with `dim V - dim U = gap`: `(-1)^gap q^(gap choose 2)`.
#[must_use]
pub fn mobius_gap(gap: usize, q: u64) -> BigInt {
    let mag = BigInt::from(q).pow((gap * gap.saturating_sub(1) / 2) as u32);
    if gap % 2 == 1 {
        -mag
    } else {
        mag
    }
}

/// [`mobius_gap`] as `i128`; exact for every lattice small enough to enumerate.
#[must_use]
pub fn mobius_gap_i128(gap: usize, q: u64) -> i128 {
    let mag = (q as i128).pow((gap * gap.saturating_sub(1) / 2) as u32);
    if gap % 2 == 1 {
        -mag
    } else {
        mag
    }
}

/// Memoised Gaussian binomials for one `q`.
#[derive(Debug, Clone)]
pub struct GaussianTable {
    q: u64,
    rows: Vec<Vec<BigInt>>,
}

impl GaussianTable {
    #[must_use]
    pub fn new(q: u64, max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max + 1);
        for a in 0..=max {
            let mut row = vec![BigInt::zero(); a + 1];
            row[0] = BigInt::one();
            row[a] = BigInt::one();
            for b in 1..a {
                let qb = BigInt::from(q).pow(b as u32);
                row[b] = &rows[a - 1][b - 1] + qb * &rows[a - 1][b];
            }
            rows.push(row);
        }
        GaussianTable { q, rows }
    }

    #[must_use]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// `qbin(a, b)`, zero when `b > a`; falls back to direct evaluation beyond the table.
    #[must_use]
    pub fn get(&self, a: usize, b: usize) -> BigInt {
        if b > a {
            return BigInt::zero();
        }
        match self.rows.get(a) {
            Some(row) => row[b].clone(),
            None => qbin(a, b, self.q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(qbin(4, 2, 2), BigInt::from(35));
        assert_eq!(qbin(6, 3, 2), BigInt::from(1395));
        assert_eq!(qbin(8, 4, 2), BigInt::from(200787));
        assert_eq!(qbin(3, 5, 2), BigInt::zero());
        assert_eq!(qbin(5, 0, 7), BigInt::one());
        assert_eq!(count_subspaces(8, 2), BigInt::from(417199));
    }

    #[test]
    fn table_matches_product_formula() {
        for q in [2u64, 3, 4, 5] {
            let t = GaussianTable::new(q, 9);
            for a in 0..=9 {
                for b in 0..=a + 1 {
                    assert_eq!(t.get(a, b), qbin(a, b, q));
                    assert_eq!(BigInt::from(qbin_u128(a, b, q).unwrap()), qbin(a, b, q));
                }
            }
        }
    }

    #[test]
    fn mobius_values() {
        assert_eq!(mobius_gap(0, 2), BigInt::one());
        assert_eq!(mobius_gap(1, 2), BigInt::from(-1));
        assert_eq!(mobius_gap(3, 2), BigInt::from(-8));
        assert_eq!(mobius_gap(4, 3), BigInt::from(729));
        assert_eq!(mobius_gap_i128(3, 2), -8);
    }
}
