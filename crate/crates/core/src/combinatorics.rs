//! Factorials, binomials, integer Beta values and the combinatorial
//! constants that weight the moment integrals.

use alloc::borrow::Cow;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Memoized table of `n!` for `n <= limit`. Requests past the limit are
/// computed on the fly.
#[derive(Debug, Clone)]
pub struct Factorials {
    table: Vec<BigInt>,
}

impl Factorials {
    pub fn with_limit(limit: usize) -> Self {
        let mut table = Vec::with_capacity(limit + 1);
        table.push(BigInt::one());
        for n in 1..=limit {
            let next = &table[n - 1] * BigInt::from(n);
            table.push(next);
        }
        Self { table }
    }

    pub fn limit(&self) -> usize {
        self.table.len() - 1
    }

    pub fn get(&self, n: usize) -> Cow<'_, BigInt> {
        match self.table.get(n) {
            Some(v) => Cow::Borrowed(v),
            None => {
                let last = self.limit();
                let mut acc = self.table[last].clone();
                for k in last + 1..=n {
                    acc *= BigInt::from(k);
                }
                Cow::Owned(acc)
            }
        }
    }

    /// `n! / m!` for `m <= n`.
    pub fn falling_ratio(&self, n: usize, m: usize) -> BigInt {
        debug_assert!(m <= n);
        let mut acc = BigInt::one();
        for k in m + 1..=n {
            acc *= BigInt::from(k);
        }
        acc
    }

    /// `B(m, n)` for positive integers.
    pub fn beta(&self, m: i64, n: i64) -> Result<Rational> {
        if m <= 0 || n <= 0 {
            return Err(Error::BetaDomain { m, n });
        }
        let (m, n) = (m as usize, n as usize);
        let num = self.get(m - 1).into_owned() * self.get(n - 1).as_ref();
        Ok(Rational::new(num, self.get(m + n - 1).into_owned()))
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `C(n, k)`, zero whenever `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// `B(m, n) = (m-1)!(n-1)!/(m+n-1)!` for positive integers.
pub fn beta_int(m: i64, n: i64) -> Result<Rational> {
    if m <= 0 || n <= 0 {
        return Err(Error::BetaDomain { m, n });
    }
    let num = factorial((m - 1) as u64) * factorial((n - 1) as u64);
    Ok(Rational::new(num, factorial((m + n - 1) as u64)))
}

pub fn delta(j: u64) -> i64 {
    if j == 0 {
        1
    } else {
        -1
    }
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The shift weights `Ω_r(i'', n)` for `i'' ∈ {0, 1, 2}` and `n >= -2`.
pub fn omega(r: u32, i2pp: u32, n: i64) -> Result<BigInt> {
    if r == 0 {
        return Err(Error::InvalidArgument(format!(
            "omega needs r >= 1, got {r}"
        )));
    }
    if n < -2 {
        return Err(Error::InvalidArgument(format!(
            "omega needs n >= -2, got {n}"
        )));
    }
    let r = r as i64;
    let out = match i2pp {
        0 => BigInt::from(sign(n + 1)) * binomial(r, n + 2),
        1 | 2 => {
            let mut acc = BigInt::zero();
            for jp in -2..=(r - 2).min(n) {
                let weight = BigInt::from(sign(jp + 1)) * binomial(r, jp + 2);
                let rest = (n - jp) as u64;
                let conv = if i2pp == 1 {
                    delta(rest)
                } else {
                    (0..=rest).map(|j1| delta(j1) * delta(rest - j1)).sum()
                };
                acc += weight * BigInt::from(conv);
            }
            acc
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "omega needs i'' in {{0,1,2}}, got {i2pp}"
            )))
        }
    };
    Ok(out)
}

/// `b_r(i1', i2') = Σ_τ C(i1',τ) C(i2',τ) τ! r^(i1'+i2'-2τ)`.
pub fn b_const(r: u32, i1p: u32, i2p: u32) -> BigInt {
    let r = BigInt::from(r);
    (0..=i1p.min(i2p))
        .map(|tau| {
            binomial(i1p as i64, tau as i64)
                * binomial(i2p as i64, tau as i64)
                * factorial(tau as u64)
                * num_traits::pow(r.clone(), (i1p + i2p - 2 * tau) as usize)
        })
        .sum()
}

/// A split `i = i' + i''` of a mollifier index; only totals 0 and 2 occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair {
    pub i_prime: u32,
    pub i_dprime: u32,
}

impl IndexPair {
    /// Every admissible split, in a fixed order.
    pub const ALL: [IndexPair; 4] = [
        IndexPair {
            i_prime: 0,
            i_dprime: 0,
        },
        IndexPair {
            i_prime: 0,
            i_dprime: 2,
        },
        IndexPair {
            i_prime: 1,
            i_dprime: 1,
        },
        IndexPair {
            i_prime: 2,
            i_dprime: 0,
        },
    ];

    pub fn new(i_prime: u32, i_dprime: u32) -> Result<Self> {
        match i_prime + i_dprime {
            0 | 2 => Ok(Self { i_prime, i_dprime }),
            t => Err(Error::InvalidSplit(format!(
                "{i_prime} + {i_dprime} = {t}, expected 0 or 2"
            ))),
        }
    }

    /// The polynomial index `i = i' + i''`.
    pub fn total(self) -> u32 {
        self.i_prime + self.i_dprime
    }
}

/// `c_r(i1', i2', i1'', i2'')`.
pub fn c_const(r: u32, i1p: u32, i2p: u32, i1pp: u32, i2pp: u32) -> Result<Rational> {
    if r == 0 {
        return Err(Error::InvalidArgument("c_r needs r >= 1".into()));
    }
    let s1 = IndexPair::new(i1p, i1pp)?;
    let s2 = IndexPair::new(i2p, i2pp)?;
    Ok(c_const_split(r, s1, s2))
}

pub(crate) fn c_const_split(r: u32, s1: IndexPair, s2: IndexPair) -> Rational {
    let num = binomial(s1.total() as i64, s1.i_prime as i64)
        * binomial(s2.total() as i64, s2.i_prime as i64)
        * b_const(r, s1.i_prime, s2.i_prime);
    let r2 = (r * r) as u64;
    let den = factorial(r2 + (s1.i_prime + s2.i_prime) as u64 - 1)
        * factorial((r + s1.i_dprime - 1) as u64)
        * factorial((r + s2.i_dprime - 1) as u64);
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        // iterated-product oracle
        let oracle: u64 = (1..=20u64).product();
        assert_eq!(factorial(20), BigInt::from(oracle));
        assert_eq!(factorial(20), BigInt::from(2432902008176640000u64));
    }

    #[test]
    fn table_matches_direct_and_extends_past_limit() {
        let t = Factorials::with_limit(30);
        for n in [0usize, 1, 7, 30, 31, 45] {
            assert_eq!(t.get(n).as_ref(), &factorial(n as u64), "n = {n}");
        }
        assert_eq!(t.falling_ratio(10, 7), BigInt::from(720));
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta_int(1, 1).unwrap(), int(1));
        assert_eq!(beta_int(4, 5).unwrap(), ratio(1, 280));
        assert_eq!(beta_int(2, 1).unwrap(), ratio(1, 2));
        assert_eq!(beta_int(0, 3), Err(Error::BetaDomain { m: 0, n: 3 }));
        assert!(beta_int(3, -1).is_err());
        let t = Factorials::with_limit(10);
        assert_eq!(t.beta(4, 5).unwrap(), ratio(1, 280));
        assert!(t.beta(1, 0).is_err());
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(binomial(2, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(0), 1);
        assert_eq!(delta(1), -1);
        assert_eq!(delta(7), -1);
    }

    #[test]
    fn omega_values() {
        assert_eq!(omega(2, 0, -1).unwrap(), BigInt::from(2));
        assert_eq!(omega(2, 0, 0).unwrap(), BigInt::from(-1));
        assert_eq!(omega(2, 0, -2).unwrap(), BigInt::from(-1));
        for r in 1..=6u32 {
            for i in 0..=2 {
                let v = omega(r, i, r as i64 - 1).unwrap();
                if r == 1 && i == 2 {
                    // Σ Δ(j1)Δ(j2) is linear in j', which C(1, ·) does not annihilate
                    assert_eq!(v, BigInt::from(-1));
                } else {
                    assert!(v.is_zero(), "r = {r}, i'' = {i}");
                }
            }
        }
        assert!(omega(2, 3, 0).is_err());
        assert!(omega(2, 0, -3).is_err());
    }

    #[test]
    fn b_const_values() {
        for r in 1..5 {
            assert_eq!(b_const(r, 0, 0), BigInt::from(1));
            for i in 0..5 {
                assert_eq!(
                    b_const(r, i, 0),
                    num_traits::pow(BigInt::from(r), i as usize)
                );
            }
        }
        assert_eq!(b_const(2, 1, 1), BigInt::from(5));
        assert_eq!(b_const(3, 2, 1), b_const(3, 1, 2));
    }

    #[test]
    fn c_const_values() {
        assert_eq!(c_const(2, 0, 0, 0, 0).unwrap(), ratio(1, 6));
        assert_eq!(c_const(2, 2, 0, 0, 2).unwrap(), ratio(1, 180));
        assert_eq!(c_const(2, 0, 0, 2, 2).unwrap(), ratio(1, 216));
        assert!(c_const(2, 1, 0, 0, 0).is_err());
        assert!(c_const(2, 0, 0, 1, 2).is_err());
    }

    #[test]
    fn index_pairs() {
        assert_eq!(IndexPair::ALL.len(), 4);
        assert!(IndexPair::ALL.iter().all(|p| matches!(p.total(), 0 | 2)));
        assert!(IndexPair::new(1, 0).is_err());
        assert_eq!(IndexPair::new(1, 1).unwrap().total(), 2);
    }
}
