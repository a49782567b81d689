//! Exact univariate and bivariate polynomials over the rationals.
//!
//! [`Polynomial`] is the user-facing dense form. [`ScaledPoly`] stores the
//! same data as integer numerators over one shared denominator, which is
//! what the integral kernels consume: sums over thousands of monomials stay
//! in integer arithmetic and are reduced once at the end.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::rational::{format_decimal_exact, parse_rational, Rational};

/// Dense polynomial with exact rational coefficients; `coeffs[k]` multiplies
/// `x^k`. The highest stored coefficient is never zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(degree: usize, coeff: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = coeff;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Builds from `(degree, coefficient)` pairs; repeated degrees are an error.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut map = BTreeMap::new();
        for (deg, c) in terms {
            if map.insert(deg, c).is_some() {
                return Err(Error::Parse(format!("degree {deg} listed twice")));
            }
        }
        let top = map.keys().next_back().copied().unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); top + 1];
        for (deg, c) in map {
            coeffs[deg] = c;
        }
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    /// Nonzero `(degree, coefficient)` terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// `Q_u(x) = ∫_0^1 θ^u P(x + θ(1-x)) dθ`, expanded exactly.
    ///
    /// Each `x^d` contributes `Σ_k C(d,k)/(u+k+1) · x^(d-k) (1-x)^k`; the
    /// result has the same degree as `P`.
    pub fn theta_average(&self, u: u32) -> Polynomial {
        ScaledPoly::from_poly(self).theta_average(u).to_poly()
    }

    /// `Σ |coeffs[k]|`, an upper bound for `|P(x)|` on `[0, 1]`.
    pub fn sup_bound(&self) -> Rational {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Binomial expansion of `P(x + y)`.
    pub fn compose_sum(&self) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (d, c) in self.terms() {
            for k in 0..=d {
                let w = Rational::from_integer(binomial(d as i64, k as i64)) * c;
                out.add_term(k as u32, (d - k) as u32, w);
            }
        }
        out
    }

    /// Parses a list of `degree:coefficient` entries separated by commas or
    /// whitespace. `0` or an empty string is the zero polynomial.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        for entry in trimmed.split([',', ' ', '\t']).filter(|e| !e.is_empty()) {
            let (deg, coeff) = entry.split_once(':').ok_or_else(|| {
                Error::Parse(format!("expected degree:coefficient, got `{entry}`"))
            })?;
            let deg: usize = deg
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree in `{entry}`")))?;
            terms.push((deg, parse_rational(coeff)?));
        }
        Self::from_terms(terms)
    }
}

/// Same syntax as [`Polynomial::parse`]; coefficients are written as exact
/// decimals when possible, `p/q` otherwise.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(d, c)| format!("{d}:{}", format_decimal_exact(c)))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

impl core::str::FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Sparse bivariate polynomial keyed by `(deg_x, deg_y)`; zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_univariate_x(p: &Polynomial) -> Self {
        let mut out = Self::zero();
        for (d, c) in p.terms() {
            out.add_term(d as u32, 0, c.clone());
        }
        out
    }

    pub fn from_univariate_y(p: &Polynomial) -> Self {
        let mut out = Self::zero();
        for (d, c) in p.terms() {
            out.add_term(0, d as u32, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, dx: u32, dy: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((dx, dy)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(dx, dy));
        }
    }

    pub fn coeff(&self, dx: u32, dy: u32) -> Rational {
        self.terms
            .get(&(dx, dy))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(dx, dy), c) in &other.terms {
            out.add_term(dx, dy, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(ax, ay), a) in &self.terms {
            for (&(bx, by), b) in &other.terms {
                out.add_term(ax + bx, ay + by, a * b);
            }
        }
        out
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(dx, dy), c)| {
                c * num_traits::pow(x.clone(), dx as usize)
                    * num_traits::pow(y.clone(), dy as usize)
            })
            .sum()
    }

    /// `∫_0^1 ∫_0^{1-x} P(x, y) dy dx` via `∫∫ x^a y^b = a! b! / (a+b+2)!`.
    pub fn simplex_integral(&self) -> Rational {
        self.terms
            .iter()
            .map(|(&(a, b), c)| c * simplex_monomial(a as u64, b as u64))
            .sum()
    }
}

/// `∫_0^1 ∫_0^{1-x} x^a y^b dy dx = a! b! / (a+b+2)!`.
pub fn simplex_monomial(a: u64, b: u64) -> Rational {
    use crate::combinatorics::factorial;
    Rational::new(factorial(a) * factorial(b), factorial(a + b + 2))
}

/// Integer numerators over a shared positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledPoly {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl ScaledPoly {
    pub fn zero() -> Self {
        Self {
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        let den = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = p
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self { num, den }
    }

    pub fn to_poly(&self) -> Polynomial {
        Polynomial::from_coeffs(
            self.num
                .iter()
                .map(|n| Rational::new(n.clone(), self.den.clone()))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.num.is_empty() || other.num.is_empty() {
            return Self::zero();
        }
        let mut num = vec![BigInt::zero(); self.num.len() + other.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    num[i + j] += a * b;
                }
            }
        }
        Self {
            num,
            den: &self.den * &other.den,
        }
    }

    /// Multiplies by `x^shift (1-x)^power`.
    pub fn mul_shifted_one_minus(&self, shift: usize, power: usize) -> Self {
        if self.num.is_empty() {
            return Self::zero();
        }
        let row: Vec<BigInt> = (0..=power)
            .map(|t| {
                let b = binomial(power as i64, t as i64);
                if t % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .collect();
        let mut num = vec![BigInt::zero(); shift + self.num.len() + power];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in row.iter().enumerate() {
                num[shift + i + t] += a * b;
            }
        }
        Self {
            num,
            den: self.den.clone(),
        }
    }

    /// Integer form of [`Polynomial::theta_average`].
    pub fn theta_average(&self, u: u32) -> Self {
        let Some(top) = self.num.iter().rposition(|c| !c.is_zero()) else {
            return Self::zero();
        };
        let u = u as u64;
        // lcm(u+1, ..., u+top+1) clears every 1/(u+k+1)
        let lcm = (0..=top as u64).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(u + k + 1)));
        let mut num = vec![BigInt::zero(); top + 1];
        for (d, pd) in self.num.iter().enumerate() {
            if pd.is_zero() {
                continue;
            }
            // row holds C(k, t) for the current k
            let mut row: Vec<BigInt> = vec![BigInt::one()];
            let mut choose_dk = BigInt::one();
            for k in 0..=d {
                if k > 0 {
                    let mut next = vec![BigInt::one(); k + 1];
                    for t in 1..k {
                        next[t] = &row[t - 1] + &row[t];
                    }
                    row = next;
                    choose_dk = choose_dk * BigInt::from(d - k + 1) / BigInt::from(k);
                }
                let w = pd * &choose_dk * (&lcm / BigInt::from(u + k as u64 + 1));
                for (t, c) in row.iter().enumerate() {
                    let term = &w * c;
                    if t % 2 == 0 {
                        num[d - k + t] += term;
                    } else {
                        num[d - k + t] -= term;
                    }
                }
            }
        }
        Self {
            num,
            den: &self.den * lcm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::string::ToString;

    fn x_pow(d: usize) -> Polynomial {
        Polynomial::monomial(d, int(1))
    }

    #[test]
    fn eval_examples() {
        assert_eq!(x_pow(30).eval(&int(1)), int(1));
        assert_eq!(Polynomial::zero().eval(&ratio(1, 2)), int(0));
        let p2 = Polynomial::monomial(165, ratio(-157, 5));
        assert_eq!(p2.eval(&int(1)), ratio(-157, 5));
        let p = Polynomial::from_coeffs(vec![int(1), int(-2), int(3)]);
        assert_eq!(p.eval(&ratio(1, 2)), ratio(3, 4));
    }

    #[test]
    fn degree_and_normalization() {
        assert_eq!(Polynomial::zero().degree(), -1);
        assert_eq!(
            Polynomial::from_coeffs(vec![int(1), int(0), int(0)]).degree(),
            0
        );
        assert_eq!(x_pow(165).degree(), 165);
        assert!(Polynomial::from_coeffs(vec![int(0)]).is_zero());
    }

    #[test]
    fn theta_average_constant() {
        for u in 0..6 {
            let q = Polynomial::constant(int(1)).theta_average(u);
            assert_eq!(q, Polynomial::constant(ratio(1, u as i64 + 1)));
        }
    }

    #[test]
    fn theta_average_x30_is_geometric_sum() {
        let q = x_pow(30).theta_average(0);
        let expected = Polynomial::from_coeffs(vec![ratio(1, 31); 31]);
        assert_eq!(q, expected);
    }

    #[test]
    fn theta_average_at_one() {
        let p = Polynomial::from_coeffs(vec![int(2), ratio(-1, 3), int(0), int(5)]);
        for u in 0..5 {
            let q = p.theta_average(u);
            assert_eq!(q.degree(), p.degree());
            assert_eq!(q.eval(&int(1)), p.eval(&int(1)) / int(u as i64 + 1));
        }
    }

    #[test]
    fn sup_bound_examples() {
        assert_eq!(
            Polynomial::monomial(165, ratio(-157, 5)).sup_bound(),
            ratio(157, 5)
        );
        assert_eq!(Polynomial::zero().sup_bound(), int(0));
        assert_eq!(x_pow(30).add(&x_pow(1)).sup_bound(), int(2));
    }

    #[test]
    fn compose_sum_examples() {
        let b = x_pow(2).compose_sum();
        assert_eq!(b.len(), 3);
        assert_eq!(b.coeff(2, 0), int(1));
        assert_eq!(b.coeff(1, 1), int(2));
        assert_eq!(b.coeff(0, 2), int(1));

        let c = Polynomial::constant(ratio(7, 3)).compose_sum();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeff(0, 0), ratio(7, 3));

        let big = x_pow(165).compose_sum();
        assert!(big.terms().all(|(&(a, b), _)| a + b == 165));
        let row_sum: Rational = big.terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(
            row_sum,
            Rational::from_integer(num_traits::pow(BigInt::from(2), 165))
        );
        assert_eq!(big.coeff(82, 83), Rational::from_integer(binomial(165, 82)));
    }

    #[test]
    fn simplex_reduction() {
        assert_eq!(simplex_monomial(0, 0), ratio(1, 2));
        assert_eq!(simplex_monomial(1, 0), ratio(1, 6));
        assert_eq!(simplex_monomial(1, 1), ratio(1, 24));
    }

    #[test]
    fn parse_and_display() {
        let p = Polynomial::parse("30:1, 165:-31.4").unwrap();
        assert_eq!(p.coeffs()[30], int(1));
        assert_eq!(p.coeffs()[165], ratio(-157, 5));
        assert_eq!(p.to_string(), "30:1, 165:-31.4");
        assert_eq!(Polynomial::parse(&p.to_string()).unwrap(), p);
        assert!(Polynomial::parse("0").unwrap().is_zero());
        assert!(Polynomial::parse("").unwrap().is_zero());
        assert_eq!(
            Polynomial::parse("2:1/3 0:-2").unwrap().to_string(),
            "0:-2, 2:1/3"
        );
        assert!(Polynomial::parse("2:1, 2:3").is_err());
        assert!(Polynomial::parse("x:1").is_err());
        assert!(Polynomial::parse("3").is_err());
    }

    #[test]
    fn scaled_roundtrip_and_mul() {
        let p = Polynomial::parse("0:1/2, 3:-2/3, 4:5").unwrap();
        let s = ScaledPoly::from_poly(&p);
        assert_eq!(s.to_poly(), p);
        let q = Polynomial::parse("1:3/7, 2:1").unwrap();
        assert_eq!(s.mul(&ScaledPoly::from_poly(&q)).to_poly(), p.mul(&q));
        let one_minus = Polynomial::parse("0:1, 1:-1").unwrap();
        let expect = p
            .mul(&x_pow(2))
            .mul(&one_minus)
            .mul(&one_minus)
            .mul(&one_minus);
        assert_eq!(s.mul_shifted_one_minus(2, 3).to_poly(), expect);
    }
}
