//! Exact evaluation of the integral families `l`, `k`, `h` and of the
//! aggregates `l̂`, `ĥ`, `k̂` and `D/π` built from them.
//!
//! Every integral reduces to factorial quotients:
//!
//! * `∫_0^1 x^a (1-x)^b dx = a! b! / (a+b+1)!`
//! * `∫∫_{x,y≥0, x+y≤1} x^a y^b (x+y)^d = a! b! / ((a+b+1)! (a+b+d+2))`
//!
//! The second identity (substitute `x = s w`, `y = s (1-w)`) is what lets the
//! `k` family skip the full bivariate expansion of `P(x+y)`; the brute-force
//! route through [`Polynomial::compose_sum`] is kept in the tests as a
//! cross-check.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binomial, c_const_split, omega, Factorials, IndexPair};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, ScaledPoly};
use crate::rational::{int, ratio, Rational};

/// `(n1, n2, n3, n4)` for the `l` and `k` families.
pub type IndexTuple = [i64; 4];
/// `(n1, n2, n3, n4, n5)` for the `h` family.
pub type IndexTuple5 = [i64; 5];

/// The polynomial index pairs `(i1, i2)` in a fixed order.
pub const PAIRS: [(u32, u32); 4] = [(0, 0), (0, 2), (2, 0), (2, 2)];

/// One value per polynomial pair, in [`PAIRS`] order. All aggregates are
/// bilinear in `(P_{i1}, P_{i2})`, so these parts can be rescaled without
/// re-integrating.
pub type PairParts = [Rational; 4];

pub fn pair_index(i1: u32, i2: u32) -> usize {
    match (i1, i2) {
        (0, 0) => 0,
        (0, 2) => 1,
        (2, 0) => 2,
        (2, 2) => 3,
        _ => unreachable!("pair ({i1}, {i2}) is not used"),
    }
}

pub fn zero_parts() -> PairParts {
    [
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
    ]
}

/// Weighted sum of pair parts: `Σ s_{i1} s_{i2} part(i1, i2)`.
pub fn combine_parts(parts: &PairParts, s0: &Rational, s2: &Rational) -> Rational {
    PAIRS
        .iter()
        .zip(parts)
        .map(|(&(i1, i2), v)| {
            let a = if i1 == 0 { s0 } else { s2 };
            let b = if i2 == 0 { s0 } else { s2 };
            v * a * b
        })
        .sum()
}

/// Everything that determines `f_r(c)`: `r`, `η`, the two polynomials, the
/// series truncation `J` and the decimal working precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapConfig {
    r: u32,
    eta: Rational,
    p0: Polynomial,
    p2: Polynomial,
    truncation: u32,
    precision: u32,
}

impl GapConfig {
    pub const DEFAULT_TRUNCATION: u32 = 30;
    pub const DEFAULT_PRECISION: u32 = 50;

    pub fn new(r: u32, eta: Rational, p0: Polynomial, p2: Polynomial) -> Result<Self> {
        let cfg = Self {
            r,
            eta,
            p0,
            p2,
            truncation: Self::DEFAULT_TRUNCATION,
            precision: Self::DEFAULT_PRECISION,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_truncation(mut self, truncation: u32) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_precision(mut self, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidConfig("precision must be positive".into()));
        }
        self.precision = precision;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidConfig("r must be at least 1".into()));
        }
        if !self.eta.is_positive() || self.eta > ratio(1, 2) {
            return Err(Error::InvalidConfig(format!(
                "eta must lie in (0, 1/2], got {}",
                self.eta
            )));
        }
        if self.precision == 0 {
            return Err(Error::InvalidConfig("precision must be positive".into()));
        }
        Ok(())
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn eta(&self) -> &Rational {
        &self.eta
    }

    pub fn p0(&self) -> &Polynomial {
        &self.p0
    }

    pub fn p2(&self) -> &Polynomial {
        &self.p2
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `P_i`; index 1 resolves to `P_0`.
    pub fn poly(&self, i: u32) -> &Polynomial {
        if i == 2 {
            &self.p2
        } else {
            &self.p0
        }
    }

    /// Copy with `P_0` and `P_2` multiplied by the given scalars.
    pub fn rescaled(&self, s0: &Rational, s2: &Rational) -> Self {
        Self {
            p0: self.p0.scale(s0),
            p2: self.p2.scale(s2),
            ..self.clone()
        }
    }

    fn max_degree(&self) -> usize {
        self.p0.degree().max(self.p2.degree()).max(0) as usize
    }
}

/// `ĥ(r, 2j, η)` and `k̂(r, 2j, η)` split by polynomial pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTerm {
    pub j: u32,
    pub hat_h: PairParts,
    pub hat_k: PairParts,
}

/// Evaluates the integral families for one configuration, caching the
/// θ-averaged polynomials, their products and every `l`/`k` value.
///
/// Not `Sync`; give each worker its own evaluator.
#[derive(Debug)]
pub struct MomentEvaluator<'a> {
    cfg: &'a GapConfig,
    facts: Factorials,
    eta_inv: Rational,
    p: [ScaledPoly; 2],
    q_cache: BTreeMap<(u32, u32), ScaledPoly>,
    prod_cache: BTreeMap<(u32, u32, u32, u32), ScaledPoly>,
    y_cache: BTreeMap<(u32, i64, i64), ScaledPoly>,
    l_cache: BTreeMap<(u32, u32, IndexTuple), Rational>,
    k_cache: BTreeMap<(u32, u32, IndexTuple), Rational>,
}

impl<'a> MomentEvaluator<'a> {
    pub fn new(cfg: &'a GapConfig) -> Result<Self> {
        cfg.validate()?;
        let r = cfg.r as usize;
        let limit = r * r + 2 * r + 2 * cfg.max_degree() + 4 * cfg.truncation as usize + 48;
        Ok(Self {
            cfg,
            facts: Factorials::with_limit(limit),
            eta_inv: cfg.eta.recip(),
            p: [
                ScaledPoly::from_poly(&cfg.p0),
                ScaledPoly::from_poly(&cfg.p2),
            ],
            q_cache: BTreeMap::new(),
            prod_cache: BTreeMap::new(),
            y_cache: BTreeMap::new(),
            l_cache: BTreeMap::new(),
            k_cache: BTreeMap::new(),
        })
    }

    pub fn config(&self) -> &GapConfig {
        self.cfg
    }

    fn scaled(&self, i: u32) -> &ScaledPoly {
        &self.p[usize::from(i == 2)]
    }

    fn is_zero_pair(&self, i1: u32, i2: u32) -> bool {
        self.cfg.poly(i1).is_zero() || self.cfg.poly(i2).is_zero()
    }

    fn q(&mut self, i: u32, u: u32) -> &ScaledPoly {
        let p = &self.p[usize::from(i == 2)];
        self.q_cache
            .entry((i, u))
            .or_insert_with(|| p.theta_average(u))
    }

    fn q_product(&mut self, i1: u32, u1: u32, i2: u32, u2: u32) -> ScaledPoly {
        let key = (i1, u1, i2, u2);
        if let Some(p) = self.prod_cache.get(&key) {
            return p.clone();
        }
        let a = self.q(i1, u1).clone();
        let prod = a.mul(self.q(i2, u2));
        self.prod_cache.insert(key, prod.clone());
        prod
    }

    fn r(&self) -> i64 {
        self.cfg.r as i64
    }

    /// `∫_0^1 x^a (1-x)^b R(x) dx`.
    fn beta_moment(&self, poly: &ScaledPoly, a: usize, b: usize) -> Rational {
        if poly.num.is_empty() {
            return Rational::zero();
        }
        let top = poly.num.len() - 1;
        let t = a + top + b + 1;
        let mut sum = BigInt::zero();
        // rising = t! / (a+m+b+1)!
        let mut rising = BigInt::one();
        for m in (0..=top).rev() {
            let c = &poly.num[m];
            if !c.is_zero() {
                sum += c * self.facts.get(a + m).as_ref() * &rising;
            }
            rising *= BigInt::from(a + m + b + 1);
        }
        let num = sum * self.facts.get(b).as_ref();
        let den = self.facts.get(t).into_owned() * &poly.den;
        Rational::new(num, den)
    }

    fn check_pair(i1: u32, i2: u32) -> Result<()> {
        if !matches!(i1, 0 | 2) || !matches!(i2, 0 | 2) {
            return Err(Error::InvalidArgument(format!(
                "polynomial indices must be 0 or 2, got ({i1}, {i2})"
            )));
        }
        Ok(())
    }

    /// `l_{i1,i2}(n)`.
    pub fn l_int(&mut self, i1: u32, i2: u32, n: IndexTuple) -> Result<Rational> {
        Self::check_pair(i1, i2)?;
        let r = self.r();
        let [n1, n2, n3, n4] = n;
        let a = r * r + n1 + n2 - 1;
        let b = 2 * r + n3 + n4;
        let u1 = r + n3 - 1;
        let u2 = r + n4 - 1;
        if a < 0 || b < 0 || u1 < 0 || u2 < 0 {
            return Err(Error::InvalidIndex {
                family: "l",
                detail: format!("{n:?} with r = {r}"),
            });
        }
        if self.is_zero_pair(i1, i2) {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.l_cache.get(&(i1, i2, n)) {
            return Ok(v.clone());
        }
        let prod = self.q_product(i1, u1 as u32, i2, u2 as u32);
        let v = self.beta_moment(&prod, a as usize, b as usize);
        self.l_cache.insert((i1, i2, n), v.clone());
        Ok(v)
    }

    /// `y^b (1-y)^c Q_{i,u}(y)` for the `k` family.
    fn y_factor(&mut self, i2: u32, n3: i64, n4: i64) -> ScaledPoly {
        let key = (i2, n3, n4);
        if let Some(y) = self.y_cache.get(&key) {
            return y.clone();
        }
        let r = self.r();
        let shift = (r * r + n3 - 1) as usize;
        let power = (r + n4) as usize;
        let u = (r + n4 - 1) as u32;
        let y = self.q(i2, u).mul_shifted_one_minus(shift, power);
        self.y_cache.insert(key, y.clone());
        y
    }

    /// `k_{i1,i2}(n)`: the double integral over the triangle
    /// `0 <= x <= 1, 0 <= y <= 1 - x`.
    pub fn k_int(&mut self, i1: u32, i2: u32, n: IndexTuple) -> Result<Rational> {
        Self::check_pair(i1, i2)?;
        let r = self.r();
        let [n1, n2, n3, n4] = n;
        if r + n1 - 1 < 0 || n2 < 0 || r * r + n3 - 1 < 0 || r + n4 - 1 < 0 {
            return Err(Error::InvalidIndex {
                family: "k",
                detail: format!("{n:?} with r = {r}"),
            });
        }
        if self.is_zero_pair(i1, i2) {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.k_cache.get(&(i1, i2, n)) {
            return Ok(v.clone());
        }

        // x^(r+n1-1) (1/η - x)^n2 with η = p/q:  p^-n2 Σ_t C(n2,t) q^(n2-t) (-p x)^t
        let shift = (r + n1 - 1) as usize;
        let n2u = n2 as usize;
        let p = self.cfg.eta.numer().clone();
        let q = self.cfg.eta.denom().clone();
        let mut x_num = vec![BigInt::zero(); shift + n2u + 1];
        for t in 0..=n2u {
            let mut c = binomial(n2, t as i64)
                * num_traits::pow(q.clone(), n2u - t)
                * num_traits::pow(p.clone(), t);
            if t % 2 == 1 {
                c = -c;
            }
            x_num[shift + t] = c * self.facts.get(shift + t).as_ref();
        }
        let x_den = num_traits::pow(p, n2u);

        let y = self.y_factor(i2, n3, n4);
        let y_num: Vec<BigInt> = y
            .num
            .iter()
            .enumerate()
            .map(|(b, c)| {
                if c.is_zero() {
                    BigInt::zero()
                } else {
                    c * self.facts.get(b).as_ref()
                }
            })
            .collect();

        // z_m = Σ_{a+b=m} X_a a! Y_b b!
        let mut z = vec![BigInt::zero(); x_num.len() + y_num.len() - 1];
        for (a, xa) in x_num.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y_num.iter().enumerate() {
                if !yb.is_zero() {
                    z[a + b] += xa * yb;
                }
            }
        }

        // Σ_d P_d Σ_m z_m / ((m+1)! (m+d+2)) over the common denominator W = (top+deg+2)!
        let poly = self.scaled(i1).clone();
        let top = z.len() - 1;
        let deg = poly.num.len() - 1;
        let w_index = top + deg + 2;
        let w = self.facts.get(w_index).into_owned();
        let mut total = BigInt::zero();
        for (d, pd) in poly.num.iter().enumerate() {
            if pd.is_zero() {
                continue;
            }
            let mut inner = BigInt::zero();
            for (m, zm) in z.iter().enumerate() {
                if zm.is_zero() {
                    continue;
                }
                // W / ((m+1)! (m+d+2)) = [W / (m+d+2)!] * [(m+d+1)! / (m+1)!]
                let outer = &w / self.facts.get(m + d + 2).as_ref();
                let mid = self.facts.get(m + d + 1).into_owned() / self.facts.get(m + 1).as_ref();
                inner += zm * outer * mid;
            }
            total += inner * pd;
        }
        let den = w * x_den * &y.den * &poly.den;
        let v = Rational::new(total, den);
        self.k_cache.insert((i1, i2, n), v.clone());
        Ok(v)
    }

    /// `h_{i1,i2}(n)`, a combination of Beta values and `l` values.
    pub fn h_int(&mut self, i1: u32, i2: u32, n: IndexTuple5) -> Result<Rational> {
        Self::check_pair(i1, i2)?;
        let r = self.r();
        let [n1, n2, n3, n4, n5] = n;
        if n3 < 1 || n5 < 0 {
            return Err(Error::InvalidIndex {
                family: "h",
                detail: format!("{n:?}: needs n3 >= 1 and n5 >= 0"),
            });
        }
        if self.is_zero_pair(i1, i2) {
            return Ok(Rational::zero());
        }
        let b1 = self.facts.beta(n5 + 1, r + n4 - 1)?;
        let b2 = self.facts.beta(n5 + 1, r + n4)?;
        let l_a = self.l_int(i1, i2, [n1, n2, n3 - 1, n4 + n5])?;
        let l_b = self.l_int(i1, i2, [n1, n2, n3, n4 + n5])?;
        let l_c = self.l_int(i1, i2, [n1, n2, n3 - 1, n4 + n5 + 1])?;
        Ok(b1 * (l_b - &self.eta_inv * l_a) + b2 * l_c)
    }

    /// `l̂` for the split `i1 = i1' + i1''`, `i2 = i2' + i2''`.
    pub fn hat_l(&mut self, s1: IndexPair, s2: IndexPair) -> Result<Rational> {
        let (i1, i2) = (s1.total(), s2.total());
        let (a, b) = (s1.i_prime as i64, s2.i_prime as i64);
        let (c, d) = (s1.i_dprime as i64, s2.i_dprime as i64);
        let base = self.l_int(i1, i2, [a, b, c, d])?;
        let shift1 = self.l_int(i1, i2, [a, b, c + 1, d])?;
        let shift2 = self.l_int(i1, i2, [a, b, c, d + 1])?;
        Ok(&self.eta_inv * base - shift1 - shift2)
    }

    /// `D/π` split by polynomial pair.
    pub fn d_parts(&mut self) -> Result<PairParts> {
        let mut parts = zero_parts();
        for s1 in IndexPair::ALL {
            for s2 in IndexPair::ALL {
                if self.is_zero_pair(s1.total(), s2.total()) {
                    continue;
                }
                let v = c_const_split(self.cfg.r, s1, s2) * self.hat_l(s1, s2)?;
                parts[pair_index(s1.total(), s2.total())] += v;
            }
        }
        Ok(parts)
    }

    /// `D/π`; `π` is attached only when converting to a real.
    pub fn d_const(&mut self) -> Result<Rational> {
        Ok(self.d_parts()?.iter().sum())
    }

    /// `ĥ(r, j, η)` split by polynomial pair.
    pub fn hat_h_parts(&mut self, j: u32) -> Result<PairParts> {
        let r = self.r();
        let j = j as i64;
        let mut parts = zero_parts();
        for s1 in IndexPair::ALL {
            for s2 in IndexPair::ALL {
                let (i1, i2) = (s1.total(), s2.total());
                if self.is_zero_pair(i1, i2) {
                    continue;
                }
                let (a, b) = (s1.i_prime as i64, s2.i_prime as i64);
                let (c, d) = (s1.i_dprime as i64, s2.i_dprime as i64);
                let mut v = int(r) * self.h_int(i1, i2, [a, b, c + 1, d + 1, j])?;
                let mult = d * (r + d - 1);
                if mult != 0 {
                    v += int(mult) * self.h_int(i1, i2, [a, b, c + 1, d, j + 1])?;
                }
                parts[pair_index(i1, i2)] += c_const_split(self.cfg.r, s1, s2) * v;
            }
        }
        Ok(parts)
    }

    pub fn hat_h(&mut self, j: u32) -> Result<Rational> {
        Ok(self.hat_h_parts(j)?.iter().sum())
    }

    /// `k̂(r, j, η)` split by polynomial pair.
    pub fn hat_k_parts(&mut self, j: u32) -> Result<PairParts> {
        let r = self.r();
        let j = j as i64;
        let mut parts = zero_parts();
        for s1 in IndexPair::ALL {
            for s2 in IndexPair::ALL {
                let (i1, i2) = (s1.total(), s2.total());
                if self.is_zero_pair(i1, i2) {
                    continue;
                }
                let d = s2.i_dprime as i64;
                let mut v = Rational::zero();
                for n in -2..=(r - 2).min(j) {
                    let om = omega(self.cfg.r, s2.i_dprime, n)?;
                    if om.is_zero() {
                        continue;
                    }
                    let weight = Rational::new(
                        om * self.facts.get((r + d - 1) as usize).as_ref(),
                        self.facts.get((j - n) as usize).into_owned()
                            * self.facts.get((r + d + n + 1) as usize).as_ref(),
                    );
                    let idx = [
                        s1.i_dprime as i64,
                        j - n,
                        (s1.i_prime + s2.i_prime) as i64,
                        d + n + 2,
                    ];
                    v += weight * self.k_int(i1, i2, idx)?;
                }
                parts[pair_index(i1, i2)] += c_const_split(self.cfg.r, s1, s2) * v;
            }
        }
        Ok(parts)
    }

    pub fn hat_k(&mut self, j: u32) -> Result<Rational> {
        Ok(self.hat_k_parts(j)?.iter().sum())
    }

    /// `ĥ(r, 2j, η)` and `k̂(r, 2j, η)`, the ingredients of the `j`-th
    /// term of the `f_r` series.
    pub fn series_term(&mut self, j: u32) -> Result<SeriesTerm> {
        Ok(SeriesTerm {
            j,
            hat_h: self.hat_h_parts(2 * j)?,
            hat_k: self.hat_k_parts(2 * j)?,
        })
    }

    pub fn factorials(&self) -> &Factorials {
        &self.facts
    }
}
