//! The gap-ratio series `f_r(c)`, its certified tail and admissibility.
//!
//! Values of `c` are passed as multiples of π (`c = c_mult · π`), which keeps
//! every input exact; π enters only through a [`Ball`] enclosure.
//!
//! With `D = π · (D/π)`,
//!
//! ```text
//! f_r(c) = c/π + (1/D) Σ_{j=0}^{J} (-1)^j c^{2j+1} / 4^j · ( ĥ(2j)/(2j+1)! + k̂(2j)/(2j+1) )
//! ```

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{c_const_split, omega, Factorials, IndexPair};
use crate::error::{Error, Result};
use crate::moments::{
    combine_parts, pair_index, GapConfig, MomentEvaluator, PairParts, SeriesTerm, PAIRS,
};
use crate::rational::{int, ratio, Rational};
use crate::real::{bits_for_digits, dyadic_lower, dyadic_upper, e_upper, pi, Ball};

/// Certified upper bounds on the omitted `j > J` part of the series, split
/// into the `ĥ` and `k̂` contributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailBound {
    pub h_part: Rational,
    pub k_part: Rational,
}

impl TailBound {
    pub fn total(&self) -> Rational {
        &self.h_part + &self.k_part
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    /// `c / π`.
    pub c_multiple: Rational,
    /// Enclosure of the truncated series.
    pub f_value: Ball,
    pub truncation: u32,
    pub precision: u32,
    pub tail: TailBound,
    /// `upper(f_value) + tail < 1`.
    pub admissible: bool,
    /// `c / π` when admissible.
    pub lambda_bound: Option<Rational>,
    /// Whether the `ĥ` terms alternate and decrease from the first `j` with
    /// `2j + 1 > c·e` up to `J`, so that partial sums bracket the limit there.
    pub h_alternates: bool,
}

impl RatioReport {
    pub fn tail_bound(&self) -> Rational {
        self.tail.total()
    }

    /// Upper end of the certified enclosure of the full series.
    pub fn certified_upper(&self) -> Rational {
        self.f_value.upper() + self.tail.total()
    }

    pub fn f_decimal(&self) -> alloc::string::String {
        self.f_value.to_decimal(self.precision)
    }
}

/// The exact series data of one configuration: `D/π` and the `ĥ`, `k̂`
/// coefficients for `j = 0..=J`, split by polynomial pair. Evaluating at a new
/// `c` costs only the rounding of `J + 1` rationals.
#[derive(Debug, Clone)]
pub struct GapSeries {
    cfg: GapConfig,
    d_parts: PairParts,
    terms: Vec<SeriesTerm>,
    d_over_pi: Rational,
    /// Working precision of `coeffs`, with headroom for the growth of `c^(2j+1)`.
    work_bits: u32,
    pi: Ball,
    /// `a_j / (D/π)` with `a_j = ĥ(2j)/(2j+1)! + k̂(2j)/(2j+1)`.
    coeffs: Vec<Ball>,
    /// Sign and dyadic bracket of `|ĥ(2j)/(2j+1)!|`.
    h_signs: Vec<i8>,
    h_abs: Vec<(Rational, Rational)>,
    tail: TailModel,
}

/// Significant bits kept by the rounded tail ingredients.
const TAIL_BITS: u32 = 64;

impl GapSeries {
    pub fn new(cfg: GapConfig) -> Result<Self> {
        let (d_parts, terms) = {
            let mut ev = MomentEvaluator::new(&cfg)?;
            let d = ev.d_parts()?;
            let terms = (0..=cfg.truncation())
                .map(|j| ev.series_term(j))
                .collect::<Result<Vec<_>>>()?;
            (d, terms)
        };
        Self::from_parts(cfg, d_parts, terms)
    }

    /// Assemble from precomputed parts, e.g. terms evaluated in parallel.
    /// `terms` must hold `j = 0..=J` in order.
    pub fn from_parts(cfg: GapConfig, d_parts: PairParts, terms: Vec<SeriesTerm>) -> Result<Self> {
        cfg.validate()?;
        let ok = terms.len() == cfg.truncation() as usize + 1
            && terms.iter().enumerate().all(|(i, t)| t.j as usize == i);
        if !ok {
            return Err(Error::InvalidArgument(
                "series terms must cover j = 0..=J in order".into(),
            ));
        }
        let d_over_pi: Rational = d_parts.iter().sum();
        if d_over_pi.is_zero() {
            return Err(Error::DegenerateNormalizer);
        }
        let facts = Factorials::with_limit(2 * cfg.truncation() as usize + 2);
        let work_bits = bits_for_digits(cfg.precision()) + 8 * (2 * cfg.truncation() + 1) + 32;
        let mut coeffs = Vec::with_capacity(terms.len());
        let mut h_signs = Vec::with_capacity(terms.len());
        let mut h_abs = Vec::with_capacity(terms.len());
        for t in &terms {
            let n = 2 * t.j as usize + 1;
            let h: Rational = t.hat_h.iter().sum();
            let k: Rational = t.hat_k.iter().sum();
            let hs = h / Rational::from_integer(facts.get(n).into_owned());
            h_signs.push(if hs.is_zero() {
                0
            } else if hs.is_positive() {
                1
            } else {
                -1
            });
            h_abs.push((
                dyadic_lower(&hs.abs(), TAIL_BITS),
                dyadic_upper(&hs.abs(), TAIL_BITS),
            ));
            let a = &hs + k / int(n as i64);
            let num = a.numer() * d_over_pi.denom();
            let den = a.denom() * d_over_pi.numer();
            coeffs.push(Ball::from_ratio(&num, &den, work_bits));
        }
        let tail = TailModel::new(&cfg, &d_over_pi)?;
        Ok(Self {
            cfg,
            d_parts,
            terms,
            d_over_pi,
            work_bits,
            pi: pi(work_bits),
            coeffs,
            h_signs,
            h_abs,
            tail,
        })
    }

    /// The series of `P_0 ↦ s0·P_0`, `P_2 ↦ s2·P_2`, from the stored parts.
    pub fn rescaled(&self, s0: &Rational, s2: &Rational) -> Result<Self> {
        let scale = |parts: &PairParts| -> PairParts {
            let mut out = parts.clone();
            for (v, &(i1, i2)) in out.iter_mut().zip(PAIRS.iter()) {
                let mut unit = crate::moments::zero_parts();
                unit[pair_index(i1, i2)] = v.clone();
                *v = combine_parts(&unit, s0, s2);
            }
            out
        };
        let terms = self
            .terms
            .iter()
            .map(|t| SeriesTerm {
                j: t.j,
                hat_h: scale(&t.hat_h),
                hat_k: scale(&t.hat_k),
            })
            .collect();
        Self::from_parts(self.cfg.rescaled(s0, s2), scale(&self.d_parts), terms)
    }

    pub fn config(&self) -> &GapConfig {
        &self.cfg
    }

    pub fn d_over_pi(&self) -> &Rational {
        &self.d_over_pi
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    /// `ĥ(r, 2j, η)`.
    pub fn hat_h(&self, j: u32) -> Option<Rational> {
        self.terms.get(j as usize).map(|t| t.hat_h.iter().sum())
    }

    /// `k̂(r, 2j, η)`.
    pub fn hat_k(&self, j: u32) -> Option<Rational> {
        self.terms.get(j as usize).map(|t| t.hat_k.iter().sum())
    }

    pub fn f_series(&self, c_mult: &Rational) -> Result<RatioReport> {
        if !c_mult.is_positive() {
            return Err(Error::InvalidArgument("c must be positive".into()));
        }
        let precision = self.cfg.precision();
        let bits = self.work_bits;
        // term_j = a_j/(D/π) · c_mult · (-c²/4)^j with c = c_mult π
        let c_ball = Ball::from_rational(c_mult, bits);
        let step = c_ball
            .mul(&c_ball)
            .mul(&self.pi.powi(2))
            .mul_rational(&ratio(-1, 4));
        let mut sum = Ball::from_int(0, bits);
        let mut power = c_ball.clone();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                power = power.mul(&step);
            }
            sum = sum.add(&a.mul(&power));
        }
        let f_value = sum.add(&c_ball);

        let tail = self.tail.bound(c_mult, self.cfg.truncation(), &self.pi);
        let admissible = f_value.upper() + tail.total() < Rational::one();
        Ok(RatioReport {
            c_multiple: c_mult.clone(),
            f_value,
            truncation: self.cfg.truncation(),
            precision,
            tail,
            admissible,
            lambda_bound: admissible.then(|| c_mult.clone()),
            h_alternates: self.h_alternates(c_mult),
        })
    }

    /// Certified bound on the omitted terms `j > truncation`.
    pub fn tail_bound(&self, c_mult: &Rational, truncation: u32) -> Result<TailBound> {
        if !c_mult.is_positive() {
            return Err(Error::InvalidArgument("c must be positive".into()));
        }
        if truncation < 1 {
            return Err(Error::InvalidArgument("tail bound needs J >= 1".into()));
        }
        Ok(self.tail.bound(c_mult, truncation, &self.pi))
    }

    fn h_alternates(&self, c_mult: &Rational) -> bool {
        let c_hi = c_upper(c_mult, &self.pi);
        let ce = &c_hi * e_upper();
        let step = &c_hi * &c_hi / int(4);
        let start = (0..self.h_abs.len()).find(|&j| int(2 * j as i64 + 1) > ce);
        let Some(start) = start else { return true };
        let sign = self.h_signs[start];
        self.h_signs[start..].iter().all(|&s| s == sign && s != 0)
            && self.h_abs[start..]
                .windows(2)
                .all(|w| &step * &w[1].1 < w[0].0)
    }

    /// Largest admissible `c/π` in `[lo, hi]`: a 256-point grid, then
    /// bisection of the rightmost admissible-to-inadmissible transition.
    pub fn max_admissible_c(
        &self,
        lo: &Rational,
        hi: &Rational,
        tol: &Rational,
    ) -> Result<RatioReport> {
        self.max_admissible_c_with(lo, hi, tol, |grid| {
            grid.iter().map(|c| self.f_series(c)).collect()
        })
    }

    /// As [`Self::max_admissible_c`], with the grid evaluated by `eval_grid`
    /// (which must return reports in grid order).
    pub fn max_admissible_c_with<F>(
        &self,
        lo: &Rational,
        hi: &Rational,
        tol: &Rational,
        eval_grid: F,
    ) -> Result<RatioReport>
    where
        F: FnOnce(&[Rational]) -> Result<Vec<RatioReport>>,
    {
        if !lo.is_positive() || lo >= hi {
            return Err(Error::InvalidArgument("need 0 < c_lo < c_hi".into()));
        }
        if !tol.is_positive() {
            return Err(Error::InvalidArgument("tol must be positive".into()));
        }
        let grid = scan_grid(lo, hi, GRID_POINTS);
        let reports = eval_grid(&grid)?;
        let Some(best) = reports.iter().rposition(|r| r.admissible) else {
            return Err(Error::NoAdmissiblePoint);
        };
        if best + 1 == grid.len() {
            return Ok(reports[best].clone());
        }
        let mut good = reports[best].clone();
        let mut bad = grid[best + 1].clone();
        while &bad - &good.c_multiple > *tol {
            let mid = (&good.c_multiple + &bad) / int(2);
            let rep = self.f_series(&mid)?;
            if rep.admissible {
                good = rep;
            } else {
                bad = mid;
            }
        }
        Ok(good)
    }
}

pub const GRID_POINTS: usize = 256;

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn scan_grid(lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    if n == 1 {
        return alloc::vec![lo.clone()];
    }
    let step = (hi - lo) / int(n as i64 - 1);
    (0..n).map(|i| lo + &step * int(i as i64)).collect()
}

pub fn f_series(cfg: &GapConfig, c_mult: &Rational) -> Result<RatioReport> {
    GapSeries::new(cfg.clone())?.f_series(c_mult)
}

pub fn tail_bound(cfg: &GapConfig, c_mult: &Rational, truncation: u32) -> Result<TailBound> {
    if !c_mult.is_positive() || truncation < 1 {
        return Err(Error::InvalidArgument(
            "tail bound needs c > 0 and J >= 1".into(),
        ));
    }
    let cfg = cfg.clone().with_truncation(truncation);
    let d = MomentEvaluator::new(&cfg)?.d_const()?;
    if d.is_zero() {
        return Err(Error::DegenerateNormalizer);
    }
    let model = TailModel::new(&cfg, &d)?;
    Ok(model.bound(c_mult, truncation, &pi(bits_for_digits(cfg.precision()))))
}

pub fn max_admissible_c(
    cfg: &GapConfig,
    lo: &Rational,
    hi: &Rational,
    tol: &Rational,
) -> Result<RatioReport> {
    GapSeries::new(cfg.clone())?.max_admissible_c(lo, hi, tol)
}

/// One family of `k̂`-tail terms: all splits and shifts `n` sharing the
/// exponent `a` of `x^a (1/η - x)^(2j-n)`.
#[derive(Debug, Clone)]
struct KComponent {
    a: usize,
    n: i64,
    weight: Rational,
    /// `weight · I(a, 2j-n) / (2j-n)!` rounded up, for `j = table_start..`.
    table_start: i64,
    table: Vec<Rational>,
}

const TABLE_LEN: i64 = 12;

impl KComponent {
    fn scaled_integral(&self, j: i64, eta_inv: &Rational) -> Rational {
        let idx = j - self.table_start;
        if (0..self.table.len() as i64).contains(&idx) {
            return self.table[idx as usize].clone();
        }
        let m = (2 * j - self.n) as usize;
        let mut fact = BigInt::one();
        for t in 2..=m {
            fact *= BigInt::from(t);
        }
        let exact =
            &self.weight * power_integral(self.a, m, eta_inv) / Rational::from_integer(fact);
        dyadic_upper(&exact, TAIL_BITS)
    }
}

/// `c`-independent ingredients of the tail bounds.
///
/// `ĥ` part: `|h| <= (1/η + 2) sup|P_{i1}| sup|P_{i2}|` because every `Q` is
/// bounded by the sup of its `P` and the Beta factors are at most 1, so
/// `|ĥ(2j)| <= K_h`, and `(2j+1)! > ((2j+1)/e)^(2j+1)`.
///
/// `k̂` part: on the unit square, `|P(x+y)| <= sup|P|`,
/// `|Q_{i,u}(y)| <= sup|P_i|/(u+1)`, and the remaining factors integrate to
/// `∫ x^a (1/η - x)^m dx · B(b+1, c+1)` exactly.
#[derive(Debug, Clone)]
struct TailModel {
    eta_inv: Rational,
    k_h: Rational,
    /// Lower bound on `|D/π|`.
    d_abs: Rational,
    k_parts: Vec<KComponent>,
}

impl TailModel {
    fn new(cfg: &GapConfig, d_over_pi: &Rational) -> Result<Self> {
        let r = cfg.r();
        let ri = r as i64;
        let sup = [cfg.p0().sup_bound(), cfg.p2().sup_bound()];
        let m = |i: u32| &sup[usize::from(i == 2)];
        let eta_inv = cfg.eta().recip();
        let facts = Factorials::with_limit((ri * ri + 2 * ri + 8) as usize);

        let mut k_h = Rational::zero();
        let mut k_parts: Vec<KComponent> = Vec::new();
        for s1 in IndexPair::ALL {
            for s2 in IndexPair::ALL {
                let (i1, i2) = (s1.total(), s2.total());
                let w = c_const_split(r, s1, s2).abs() * m(i1) * m(i2);
                if w.is_zero() {
                    continue;
                }
                let d = s2.i_dprime as i64;
                k_h += &w * int(ri + d * (ri + d - 1));
                let a = (ri + s1.i_dprime as i64 - 1) as usize;
                let b = ri * ri + (s1.i_prime + s2.i_prime) as i64 - 1;
                for n in -2..=ri - 2 {
                    let om = omega(r, s2.i_dprime, n)?;
                    if om.is_zero() {
                        continue;
                    }
                    let c = ri + d + n + 2;
                    let u = ri + d + n + 1;
                    let shift = Rational::new(
                        om.abs() * facts.get((ri + d - 1) as usize).as_ref(),
                        facts.get((ri + d + n + 1) as usize).into_owned(),
                    );
                    let weight = &w * shift / int(u + 1) * facts.beta(b + 1, c + 1)?;
                    match k_parts.iter_mut().find(|p| p.a == a && p.n == n) {
                        Some(p) => p.weight += weight,
                        None => k_parts.push(KComponent {
                            a,
                            n,
                            weight,
                            table_start: 0,
                            table: Vec::new(),
                        }),
                    }
                }
            }
        }
        k_h = dyadic_upper(&(k_h * (&eta_inv + int(2))), TAIL_BITS);
        let first = cfg.truncation() as i64 + 1;
        for comp in &mut k_parts {
            let start = first.max((comp.n + 1) / 2).max(0);
            comp.table = (start..start + TABLE_LEN)
                .map(|j| comp.scaled_integral(j, &eta_inv))
                .collect();
            comp.table_start = start;
        }
        let d_abs = dyadic_lower(&d_over_pi.abs(), TAIL_BITS);
        Ok(Self {
            eta_inv,
            k_h,
            d_abs,
            k_parts,
        })
    }

    fn bound(&self, c_mult: &Rational, truncation: u32, pi_ball: &Ball) -> TailBound {
        let c_hi = c_upper(c_mult, pi_ball);
        let d_lo = dyadic_lower(&(&self.d_abs * pi_ball.lower()), TAIL_BITS);
        let e_hi = e_upper();
        let half = ratio(1, 2);
        let first = truncation as i64 + 1;

        // ĥ part: K_h c/|D| Σ_{j>J} (c/2)^{2j} (e/(2j+1))^{2j+1}
        let c_half_sq = up(&(&c_hi * &c_hi / int(4)));
        let h_term = |j: i64| -> Rational {
            let n = 2 * j + 1;
            up(&(pow_up(&c_half_sq, j as u64) * pow_up(&up(&(&e_hi / int(n))), n as u64)))
        };
        let ce_half_sq = up(&(&c_half_sq * &e_hi * &e_hi));
        let h_ratio = |j: i64| -> Rational { up(&(&ce_half_sq / int((2 * j + 3) * (2 * j + 3)))) };
        let h_sum = dominated_sum(first, h_term, h_ratio, &half);
        let h_part = dyadic_upper(&(&self.k_h * &c_hi / &d_lo * h_sum), TAIL_BITS);

        // k̂ part, per component: weight · I(a, 2j-n)/(2j-n)! · c^{2j+1}/(4^j (2j+1) |D|)
        let c_eta_sq = up(&(&c_half_sq * &self.eta_inv * &self.eta_inv));
        let mut k_part = Rational::zero();
        for comp in &self.k_parts {
            let start = first.max((comp.n + 1) / 2).max(0);
            let term =
                |j: i64| -> Rational {
                    up(&(pow_up(&c_half_sq, j as u64)
                        * &c_hi
                        * comp.scaled_integral(j, &self.eta_inv)
                        / int(2 * j + 1)))
                };
            let ratio_fn = |j: i64| -> Rational {
                let m = 2 * j - comp.n;
                up(&(&c_eta_sq / int((m + 1) * (m + 2))))
            };
            k_part += dominated_sum(start, term, ratio_fn, &half);
        }
        let k_part = dyadic_upper(&(k_part / &d_lo), TAIL_BITS);
        TailBound { h_part, k_part }
    }
}

fn up(q: &Rational) -> Rational {
    dyadic_upper(q, TAIL_BITS)
}

/// Upper bound on `q^n` for `q >= 0`, rounding after every product.
fn pow_up(q: &Rational, mut n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut base = q.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = up(&(&acc * &base));
        }
        base = up(&(&base * &base));
        n >>= 1;
    }
    acc
}

/// Dyadic upper bound on `c_mult · π`.
fn c_upper(c_mult: &Rational, pi_ball: &Ball) -> Rational {
    dyadic_upper(&(c_mult * pi_ball.upper()), TAIL_BITS)
}

/// `Σ_{j >= first} t_j` for nonnegative terms with `t_{j+1} <= ρ_j t_j` and
/// `ρ_j` nonincreasing: explicit terms until `ρ_j <= cutoff`, then a
/// geometric bound.
fn dominated_sum<T, R>(first: i64, term: T, ratio_fn: R, cutoff: &Rational) -> Rational
where
    T: Fn(i64) -> Rational,
    R: Fn(i64) -> Rational,
{
    let mut sum = Rational::zero();
    let mut j = first;
    loop {
        let t = term(j);
        let rho = ratio_fn(j);
        if &rho <= cutoff {
            return sum + t / (Rational::one() - rho);
        }
        sum += t;
        j += 1;
    }
}

/// `∫_0^1 x^a (s - x)^m dx` for `s >= 1`, exactly.
fn power_integral(a: usize, m: usize, s: &Rational) -> Rational {
    // expand (s - x)^m = Σ_t C(m,t) s^(m-t) (-x)^t
    let mut total = Rational::zero();
    let mut binom = BigInt::one();
    let mut s_pow = num_traits::pow(s.clone(), m);
    let s_inv = s.recip();
    for t in 0..=m {
        let term = Rational::from_integer(binom.clone()) * &s_pow / int((a + t + 1) as i64);
        if t % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * BigInt::from(m - t) / BigInt::from(t + 1);
        s_pow *= &s_inv;
    }
    total
}
