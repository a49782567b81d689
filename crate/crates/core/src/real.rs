//! Midpoint-radius ("ball") binary fixed-point reals.
//!
//! A [`Ball`] with `bits = b` encloses the interval
//! `[(mid - rad) / 2^b, (mid + rad) / 2^b]`. Every operation rounds the
//! midpoint and widens the radius so that the enclosure stays valid; exact
//! inputs keep a zero radius.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    bits: u32,
}

/// Binary precision that carries `digits` decimal digits plus guard digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    // log2(10) < 3.3220
    ((digits as u64 + 20) * 33220 / 10000 + 1) as u32
}

impl Ball {
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let (q, r) = (num << bits as usize).div_mod_floor(&den);
        let rad = if r.is_zero() {
            BigInt::zero()
        } else {
            BigInt::one()
        };
        Self { mid: q, rad, bits }
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), bits)
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Self {
            mid: BigInt::from(n) << bits as usize,
            rad: BigInt::zero(),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.bits, other.bits);
        Self {
            mid: &self.mid + &other.mid,
            rad: &self.rad + &other.rad,
            bits: self.bits,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.bits, other.bits);
        Self {
            mid: &self.mid - &other.mid,
            rad: &self.rad + &other.rad,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: -&self.mid,
            rad: self.rad.clone(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.bits, other.bits);
        let shift = self.bits as usize;
        let prod = &self.mid * &other.mid;
        let mid = &prod >> shift;
        let inexact = (&mid << shift) != prod;
        let spread =
            self.mid.abs() * &other.rad + other.mid.abs() * &self.rad + &self.rad * &other.rad;
        let mut rad = ceil_shift(&spread, shift);
        if inexact {
            rad += 1;
        }
        Self {
            mid,
            rad,
            bits: self.bits,
        }
    }

    /// Multiplies by an exact rational, rounding once.
    pub fn mul_rational(&self, q: &Rational) -> Self {
        let num = &self.mid * q.numer();
        let (mid, r) = num.div_mod_floor(q.denom());
        let spread = &self.rad * q.numer().abs();
        let (mut rad, rr) = spread.div_mod_floor(q.denom());
        if !rr.is_zero() {
            rad += 1;
        }
        if !r.is_zero() {
            rad += 1;
        }
        Self {
            mid,
            rad,
            bits: self.bits,
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::from_int(1, self.bits);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Upper end of the enclosure.
    pub fn upper(&self) -> Rational {
        Rational::new(&self.mid + &self.rad, BigInt::one() << self.bits as usize)
    }

    /// Lower end of the enclosure.
    pub fn lower(&self) -> Rational {
        Rational::new(&self.mid - &self.rad, BigInt::one() << self.bits as usize)
    }

    pub fn midpoint(&self) -> Rational {
        Rational::new(self.mid.clone(), BigInt::one() << self.bits as usize)
    }

    pub fn radius(&self) -> Rational {
        Rational::new(self.rad.clone(), BigInt::one() << self.bits as usize)
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    pub fn to_f64(&self) -> f64 {
        crate::rational::to_f64(&self.midpoint())
    }

    /// Midpoint rounded half away from zero to `digits` decimals.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = &self.mid * num_traits::pow(BigInt::from(10u8), digits as usize);
        let denom = BigInt::one() << self.bits as usize;
        let (q, r) = scaled.abs().div_rem(&denom);
        let q = if (r << 1usize) >= denom { q + 1 } else { q };
        let negative = self.mid.is_negative() && !q.is_zero();
        fixed_string(&q, digits as usize, negative)
    }
}

fn ceil_shift(x: &BigInt, shift: usize) -> BigInt {
    let floor = x >> shift;
    if (&floor << shift) == *x {
        floor
    } else {
        floor + 1
    }
}

fn fixed_string(abs_scaled: &BigInt, digits: usize, negative: bool) -> String {
    let s = abs_scaled.to_string();
    let padded = if s.len() <= digits {
        "0".repeat(digits + 1 - s.len()) + &s
    } else {
        s
    };
    let split = padded.len() - digits;
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{padded}")
    } else {
        format!("{sign}{}.{}", &padded[..split], &padded[split..])
    }
}

/// `arctan(1/x)` scaled by `2^bits`, with an absolute error bound in ulps.
fn arctan_inv(x: u64, bits: u32) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << bits as usize) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    // each step loses < 3 ulps; the omitted alternating tail is < 1 ulp
    (sum, BigInt::from(3 * k + 2))
}

/// Enclosure of π via Machin's formula `π = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(bits: u32) -> Ball {
    const GUARD: u32 = 24;
    let work = bits + GUARD;
    let (a5, e5) = arctan_inv(5, work);
    let (a239, e239) = arctan_inv(239, work);
    let v = a5 * 16 - a239 * 4;
    let err = e5 * 16 + e239 * 4;
    let mid = &v >> GUARD as usize;
    let rad = ceil_shift(&err, GUARD as usize) + 1;
    Ball { mid, rad, bits }
}

/// Smallest `m / 2^s >= q` with about `sig_bits` significant bits.
pub fn dyadic_upper(q: &Rational, sig_bits: u32) -> Rational {
    dyadic_round(q, sig_bits, true)
}

/// Largest `m / 2^s <= q` with about `sig_bits` significant bits.
pub fn dyadic_lower(q: &Rational, sig_bits: u32) -> Rational {
    dyadic_round(q, sig_bits, false)
}

fn dyadic_round(q: &Rational, sig_bits: u32, up: bool) -> Rational {
    if q.is_zero() {
        return q.clone();
    }
    let e = q.numer().bits() as i64 - q.denom().bits() as i64;
    let s = sig_bits as i64 - e;
    let (num, den) = if s >= 0 {
        (q.numer() << s as usize, q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() << (-s) as usize)
    };
    let (fl, rem) = num.div_mod_floor(&den);
    let m = if up && !rem.is_zero() { fl + 1 } else { fl };
    if s >= 0 {
        Rational::new(m, BigInt::one() << s as usize)
    } else {
        Rational::from_integer(m << (-s) as usize)
    }
}

/// Rational enclosure `lo <= π <= hi` at the given binary precision.
pub fn pi_bounds(bits: u32) -> (Rational, Rational) {
    let p = pi(bits);
    (p.lower(), p.upper())
}

/// Rational upper bound on `e`; the enclosure is exact to 30 digits.
pub fn e_upper() -> Rational {
    // e = 2.71828182845904523536028747135266249775...
    Rational::new(
        BigInt::from(2_718_281_828_459_045_235_360_287_471_353u128),
        num_traits::pow(BigInt::from(10u8), 30),
    )
}

/// Rational lower bound on `e`.
pub fn e_lower() -> Rational {
    Rational::new(
        BigInt::from(2_718_281_828_459_045_235_360_287_471_352u128),
        num_traits::pow(BigInt::from(10u8), 30),
    )
}

impl core::fmt::Display for Ball {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let digits = (self.bits as u64 * 3010 / 10000) as u32;
        f.write_str(&self.to_decimal(digits.saturating_sub(6)))?;
        if !self.rad.is_zero() {
            f.write_str(" +/- ")?;
            f.write_str(&sci_upper(&self.radius(), 3))?;
        }
        Ok(())
    }
}

/// Scientific notation of a nonnegative rational, rounded up in the last
/// mantissa digit, e.g. `1.24e-35`. Zero renders as `0`.
pub fn sci_upper(q: &Rational, mantissa_digits: u32) -> String {
    assert!(!q.is_negative(), "sci_upper needs a nonnegative value");
    if q.is_zero() {
        return "0".to_string();
    }
    let ten = Rational::from_integer(BigInt::from(10u8));
    // decimal exponent e with 10^e <= q < 10^(e+1)
    let num_len = q.numer().to_string().len() as i64;
    let den_len = q.denom().to_string().len() as i64;
    let mut e = num_len - den_len;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            Rational::one() / num_traits::pow(ten.clone(), (-k) as usize)
        }
    };
    while &pow10(e) > q {
        e -= 1;
    }
    while &pow10(e + 1) <= q {
        e += 1;
    }
    let places = mantissa_digits.saturating_sub(1) as i64;
    let scaled = q / pow10(e - places);
    let mut m = scaled.ceil().to_integer();
    if m.to_string().len() as i64 > places + 1 {
        // rounding up carried into a new digit, e.g. 9.99 -> 10.0
        m = (m + 9) / 10;
        e += 1;
    }
    let digits = m.to_string();
    let mantissa = if places == 0 {
        digits
    } else {
        format!("{}.{}", &digits[..1], &digits[1..])
    };
    format!("{mantissa}e{e}")
}
