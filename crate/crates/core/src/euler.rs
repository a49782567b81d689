//! The constants `a_r = Π_p (1 - 1/p)^{r²} Σ_m C(r+m-1, m)² p^{-m}`.
//!
//! The inner series has the closed form
//! `Σ_m C(r+m-1, m)² x^m = (1-x)^{1-2r} Σ_{k<r} C(r-1, k)² x^k`, so each local
//! factor is the finite expression `(1-x)^{(r-1)²} Σ_{k<r} C(r-1, k)² x^k`
//! with `x = 1/p`. Its logarithm is `-r²(r-1)² x² / 4 + O(x³)`, which drives
//! the tail estimate and the correction for primes past the cutoff.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EulerProductResult {
    pub r: u32,
    pub prime_cutoff: u64,
    pub primes_used: usize,
    /// Product over `p <= cutoff` times the asymptotic correction for `p > cutoff`.
    pub value: f64,
    /// Product over `p <= cutoff` only.
    pub truncated_value: f64,
    /// Estimate of `|log a_r - log truncated_value|`.
    pub tail_estimate: f64,
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut k = i.saturating_mul(i);
        while k <= n {
            composite[k] = true;
            k += i;
        }
    }
    out
}

/// `C(r-1, k)²` for `k < r`, as floats.
fn squared_binomials(r: u32) -> Vec<f64> {
    let n = r as u64 - 1;
    let mut row = Vec::with_capacity(r as usize);
    let mut c = 1f64;
    for k in 0..=n {
        row.push(c * c);
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    row
}

/// `log` of the local factor at `p`.
pub fn log_local_factor(r: u32, p: u64) -> f64 {
    log_local_factor_with(&squared_binomials(r), r, p)
}

fn log_local_factor_with(binoms: &[f64], r: u32, p: u64) -> f64 {
    let x = 1.0 / p as f64;
    // Σ_{k>=1} C(r-1,k)² x^k, kept separate from the leading 1 for log1p
    let mut rest = 0.0;
    let mut xk = 1.0;
    for b in &binoms[1..] {
        xk *= x;
        rest += b * xk;
    }
    let e = ((r - 1) * (r - 1)) as f64;
    e * libm::log1p(-x) + libm::log1p(rest)
}

/// The local factor by direct summation of its defining series, stopping once
/// terms drop below `tol`. Used as a cross-check of the closed form.
pub fn local_factor_series(r: u32, p: u64, tol: f64) -> f64 {
    let x = 1.0 / p as f64;
    let mut sum = 0.0;
    let mut c = 1.0f64;
    let mut xm = 1.0f64;
    let mut m = 0u64;
    loop {
        let term = c * c * xm;
        sum += term;
        if term < tol && m > 0 {
            break;
        }
        // C(r+m, m+1) = C(r+m-1, m) · (r+m)/(m+1)
        c = c * (r as u64 + m) as f64 / (m + 1) as f64;
        xm *= x;
        m += 1;
    }
    libm::pow(1.0 - x, (r * r) as f64) * sum
}

/// Exponential integral `E_1(x)` for `x >= 1`, by continued fraction.
pub fn exp_integral_e1(x: f64) -> f64 {
    // modified Lentz on E1(x) = e^-x / (x + 1 - 1²/(x + 3 - 2²/(x + 5 - ...)))
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..200 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * libm::exp(-x)
}

pub fn a_const(r: u32, cutoff: u64) -> Result<EulerProductResult> {
    if r == 0 {
        return Err(Error::InvalidArgument("a_r needs r >= 1".into()));
    }
    if cutoff < 100 {
        return Err(Error::InvalidArgument(
            "prime cutoff must be at least 100".into(),
        ));
    }
    let primes = primes_up_to(cutoff);
    let binoms = squared_binomials(r);
    // Neumaier-compensated sum of the local logarithms
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &p in &primes {
        let v = log_local_factor_with(&binoms, r, p);
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    let log_truncated = sum + comp;
    let lead = ((r * r) as f64) * (((r - 1) * (r - 1)) as f64) / 4.0;
    // Σ_{p > N} p^-2 ≈ ∫_N^∞ dt / (t² log t) = E_1(log N)
    let correction = -lead * exp_integral_e1(libm::log(cutoff as f64));
    Ok(EulerProductResult {
        r,
        prime_cutoff: cutoff,
        primes_used: primes.len(),
        value: libm::exp(log_truncated + correction),
        truncated_value: libm::exp(log_truncated),
        tail_estimate: 2.0 * lead / cutoff as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }

    #[test]
    fn closed_form_matches_series() {
        for r in 1..=5 {
            for p in [2u64, 3, 7, 101, 7919] {
                let closed = libm::exp(log_local_factor(r, p));
                let series = local_factor_series(r, p, 1e-22);
                assert!(
                    (closed - series).abs() < 1e-13,
                    "r = {r}, p = {p}: {closed} vs {series}"
                );
            }
        }
    }

    #[test]
    fn r_two_factor_is_one_minus_inverse_square() {
        for p in [2u64, 5, 97] {
            let x = 1.0 / p as f64;
            assert!((libm::exp(log_local_factor(2, p)) - (1.0 - x * x)).abs() < 1e-15);
        }
    }

    #[test]
    fn r_one_is_exactly_one() {
        let res = a_const(1, 1000).unwrap();
        assert_eq!(res.value, 1.0);
        assert_eq!(res.truncated_value, 1.0);
    }

    #[test]
    fn e1_reference_values() {
        // E1(1) = 0.219383934395520..., E1(10) = 4.15696892968532e-6
        assert!((exp_integral_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-14);
        assert!((exp_integral_e1(10.0) / 4.156_968_929_685_324e-6 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(a_const(0, 1000).is_err());
        assert!(a_const(2, 99).is_err());
    }

    #[test]
    fn local_factor_positive_and_tends_to_one() {
        for r in 1..=5 {
            let mut prev = f64::INFINITY;
            for p in primes_up_to(2000) {
                let l = log_local_factor(r, p);
                assert!(libm::exp(l) > 0.0);
                assert!(l.abs() <= prev + 1e-18 || p < 50);
                prev = l.abs();
            }
            assert!(log_local_factor(r, 1_000_003).abs() < 1e-9);
        }
    }
}
