//! Floating-point reference integrals, computed straight from the integral
//! definitions with adaptive Gauss-Legendre quadrature. Nothing here uses the
//! factorial reductions of the library.

#![allow(dead_code)]

use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(24))
}

fn fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    rule().iter().map(|(x, w)| w * f(m + h * x)).sum::<f64>() * h
}

/// Adaptive bisection until the whole-interval and split estimates agree.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    adapt(f, a, b, fixed(f, a, b), 0)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
    let m = (a + b) / 2.0;
    let (left, right) = (fixed(f, a, m), fixed(f, m, b));
    let split = left + right;
    if depth >= 12 || (split - whole).abs() <= 1e-15 * split.abs().max(1e-300) {
        return split;
    }
    adapt(f, a, m, left, depth + 1) + adapt(f, m, b, right, depth + 1)
}

pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `Q_u(x) = ∫_0^1 θ^u P(x + θ(1-x)) dθ`.
pub fn q_value(p: &[f64], u: u32, x: f64) -> f64 {
    integrate(
        &|t: f64| t.powi(u as i32) * poly_eval(p, x + t * (1.0 - x)),
        0.0,
        1.0,
    )
}

/// `l` from its definition.
pub fn l_quad(r: i64, p1: &[f64], p2: &[f64], n: [i64; 4]) -> f64 {
    let [n1, n2, n3, n4] = n;
    let a = (r * r + n1 + n2 - 1) as i32;
    let b = (2 * r + n3 + n4) as i32;
    let (u1, u2) = ((r + n3 - 1) as u32, (r + n4 - 1) as u32);
    integrate(
        &|x: f64| x.powi(a) * (1.0 - x).powi(b) * q_value(p1, u1, x) * q_value(p2, u2, x),
        0.0,
        1.0,
    )
}

/// `k` from its definition, over the triangle `x, y >= 0, x + y <= 1`.
pub fn k_quad(r: i64, eta: f64, p1: &[f64], p2: &[f64], n: [i64; 4]) -> f64 {
    let [n1, n2, n3, n4] = n;
    let u = (r + n4 - 1) as u32;
    integrate(
        &|x: f64| {
            let outer = x.powi((r + n1 - 1) as i32) * (1.0 / eta - x).powi(n2 as i32);
            outer
                * integrate(
                    &|y: f64| {
                        y.powi((r * r + n3 - 1) as i32)
                            * (1.0 - y).powi((r + n4) as i32)
                            * poly_eval(p1, x + y)
                            * q_value(p2, u, y)
                    },
                    0.0,
                    1.0 - x,
                )
        },
        0.0,
        1.0,
    )
}
