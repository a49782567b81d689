mod common;

use common::quadrature::{k_quad, l_quad};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use zerogap_core::moments::{GapConfig, MomentEvaluator};
use zerogap_core::poly::Polynomial;
use zerogap_core::rational::{ratio, to_f64, Rational};

fn random_poly(rng: &mut StdRng) -> Polynomial {
    let degree = rng.gen_range(0..=8);
    let coeffs: Vec<Rational> = (0..=degree)
        .map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=5)))
        .collect();
    let p = Polynomial::from_coeffs(coeffs);
    if p.is_zero() {
        Polynomial::monomial(degree, ratio(1, 1))
    } else {
        p
    }
}

fn floats(p: &Polynomial) -> Vec<f64> {
    p.coeffs().iter().map(to_f64).collect()
}

fn rel_err(exact: f64, approx: f64) -> f64 {
    (exact - approx).abs() / exact.abs()
}

#[test]
fn exact_integrals_match_quadrature() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let etas = [ratio(1, 2), ratio(1, 3), ratio(2, 5)];
    let mut checked = 0;
    for case in 0..36 {
        let r = rng.gen_range(1..=3);
        let eta = etas[case % etas.len()].clone();
        let cfg =
            GapConfig::new(r, eta.clone(), random_poly(&mut rng), random_poly(&mut rng)).unwrap();
        let (f0, f2) = (floats(cfg.p0()), floats(cfg.p2()));
        let mut ev = MomentEvaluator::new(&cfg).unwrap();
        let (i1, i2) = [(0, 0), (0, 2), (2, 0), (2, 2)][case % 4];
        let (p1, p2) = (
            if i1 == 0 { &f0 } else { &f2 },
            if i2 == 0 { &f0 } else { &f2 },
        );

        let ln = [
            rng.gen_range(0..3),
            rng.gen_range(0..3),
            rng.gen_range(0..3),
            rng.gen_range(0..3),
        ];
        let exact = to_f64(&ev.l_int(i1, i2, ln).unwrap());
        let approx = l_quad(r as i64, p1, p2, ln);
        assert!(
            rel_err(exact, approx) < 1e-10,
            "l case {case}: {exact} vs {approx}"
        );

        let kn = [
            rng.gen_range(0..3),
            rng.gen_range(0..5),
            rng.gen_range(0..3),
            rng.gen_range(0..3),
        ];
        let exact = to_f64(&ev.k_int(i1, i2, kn).unwrap());
        let approx = k_quad(r as i64, to_f64(&eta), p1, p2, kn);
        assert!(
            rel_err(exact, approx) < 1e-10,
            "k case {case}: {exact} vs {approx}"
        );
        checked += 1;
    }
    assert!(checked >= 30);
}
