mod common;

use num_complex::Complex64;
use num_rational::BigRational;
use osctime::gauss::{
    apply_h, apply_t, apply_t_star, arctan_partial_sum, inner_product, power_t_closed, EpsParam, GaussTerm,
    GaussVector, Which,
};
use osctime::scalar::ExactScalar;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn random_width(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.3..2.5));
        if z.norm() <= 3.0 {
            return z;
        }
    }
}

#[test]
fn moments_agree_with_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let f = GaussVector::monomial(
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            rng.gen_range(0..=8),
            random_width(&mut rng),
        )
        .unwrap();
        let g = GaussVector::monomial(Complex64::new(1.0, 0.0), rng.gen_range(0..=8), random_width(&mut rng)).unwrap();
        let exact = inner_product(&f, &g);
        let integrand = |x: f64| f.eval_at(x).conj() * g.eval_at(x);
        let quad = common::integrate(&integrand, -14.0, 14.0, 1e-14);
        if (f.terms()[0].power + g.terms()[0].power) % 2 == 1 {
            assert!(exact.norm() == 0.0 && quad.norm() < 1e-9);
        } else {
            assert!((exact - quad).norm() <= 1e-9 * exact.norm(), "{exact} vs {quad}");
        }
    }
}

#[test]
fn gaussian_is_eigenvector_of_t() {
    for eps in ["1", "1/4", "1/100"] {
        let eps: EpsParam = eps.parse().unwrap();
        for k in 1..=9 {
            let a = q(k, 10);
            let v = GaussVector::xi_alpha(&a, &eps).unwrap();
            let lam = ExactScalar::imag(&a / eps.sqrt_exact().unwrap());
            assert_eq!(apply_t(&v).unwrap(), v.scale(&lam));
        }
    }
}

#[test]
fn gaussian_is_eigenvector_of_t_irrational_root() {
    let eps: EpsParam = "1/2".parse().unwrap();
    for k in 1..=9 {
        let a = k as f64 / 10.0;
        let v = GaussVector::monomial(Complex64::new(1.0, 0.0), 0, eps.xi_width_f64(a)).unwrap();
        let w = apply_t(&v).unwrap();
        let lam = Complex64::new(0.0, a / eps.sqrt_f64());
        assert_eq!(w.terms().len(), 1);
        assert!((w.terms()[0].coeff - lam).norm() <= 1e-15);
    }
}

#[test]
fn closed_power_matches_repeated_t() {
    for eps in ["1", "1/4", "1/100"] {
        let eps: EpsParam = eps.parse().unwrap();
        let r = ExactScalar::real(eps.sqrt_exact().unwrap());
        let a = q(3, 7);
        for m in 0..=4u32 {
            let base = GaussVector::xi_alpha(&a, &eps).unwrap().shift_power(2 * m);
            let mut v = base.clone();
            for n in 0..=8u32 {
                let table = power_t_closed(n, m, &a, &eps).unwrap();
                let z = base.terms()[0].width.clone();
                let closed = GaussVector::from_terms(
                    table.into_iter().map(|(p, c)| GaussTerm::new(c, p, z.clone()).unwrap()).collect(),
                )
                .unwrap();
                assert_eq!(closed, v, "n={n} m={m}");
                v = apply_t(&v).unwrap().scale(&r);
            }
        }
    }
}

fn hermite(n: usize) -> Vec<i64> {
    let mut h0 = vec![1i64];
    let mut h1 = vec![0i64, 2];
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let mut h2 = vec![0i64; k + 2];
        for (j, c) in h1.iter().enumerate() {
            h2[j + 1] += 2 * c;
        }
        for (j, c) in h0.iter().enumerate() {
            h2[j] -= 2 * k as i64 * c;
        }
        h0 = h1;
        h1 = h2;
    }
    h1
}

#[test]
fn hermite_functions_are_eigenvectors_of_h() {
    for eps in ["1", "1/16", "1/81"] {
        let eps: EpsParam = eps.parse().unwrap();
        let r = eps.fourth_root_exact().unwrap();
        let z = ExactScalar::imag(BigRational::from_integer(1.into()) / (&r * &r));
        for n in 0..=10usize {
            let terms = hermite(n)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| {
                    let coeff = ExactScalar::real(BigRational::from_integer(c.into()) / r.pow(k as i32));
                    GaussTerm::new(coeff, k as u32, z.clone()).unwrap()
                })
                .collect();
            let v = GaussVector::from_terms(terms).unwrap();
            let lam = ExactScalar::real(eps.sqrt_exact().unwrap() * q(2 * n as i64 + 1, 2));
            assert_eq!(apply_h(&v, &eps), v.scale(&lam), "n={n}");
        }
    }
}

#[test]
fn arctan_series_converges_to_log() {
    let eps: EpsParam = "1/4".parse().unwrap();
    for a in [q(1, 2), q(3, 4)] {
        let v = GaussVector::xi_alpha(&a, &eps).unwrap();
        let s = arctan_partial_sum(&v, &eps, 400, Which::T).unwrap();
        assert!(!s.divergent);
        let af = osctime::scalar::rat_to_f64(&a);
        let expect = Complex64::new(0.0, -1.0 / (2.0 * eps.sqrt_f64())) * ((1.0 + af) / (1.0 - af)).ln();
        assert_eq!(s.sum.terms().len(), 1);
        assert!((s.sum.terms()[0].coeff.to_c64() - expect).norm() < 1e-8);
        assert!(s.increment_norms.last().unwrap() < &1e-30);
    }
}

#[test]
fn arctan_series_flagged_divergent_at_edge() {
    let eps = EpsParam::one();
    let v = GaussVector::xi_alpha(&q(1, 1), &eps).unwrap();
    let s = arctan_partial_sum(&v, &eps, 60, Which::T).unwrap();
    assert!(s.divergent);
    // Increments decay only like 1/(2n+1).
    let r = s.increment_norms[60] / s.increment_norms[0];
    assert!((r - 1.0 / 121.0).abs() < 1e-12);
}

#[test]
fn arctan_series_on_odd_vector_with_adjoint() {
    let eps: EpsParam = "1/9".parse().unwrap();
    let a = q(2, 5);
    let v = GaussVector::xi_alpha(&a, &eps).unwrap().shift_power(1);
    let s = arctan_partial_sum(&v, &eps, 200, Which::TStar).unwrap();
    assert!(!s.divergent);
    let expect = Complex64::new(0.0, -1.0 / (2.0 * eps.sqrt_f64())) * (1.4f64 / 0.6).ln();
    assert!((s.sum.terms()[0].coeff.to_c64() - expect).norm() < 1e-10);
}

fn arb_even() -> impl Strategy<Value = GaussVector<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, 0..4u32, -2.0..2.0f64, 0.3..2.0f64), 1..4).prop_map(|ts| {
        GaussVector::from_terms(
            ts.into_iter()
                .map(|(a, b, k, zr, zi)| GaussTerm::new(Complex64::new(a, b), 2 * k, Complex64::new(zr, zi)).unwrap())
                .collect(),
        )
        .unwrap()
    })
}

fn arb_odd() -> impl Strategy<Value = GaussVector<Complex64>> {
    arb_even().prop_map(|v| v.shift_power(1))
}

proptest! {
    #[test]
    fn t_and_t_star_are_adjoint(f in arb_even(), g in arb_odd()) {
        let lhs = inner_product(&apply_t(&f).unwrap(), &g);
        let rhs = inner_product(&f, &apply_t_star(&g).unwrap());
        let scale = lhs.norm().max(rhs.norm()).max(1e-300);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn inner_product_is_hermitian(f in arb_even(), g in arb_odd()) {
        let h = f.add(&g);
        let a = inner_product(&h, &f);
        let b = inner_product(&f, &h).conj();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn text_round_trip_float(f in arb_even()) {
        let txt = osctime::gauss::write_text(&f);
        prop_assert_eq!(osctime::gauss::read_text::<Complex64>(&txt).unwrap(), f);
    }
}
