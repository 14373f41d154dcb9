use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use osctime::gauss::{apply_h, inner_product, inner_product_exact, EpsParam, GaussTerm, GaussVector};
use osctime::povm::{
    commutator_check, contrast_sweep, full_circle_weight_exact, hermite_coefficients, hermite_frame, norm_bound_check,
    povm_weight, tg_entry, tg_form, tg_increment, tg_matrix, weight_from_coefficients, PiPoly,
};
use osctime::scalar::ExactScalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn random_vector(rng: &mut ChaCha8Rng) -> GaussVector<ExactScalar> {
    let terms = (0..rng.gen_range(1..=3))
        .map(|_| {
            let c = ExactScalar::complex_ratio((rng.gen_range(-4..=4), 3), (rng.gen_range(-4..=4), 3));
            let z = ExactScalar::complex_ratio((rng.gen_range(-3..=3), 10), (rng.gen_range(3..=15), 10));
            GaussTerm::new(c, rng.gen_range(0..=4), z).unwrap()
        })
        .collect();
    let v = GaussVector::from_terms(terms).unwrap();
    if v.is_zero() {
        GaussVector::monomial(ExactScalar::one(), 0, ExactScalar::imag(q(1, 2))).unwrap()
    } else {
        v
    }
}

#[test]
fn frame_polynomials_and_normalization() {
    let frame = hermite_frame(2, &EpsParam::one()).unwrap();
    let x = |c: i64, p: u32| GaussVector::monomial(ExactScalar::from_int(c), p, ExactScalar::i()).unwrap();
    assert_eq!(frame.vectors[0], x(1, 0));
    assert_eq!(frame.vectors[1], x(2, 1));
    assert_eq!(frame.vectors[2], x(4, 2).add(&x(-2, 0)));
    let e0 = frame.e_f64(0);
    assert!((inner_product(&e0, &e0).re - 1.0).abs() < 1e-15);
    assert!((frame.c(0).powi(2) - 1.0 / PI.sqrt()).abs() < 1e-15);
}

#[test]
fn frame_is_orthonormal_and_diagonalizes_h() {
    for eps in ["1", "1/16"] {
        let eps: EpsParam = eps.parse().unwrap();
        let frame = hermite_frame(14, &eps).unwrap();
        assert_eq!(frame.check_orthonormal(), Ok(()));
        for n in 0..=14 {
            assert!(frame.check_eigen(n).unwrap(), "n={n} ε={eps}");
        }
    }
    let frame = hermite_frame(5, &EpsParam::one()).unwrap();
    assert_eq!(apply_h(&frame.vectors[5], &EpsParam::one()), frame.vectors[5].scale(&ExactScalar::ratio(11, 2)));
    assert!(hermite_frame(3, &"1/2".parse().unwrap()).is_err());
}

#[test]
fn coefficients_match_exact_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for eps in ["1", "1/16"] {
        let eps: EpsParam = eps.parse().unwrap();
        let frame = hermite_frame(20, &eps).unwrap();
        for _ in 0..8 {
            let f = random_vector(&mut rng);
            let a = hermite_coefficients(&f.to_c64(), 20, &eps);
            for n in 0..=20 {
                let exact = inner_product_exact(&frame.vectors[n], &f).eval() * frame.c(n);
                assert!((a[n] - exact).norm() <= 1e-11 * (1.0 + exact.norm()), "n={n}: {} vs {exact}", a[n]);
            }
        }
    }
}

#[test]
fn coefficients_of_frame_vectors_are_unit() {
    let frame = hermite_frame(8, &EpsParam::one()).unwrap();
    for k in 0..=8 {
        let a = hermite_coefficients(&frame.e_f64(k), 12, &EpsParam::one());
        for (n, c) in a.iter().enumerate() {
            let expect = if n == k { 1.0 } else { 0.0 };
            assert!((c - expect).norm() < 1e-12, "k={k} n={n}: {c}");
        }
    }
}

#[test]
fn parseval_at_large_truncation() {
    let f = GaussVector::monomial(Complex64::new(1.0, 0.5), 3, Complex64::new(0.2, 0.6)).unwrap();
    let a = hermite_coefficients(&f, 400, &EpsParam::one());
    let s: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    assert!((s - inner_product(&f, &f).re).abs() < 1e-10 * s);
}

#[test]
fn tg_matrix_entries() {
    let t = tg_matrix(6);
    assert_eq!(t.entries[0][1], PiPoly::constant(ExactScalar::imag(q(-1, 1))));
    assert_eq!(t.entries[1][0], PiPoly::constant(ExactScalar::i()));
    for n in 0..=6 {
        assert_eq!(t.entries[n][n], PiPoly::term(ExactScalar::one(), 1));
    }
    assert_eq!(t.entries[5][2], tg_entry(5, 2));
    assert!(t.is_hermitian());
    let text = t.to_text();
    assert!(text.starts_with("# tg_matrix N=6"));
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().nth(1).unwrap().starts_with("1*pi,0 0,-1 0,-1/2"));
}

#[test]
fn tg_form_on_frame_vectors() {
    let frame = hermite_frame(1, &EpsParam::one()).unwrap();
    let e0 = frame.e_f64(0);
    let v = tg_form(&e0, &e0, 10).unwrap();
    assert!((v.value - Complex64::new(PI, 0.0)).norm() < 1e-12);
    let d = e0.sub(&frame.e_f64(1)).scale(&Complex64::new(0.5f64.sqrt(), 0.0));
    let v = tg_form(&d, &d, 10).unwrap();
    assert!((v.value - Complex64::new(PI, 0.0)).norm() < 1e-12, "{}", v.value);
    assert!(tg_increment(&v).unwrap() < 1e-12);
    let e1 = frame.e_f64(1);
    assert!((tg_form(&e0, &e1, 4).unwrap().value - Complex64::new(0.0, -1.0)).norm() < 1e-12);
}

#[test]
fn tg_form_is_bounded_by_hilbert_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let f = random_vector(&mut rng).to_c64();
        let g = random_vector(&mut rng).to_c64();
        let v = tg_form(&f, &g, 400).unwrap().value.norm();
        let bound = 2.0 * PI * inner_product(&f, &f).re.sqrt() * inner_product(&g, &g).re.sqrt();
        assert!(v <= bound, "{v} > {bound}");
    }
}

#[test]
fn povm_weights_behave_like_a_measure() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = random_vector(&mut rng).to_c64();
    assert_eq!(povm_weight(1.0, 1.0, &f, 60).unwrap(), 0.0);
    assert!(matches!(povm_weight(-1.0, 1.0, &f, 60), Err(osctime::Error::Domain(_))));
    for _ in 0..20 {
        let f = random_vector(&mut rng).to_c64();
        let mut ts: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        ts.sort_by(f64::total_cmp);
        let inner = povm_weight(ts[1], ts[2], &f, 80).unwrap();
        let outer = povm_weight(ts[0], ts[3], &f, 80).unwrap();
        assert!((-1e-14..=1.0 + 1e-12).contains(&inner) && inner <= outer + 1e-14);
        assert!(outer <= 1.0 + 1e-12);
        let split = povm_weight(ts[0], ts[1], &f, 80).unwrap() + povm_weight(ts[1], ts[3], &f, 80).unwrap();
        assert!((split - outer).abs() < 1e-13);
    }
}

#[test]
fn full_circle_weight_is_one_on_hermite_supported_vectors() {
    let frame = hermite_frame(10, &EpsParam::one()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let beta: Vec<ExactScalar> = (0..=10)
            .map(|_| ExactScalar::complex_ratio((rng.gen_range(-3..=3), 2), (rng.gen_range(-3..=3), 5)))
            .collect();
        if beta.iter().all(|b| b.is_zero()) {
            continue;
        }
        assert_eq!(full_circle_weight_exact(&frame, &beta).unwrap(), q(1, 1));
        let f = frame.combine(&beta).to_c64();
        let a = hermite_coefficients(&f, 10, &EpsParam::one());
        let w = weight_from_coefficients(0.0, 2.0 * PI, &a) / inner_product(&f, &f).re;
        assert!((w - 1.0).abs() < 1e-12);
    }
}

#[test]
fn commutator_identity_is_exact() {
    for n in [1, 2, 7, 50] {
        let r = commutator_check(n, n);
        assert!(r.pass && r.mismatches == 0 && r.restriction_failures == 0, "{r:?}");
    }
    let r = commutator_check(200, 20);
    assert!(r.pass, "{r:?}");
    assert_eq!(r.entries_checked, 201 * 201);
}

#[test]
fn commutator_with_h_by_hand() {
    // Off the diagonal (n − m)·i/(n − m) = i; on it zero.
    let h = |k: i64| PiPoly::constant(ExactScalar::ratio(2 * k + 1, 2));
    let c = h(3).mul(&tg_entry(3, 1)).sub(&tg_entry(3, 1).mul(&h(1)));
    assert_eq!(c, PiPoly::constant(ExactScalar::i()));
    let d = h(2).mul(&tg_entry(2, 2)).sub(&tg_entry(2, 2).mul(&h(2)));
    assert!(d.is_zero());
}

#[test]
fn norm_stays_below_two_pi() {
    let r = norm_bound_check(0);
    assert!((r.estimate - PI).abs() < 1e-12);
    let r = norm_bound_check(50);
    assert!(r.converged && r.pass && r.estimate > PI, "{r:?}");
    let mut prev = 0.0;
    for n in [10, 20, 30, 40] {
        let r = norm_bound_check(n);
        assert!(r.converged && r.pass);
        assert!(r.estimate >= prev - 1e-7, "N={n}: {} < {prev}", r.estimate);
        assert!(r.second.unwrap() <= r.estimate + 1e-7);
        prev = r.estimate;
    }
}

#[test]
fn contrast_between_unbounded_and_bounded_forms() {
    let alphas = vec![q(1, 4), q(1, 2), q(3, 4), q(1023, 1024)];
    for k in 0..=1 {
        let rep = contrast_sweep(k, &alphas, 200).unwrap();
        assert!(rep.rows.iter().all(|r| r.tg_within_bound), "{rep:?}");
        let last = rep.rows.last().unwrap();
        assert!(last.t_exceeds_bound && last.t_value > 2.0 * PI, "{last:?}");
        assert!(last.tg_increment < 1e-8);
    }
    assert!(matches!(contrast_sweep(0, &[q(1, 1)], 50), Err(osctime::Error::Domain(_))));
}
