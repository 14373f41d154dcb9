use num_complex::Complex64;
use num_rational::BigRational;
use osctime::gauss::{arctan_partial_sum, EpsParam, GaussVector, Which};
use osctime::scalar::{Engine, EvalOptions, ExactScalar, LogExt, Poly, RatFunc};
use osctime::symrep::{
    commutator_symbolic, gaussian_shift, k1_expression, k2_expression, key_binomial_sum, qn_apply, qn_identity_rhs,
    s_closed, s_closed_f64, s_closed_poly, s_hat_apply_h, s_hat_closed, SymParity, XPolyLog,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn opts() -> EvalOptions {
    EvalOptions::default()
}

fn max_rel_diff(a: &std::collections::BTreeMap<u32, Complex64>, b: &std::collections::BTreeMap<u32, Complex64>) -> f64 {
    let keys: std::collections::BTreeSet<u32> = a.keys().chain(b.keys()).copied().collect();
    let scale = a.values().chain(b.values()).map(|c| c.norm()).fold(0.0, f64::max);
    let zero = Complex64::new(0.0, 0.0);
    keys.iter().map(|k| (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).norm()).fold(0.0, f64::max) / scale
}

fn coeff_map(v: &GaussVector<ExactScalar>) -> std::collections::BTreeMap<u32, Complex64> {
    v.terms().iter().map(|t| (t.power, t.coeff.to_c64())).collect()
}

#[test]
fn closed_form_matches_arctan_series() {
    for eps in ["1", "1/4"] {
        let eps: EpsParam = eps.parse().unwrap();
        for a in [q(1, 4), q(1, 2), q(3, 4)] {
            let af = osctime::scalar::rat_to_f64(&a);
            for m in 0..=4u32 {
                let f = GaussVector::xi_alpha(&a, &eps).unwrap().shift_power(2 * m);
                let series = arctan_partial_sum(&f, &eps, 400, Which::T).unwrap();
                let closed =
                    s_closed(m, SymParity::Even, &eps).unwrap().eval(Complex64::new(af, 0.0), &opts()).unwrap();
                let err = max_rel_diff(&closed, &coeff_map(&series.sum));
                assert!(err <= 1e-8, "ε={eps} α={a} m={m}: {err:e}");
            }
        }
    }
}

#[test]
fn odd_closed_form_matches_adjoint_series() {
    let eps: EpsParam = "1/4".parse().unwrap();
    let a = q(1, 2);
    for m in 0..=3u32 {
        let f = GaussVector::xi_alpha(&a, &eps).unwrap().shift_power(2 * m + 1);
        let series = arctan_partial_sum(&f, &eps, 300, Which::TStar).unwrap();
        let closed = s_closed(m, SymParity::Odd, &eps).unwrap().eval(Complex64::new(0.5, 0.0), &opts()).unwrap();
        assert!(max_rel_diff(&closed, &coeff_map(&series.sum)) <= 1e-10);
    }
}

#[test]
fn s_closed_m2_matches_series_at_half() {
    let eps = EpsParam::one();
    let f = GaussVector::xi_alpha(&q(1, 2), &eps).unwrap().shift_power(4);
    let series = arctan_partial_sum(&f, &eps, 300, Which::T).unwrap();
    let closed = s_closed(2, SymParity::Even, &eps).unwrap().eval(Complex64::new(0.5, 0.0), &opts()).unwrap();
    assert!(max_rel_diff(&closed, &coeff_map(&series.sum)) <= 1e-10);
}

#[test]
fn float_closed_form_for_irrational_root() {
    let eps: EpsParam = "1/2".parse().unwrap();
    let a = 0.6;
    for m in 0..=3u32 {
        let f = GaussVector::monomial(Complex64::new(1.0, 0.0), 2 * m, eps.xi_width_f64(a)).unwrap();
        let series = arctan_partial_sum(&f, &eps, 400, Which::T).unwrap();
        let closed = s_closed_f64(m, SymParity::Even, &eps, a, &opts()).unwrap();
        let got: std::collections::BTreeMap<u32, Complex64> =
            series.sum.terms().iter().map(|t| (t.power, t.coeff)).collect();
        assert!(max_rel_diff(&closed, &got) <= 1e-10, "m={m}");
    }
    // Agrees with the exact engine where both apply.
    let e4: EpsParam = "1/4".parse().unwrap();
    let exact = s_closed(3, SymParity::Even, &e4).unwrap().eval(Complex64::new(0.3, 0.0), &opts()).unwrap();
    let fl = s_closed_f64(3, SymParity::Even, &e4, 0.3, &opts()).unwrap();
    assert!(max_rel_diff(&exact, &fl) <= 1e-13);
}

#[test]
fn closed_form_equals_binomial_sum() {
    for eps in ["1", "1/4", "1/100"] {
        let eps: EpsParam = eps.parse().unwrap();
        for m in 0..=6 {
            assert_eq!(s_closed(m, SymParity::Even, &eps).unwrap(), key_binomial_sum(m, &eps).unwrap());
        }
    }
}

#[test]
fn irrational_root_is_not_exact() {
    let eps: EpsParam = "1/2".parse().unwrap();
    assert!(matches!(s_closed(1, SymParity::Even, &eps), Err(osctime::Error::NotExact(_))));
}

#[test]
fn polynomial_extension_is_linear() {
    let eps: EpsParam = "1/4".parse().unwrap();
    let one = ExactScalar::one();
    assert_eq!(
        s_closed_poly(std::slice::from_ref(&one), SymParity::Even, &eps).unwrap(),
        s_closed(0, SymParity::Even, &eps).unwrap()
    );
    let sum =
        s_closed(1, SymParity::Even, &eps).unwrap().try_add(&s_closed(0, SymParity::Even, &eps).unwrap()).unwrap();
    assert_eq!(s_closed_poly(&[one.clone(), one], SymParity::Even, &eps).unwrap(), sum);
}

/// `S_ε` on `exp(βx²/(2√ε))ξ_{αi,ε}`, truncated, against the shifted Gaussian.
fn shift_error(alpha: f64, beta: (i64, i64), order: u32) -> f64 {
    let eps = EpsParam::one();
    let v = gaussian_shift(&q(beta.0, beta.1), &eps, order).unwrap();
    let lhs = v.to_gauss(Complex64::new(alpha, 0.0), &opts()).unwrap();
    let d = alpha - beta.0 as f64 / beta.1 as f64;
    let c = Complex64::new(0.0, -0.5) * ((1.0 + d) / (1.0 - d)).ln();
    let rhs = GaussVector::monomial(c, 0, Complex64::new(0.0, d)).unwrap();
    let xs: Vec<f64> = (0..=240).map(|k| -6.0 + k as f64 * 0.05).collect();
    let peak = xs.iter().map(|&x| rhs.eval_at(x).norm()).fold(0.0, f64::max);
    xs.iter().map(|&x| (lhs.eval_at(x) - rhs.eval_at(x)).norm()).fold(0.0, f64::max) / peak
}

#[test]
fn gaussian_shift_example() {
    // At order 6 the error is the Taylor tail of Λ about α, of size
    // Σ_{k>6} (β/(1−α))^k/k ≈ 1.3e-3 for α = 1/2, β = 1/4.
    let e6 = shift_error(0.5, (1, 4), 6);
    assert!(e6 < 2e-3, "{e6:e}");
    let e16 = shift_error(0.5, (1, 4), 16);
    assert!(e16 < 1e-6, "{e16:e}");
    assert!(e16 < e6 / 100.0);
}

#[test]
fn hat_matches_real_engine_on_imaginary_axis() {
    let eps = EpsParam::one();
    for m in 0..=6 {
        for parity in [SymParity::Even, SymParity::Odd] {
            let hat = s_hat_closed(m, parity).to_real_engine().unwrap();
            assert_eq!(hat, s_closed(m, parity, &eps).unwrap(), "m={m}");
        }
    }
    let hat = s_hat_closed(0, SymParity::Even).eval(Complex64::new(0.0, 0.5), &opts()).unwrap();
    let real = s_closed(0, SymParity::Even, &eps).unwrap().eval(Complex64::new(0.5, 0.0), &opts()).unwrap();
    assert!((hat[&0] - real[&0]).norm() < 1e-15);
}

/// Random ring elements with Gaussian-integer coefficients over the
/// denominators that occur in the complex engine: 1, z and 1+z².
fn random_logext(rng: &mut ChaCha8Rng) -> LogExt {
    let mut poly = |deg: usize| {
        Poly::new(
            (0..=deg)
                .map(|_| ExactScalar::complex_ratio((rng.gen_range(-3..=3), 1), (rng.gen_range(-3..=3), 1)))
                .collect(),
        )
    };
    let num = poly(2);
    let r1 = RatFunc::poly(poly(1));
    let den = match rng.gen_range(0..3) {
        0 => Poly::one(),
        1 => Poly::from_ints(&[0, 1]),
        _ => Poly::from_ints(&[1, 0, 1]),
    };
    LogExt::new(Engine::ComplexZ, RatFunc::new(num, den).unwrap(), r1)
}

#[test]
fn qn_equals_factored_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let f = random_logext(&mut rng);
        for n in 0..=6 {
            assert_eq!(qn_apply(n, &f).unwrap(), qn_identity_rhs(n, &f).unwrap(), "n={n} f={f}");
        }
    }
}

#[test]
fn qn_of_inverse_quadratic_is_power_of_x() {
    // Q_n (1/(1+z²)) = t_zⁿ 1 = x^{2n}
    let inv = LogExt::rational(Engine::ComplexZ, RatFunc::new(Poly::one(), Poly::from_ints(&[1, 0, 1])).unwrap());
    for n in 0..=5 {
        let v = qn_apply(n, &inv).unwrap();
        let expect = XPolyLog::monomial_like(
            &XPolyLog::zero_complex(),
            2 * n,
            LogExt::constant(Engine::ComplexZ, ExactScalar::one()),
        )
        .unwrap();
        assert_eq!(v, expect);
    }
}

#[test]
fn k1_k2_reconstruct_assembled_products() {
    for n in 0..=4 {
        for parity in [SymParity::Even, SymParity::Odd] {
            let h_s = s_hat_closed(n, parity).apply_h().unwrap();
            assert_eq!(k1_expression(n, parity).unwrap(), h_s, "K1 n={n} {parity:?}");
            assert_eq!(k2_expression(n, parity).unwrap(), s_hat_apply_h(n, parity).unwrap(), "K2 n={n} {parity:?}");
            let assembled = h_s.try_sub(&s_hat_apply_h(n, parity).unwrap()).unwrap();
            assert_eq!(commutator_symbolic(n, parity).unwrap(), assembled);
        }
    }
}

#[test]
fn commutator_numeric_spot_check() {
    let z = Complex64::new(0.2, 0.6);
    for (n, parity, power) in [(0, SymParity::Even, 0), (3, SymParity::Even, 6), (2, SymParity::Odd, 5)] {
        let h_s = s_hat_closed(n, parity).apply_h().unwrap().eval(z, &opts()).unwrap();
        let s_h = s_hat_apply_h(n, parity).unwrap().eval(z, &opts()).unwrap();
        for (k, v) in &h_s {
            let d = v - s_h.get(k).copied().unwrap_or_default();
            let expect = if *k == power { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 0.0) };
            assert!((d - expect).norm() < 1e-9 * v.norm().max(1.0), "n={n} k={k} d={d}");
        }
    }
}

#[test]
fn pretty_printer_and_json() {
    let v = s_closed(1, SymParity::Even, &"1/4".parse().unwrap()).unwrap();
    let txt = v.to_string();
    assert!(txt.contains("x^2"));
    assert_eq!(txt, v.clone().to_string());
    let js = serde_json::to_string(&v).unwrap();
    let back: XPolyLog = serde_json::from_str(&js).unwrap();
    assert_eq!(back, v);
}
