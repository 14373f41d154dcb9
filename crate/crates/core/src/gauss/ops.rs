use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;

use super::{EpsParam, GaussTerm, GaussVector, Parity};
use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, ExactScalar, Scalar};

/// `t = q⁻¹p` with `p = −i d/dx`.
pub fn apply_t<S: Scalar>(f: &GaussVector<S>) -> Result<GaussVector<S>> {
    let mut out = Vec::with_capacity(2 * f.terms().len());
    for t in f.terms() {
        if t.power == 1 {
            return Err(Error::Domain(
                "q⁻¹ cannot absorb the power-0 piece of p(x·ξ); odd vectors are outside the domain of t".into(),
            ));
        }
        out.push(GaussTerm { coeff: t.coeff.clone() * t.width.clone(), power: t.power, width: t.width.clone() });
        if t.power >= 2 {
            let k = -(S::i() * S::from_int(t.power as i64));
            out.push(GaussTerm { coeff: t.coeff.clone() * k, power: t.power - 2, width: t.width.clone() });
        }
    }
    Ok(GaussVector::normalize(out))
}

/// `t* = p∘q⁻¹`, defined on terms of power at least one.
pub fn apply_t_star<S: Scalar>(f: &GaussVector<S>) -> Result<GaussVector<S>> {
    let mut out = Vec::with_capacity(2 * f.terms().len());
    for t in f.terms() {
        if t.power == 0 {
            return Err(Error::Domain("q⁻¹ is undefined on a power-0 term".into()));
        }
        out.push(GaussTerm { coeff: t.coeff.clone() * t.width.clone(), power: t.power, width: t.width.clone() });
        if t.power >= 2 {
            let k = -(S::i() * S::from_int(t.power as i64 - 1));
            out.push(GaussTerm { coeff: t.coeff.clone() * k, power: t.power - 2, width: t.width.clone() });
        }
    }
    Ok(GaussVector::normalize(out))
}

/// `h_ε = ½(εp² + q²)`.
pub fn apply_h<S: Scalar>(f: &GaussVector<S>, eps: &EpsParam) -> GaussVector<S> {
    let e = S::from_rational(eps.value());
    let half = S::from_rational(&BigRational::new(1.into(), 2.into()));
    let mut out = Vec::with_capacity(3 * f.terms().len());
    for t in f.terms() {
        let n = t.power as i64;
        let z = t.width.clone();
        let c = t.coeff.clone() * half.clone();
        // ½((1+εz²)x^{n+2} − iεz(2n+1)x^n − εn(n−1)x^{n−2})ξ_z
        let top = S::one() + e.clone() * z.clone() * z.clone();
        out.push(GaussTerm { coeff: c.clone() * top, power: t.power + 2, width: z.clone() });
        let mid = -(S::i() * e.clone() * z.clone() * S::from_int(2 * n + 1));
        out.push(GaussTerm { coeff: c.clone() * mid, power: t.power, width: z.clone() });
        if t.power >= 2 {
            let low = -(e.clone() * S::from_int(n * (n - 1)));
            out.push(GaussTerm { coeff: c * low, power: t.power - 2, width: z });
        }
    }
    GaussVector::normalize(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    T,
    TStar,
}

impl Which {
    fn apply<S: Scalar>(self, f: &GaussVector<S>) -> Result<GaussVector<S>> {
        match self {
            Which::T => apply_t(f),
            Which::TStar => apply_t_star(f),
        }
    }
}

/// A truncated arctan series together with its convergence record.
#[derive(Clone, Debug)]
pub struct ArctanSum<S> {
    pub sum: GaussVector<S>,
    /// `‖increment_n‖` for `n = 0..=M`.
    pub increment_norms: Vec<f64>,
    pub divergent: bool,
}

/// Number of trailing terms inspected by the divergence test.
pub const DIVERGENCE_WINDOW: usize = 10;

/// `√ε` in the field `S`: exact fields need a rational root.
pub(crate) fn sqrt_eps<S: Scalar>(eps: &EpsParam) -> Result<S> {
    match eps.sqrt_exact() {
        Some(r) => Ok(S::from_rational(&r)),
        None if !S::EXACT => Ok(S::from_f64(eps.sqrt_f64())),
        None => Err(Error::NotExact(format!("√ε is irrational for ε = {eps}; use float mode"))),
    }
}

/// `−(1/√ε) Σ_{n=0}^{M} (−1)ⁿ/(2n+1) (√ε t^#)^{2n+1} f`.
///
/// The run is flagged divergent when the increments fail to shrink
/// geometrically over the last [`DIVERGENCE_WINDOW`] terms, judged by Raabe's
/// ratio `n(1 − ‖inc_n‖/‖inc_{n−1}‖) ≤ 1`. Increments of a harmonic-type tail
/// still tend to zero, so a plain monotonicity test would miss it.
pub fn arctan_partial_sum<S: Scalar>(
    f: &GaussVector<S>,
    eps: &EpsParam,
    m: usize,
    which: Which,
) -> Result<ArctanSum<S>> {
    let wanted = match which {
        Which::T => Parity::Even,
        Which::TStar => Parity::Odd,
    };
    if !f.is_zero() && f.parity() != wanted {
        return Err(Error::Domain(format!("parity violation: {:?} series needs a {:?} vector", which, wanted)));
    }
    let r = sqrt_eps::<S>(eps)?;
    let r_inv = r.inv().expect("ε > 0");
    let step = |v: &GaussVector<S>| -> Result<GaussVector<S>> { Ok(which.apply(v)?.scale(&r)) };

    let mut w = step(f)?;
    let mut sum = GaussVector::zero();
    let mut norms = Vec::with_capacity(m + 1);
    for n in 0..=m {
        if n > 0 {
            w = step(&step(&w)?)?;
        }
        let sign = if n % 2 == 0 { -1 } else { 1 };
        let k = S::from_rational(&BigRational::new(sign.into(), (2 * n as i64 + 1).into())) * r_inv.clone();
        let inc = w.scale(&k);
        norms.push(inc.norm());
        sum = sum.add(&inc);
    }
    let divergent = raabe_divergent(&norms);
    Ok(ArctanSum { sum, increment_norms: norms, divergent })
}

fn raabe_divergent(norms: &[f64]) -> bool {
    if norms.len() <= DIVERGENCE_WINDOW {
        return false;
    }
    let tail = norms.len() - DIVERGENCE_WINDOW;
    (tail..norms.len()).all(|n| {
        let (prev, cur) = (norms[n - 1], norms[n]);
        prev > 0.0 && n as f64 * (1.0 - cur / prev) <= 1.0
    })
}

/// Coefficients of `(√ε t)ⁿ x^{2m} ξ_{αi,ε}` keyed by power of `x`.
pub fn power_t_closed(n: u32, m: u32, alpha: &BigRational, eps: &EpsParam) -> Result<BTreeMap<u32, ExactScalar>> {
    let r = eps.require_sqrt()?;
    let ai = ExactScalar::imag(alpha.clone());
    let mir = ExactScalar::imag(-r);
    let mut out = BTreeMap::new();
    for k in 0..=n.min(m) {
        let comb = binomial(n as u64, k as u64)
            * binomial(m as u64, k as u64)
            * factorial(k as u64)
            * (num_bigint::BigInt::from(1) << k);
        let c = &(&ExactScalar::from_bigint(comb) * &ai.pow(n - k)) * &mir.pow(k);
        if !c.is_zero() {
            out.insert(2 * m - 2 * k, c);
        }
    }
    Ok(out)
}

/// Double-precision version of [`power_t_closed`], for irrational `√ε`.
pub fn power_t_closed_f64(n: u32, m: u32, alpha: f64, eps: &EpsParam) -> BTreeMap<u32, Complex64> {
    let r = eps.sqrt_f64();
    let ai = Complex64::new(0.0, alpha);
    let mir = Complex64::new(0.0, -r);
    let mut out = BTreeMap::new();
    for k in 0..=n.min(m) {
        let comb = crate::scalar::rat_to_f64(&BigRational::from_integer(
            binomial(n as u64, k as u64) * binomial(m as u64, k as u64) * factorial(k as u64),
        )) * 2f64.powi(k as i32);
        out.insert(2 * m - 2 * k, ai.powu(n - k) * mir.powu(k) * comb);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }
    fn e(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    #[test]
    fn t_on_gaussian_is_eigen() {
        let a = q(3, 10);
        let v = GaussVector::xi_alpha(&a, &EpsParam::one()).unwrap();
        assert_eq!(apply_t(&v).unwrap(), v.scale(&ExactScalar::imag(a)));
    }

    #[test]
    fn t_on_odd_is_domain_error() {
        let v = GaussVector::monomial(e(1, 1), 1, ExactScalar::i()).unwrap();
        assert!(matches!(apply_t(&v), Err(Error::Domain(_))));
        let g = GaussVector::monomial(e(1, 1), 0, ExactScalar::i()).unwrap();
        assert!(matches!(apply_t_star(&g), Err(Error::Domain(_))));
    }

    #[test]
    fn t_on_x_squared() {
        let z = ExactScalar::complex_ratio((1, 3), (1, 2));
        let v = GaussVector::monomial(e(1, 1), 2, z.clone()).unwrap();
        let expect = GaussVector::from_terms(vec![
            GaussTerm::new(z.clone(), 2, z.clone()).unwrap(),
            GaussTerm::new(ExactScalar::complex_ratio((0, 1), (-2, 1)), 0, z.clone()).unwrap(),
        ])
        .unwrap();
        assert_eq!(apply_t(&v).unwrap(), expect);
    }

    #[test]
    fn t_star_on_odd() {
        let a = q(2, 5);
        let z = ExactScalar::imag(a.clone());
        let v = GaussVector::monomial(e(1, 1), 1, z.clone()).unwrap();
        assert_eq!(apply_t_star(&v).unwrap(), v.scale(&ExactScalar::imag(a)));
        let v3 = GaussVector::monomial(e(1, 1), 3, z.clone()).unwrap();
        let expect = GaussVector::from_terms(vec![
            GaussTerm::new(z.clone(), 3, z.clone()).unwrap(),
            GaussTerm::new(ExactScalar::complex_ratio((0, 1), (-2, 1)), 1, z.clone()).unwrap(),
        ])
        .unwrap();
        assert_eq!(apply_t_star(&v3).unwrap(), expect);
    }

    #[test]
    fn h_on_ground_state() {
        let v = GaussVector::monomial(e(1, 1), 0, ExactScalar::i()).unwrap();
        assert_eq!(apply_h(&v, &EpsParam::one()), v.scale(&e(1, 2)));
    }

    #[test]
    fn h_on_x_squared_half_width() {
        // ½(εp² + q²) applied to x²e^{−x²/4}, differentiated by hand.
        let z = ExactScalar::complex_ratio((0, 1), (1, 2));
        let v = GaussVector::monomial(e(1, 1), 2, z.clone()).unwrap();
        let expect = GaussVector::from_terms(vec![
            GaussTerm::new(e(3, 8), 4, z.clone()).unwrap(),
            GaussTerm::new(e(5, 4), 2, z.clone()).unwrap(),
            GaussTerm::new(e(-1, 1), 0, z.clone()).unwrap(),
        ])
        .unwrap();
        assert_eq!(apply_h(&v, &EpsParam::one()), expect);
    }

    #[test]
    fn single_term_series_is_minus_t() {
        let eps: EpsParam = "1/4".parse().unwrap();
        let v = GaussVector::xi_alpha(&q(1, 3), &eps).unwrap();
        let s = arctan_partial_sum(&v, &eps, 0, Which::T).unwrap();
        assert_eq!(s.sum, apply_t(&v).unwrap().scale(&e(-1, 1)));
    }

    #[test]
    fn series_parity_checked() {
        let v = GaussVector::monomial(e(1, 1), 1, ExactScalar::i()).unwrap();
        assert!(matches!(arctan_partial_sum(&v, &EpsParam::one(), 3, Which::T), Err(Error::Domain(_))));
    }

    #[test]
    fn closed_power_small_cases() {
        let eps: EpsParam = "1/9".parse().unwrap();
        let a = q(1, 2);
        let t = power_t_closed(1, 0, &a, &eps).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![(0, ExactScalar::imag(a.clone()))]);
        let id = power_t_closed(0, 3, &a, &eps).unwrap();
        assert_eq!(id.into_iter().collect::<Vec<_>>(), vec![(6, ExactScalar::one())]);
        let t21 = power_t_closed(2, 1, &a, &eps).unwrap();
        let ai = ExactScalar::imag(a.clone());
        assert_eq!(t21[&2], &ai * &ai);
        assert_eq!(t21[&0], &(&ai * &ExactScalar::imag(q(-1, 3))) * &e(4, 1));
    }

    #[test]
    fn raabe_flags_harmonic_not_geometric() {
        let harmonic: Vec<f64> = (0..40).map(|n| 1.0 / (2 * n + 1) as f64).collect();
        assert!(raabe_divergent(&harmonic));
        let geometric: Vec<f64> = (0..40).map(|n| 0.81f64.powi(n)).collect();
        assert!(!raabe_divergent(&geometric));
    }
}
