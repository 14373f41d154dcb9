use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;

use super::{ParamOperator, XPolyLog};
use crate::error::{Error, Result};
use crate::gauss::EpsParam;
use crate::scalar::{binomial, factorial, Engine, EvalOptions, ExactScalar, LogExt, Poly, RatFunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SymParity {
    Even,
    Odd,
}

impl SymParity {
    fn shift(self) -> u32 {
        match self {
            SymParity::Even => 0,
            SymParity::Odd => 1,
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `−i/(2√ε)`.
fn real_prefactor(eps: &EpsParam) -> Result<ExactScalar> {
    let r = eps.require_sqrt()?;
    Ok(ExactScalar::imag(-(rat(1, 2) / r)))
}

fn hat_prefactor() -> ExactScalar {
    ExactScalar::complex_ratio((0, 1), (1, 2))
}

fn lambda_real(eps: &EpsParam) -> XPolyLog {
    let mut v = XPolyLog::zero_real(eps);
    v.coeffs.insert(0, LogExt::lambda(Engine::RealAlpha));
    v
}

fn lambda_complex() -> XPolyLog {
    let mut v = XPolyLog::zero_complex();
    v.coeffs.insert(0, LogExt::lambda(Engine::ComplexZ));
    v
}

/// `Φ` with `S_ε(x^{2m}ξ_{αi,ε}) = Φ·ξ_{αi,ε}` (even), or with
/// `S_ε*(x^{2m+1}ξ_{αi,ε}) = Φ·ξ_{αi,ε}` (odd; `Φ` then carries the factor `x`).
///
/// `Φ = −(i/(2√ε))·t_{αi,ε}^m Λ`, times `x` in the odd case.
pub fn s_closed(m: u32, parity: SymParity, eps: &EpsParam) -> Result<XPolyLog> {
    let op = ParamOperator::real(eps)?;
    let v = op.apply_n(m, &lambda_real(eps))?;
    Ok(v.scale(&real_prefactor(eps)?).shift_power(parity.shift()))
}

/// `−(i/(2√ε)) Σ_k C(m,k)(−2√ε)^k Λ^{(k)} x^{2m−2k}`, the expanded form of [`s_closed`].
pub fn key_binomial_sum(m: u32, eps: &EpsParam) -> Result<XPolyLog> {
    let r = eps.require_sqrt()?;
    let c = ExactScalar::real(-r * rat(2, 1));
    let mut out = XPolyLog::zero_real(eps);
    let mut d = LogExt::lambda(Engine::RealAlpha);
    let mut ck = ExactScalar::one();
    for k in 0..=m {
        let w = &ExactScalar::from_bigint(binomial(m as u64, k as u64)) * &ck;
        out.add_coeff(2 * (m - k), d.scale(&w))?;
        d = d.derivative();
        ck = &ck * &c;
    }
    Ok(out.scale(&real_prefactor(eps)?))
}

/// Double-precision coefficients of [`s_closed`] at `α`, for any `ε` including
/// those with irrational `√ε`.
pub fn s_closed_f64(
    m: u32,
    parity: SymParity,
    eps: &EpsParam,
    alpha: f64,
    opts: &EvalOptions,
) -> Result<BTreeMap<u32, Complex64>> {
    let r = eps.sqrt_f64();
    let pre = Complex64::new(0.0, -0.5 / r);
    let mut out = BTreeMap::new();
    let mut d = LogExt::lambda(Engine::RealAlpha);
    for k in 0..=m {
        let comb = crate::scalar::rat_to_f64(&BigRational::from_integer(binomial(m as u64, k as u64)));
        let v = d.eval(Complex64::new(alpha, 0.0), opts)? * comb * (-2.0 * r).powi(k as i32) * pre;
        out.insert(2 * (m - k) + parity.shift(), v);
        d = d.derivative();
    }
    Ok(out)
}

/// Linear extension of [`s_closed`] to `ρ(x²) = Σ ρ_k x^{2k}`.
pub fn s_closed_poly(rho: &[ExactScalar], parity: SymParity, eps: &EpsParam) -> Result<XPolyLog> {
    let op = ParamOperator::real(eps)?;
    let mut power = lambda_real(eps);
    let mut out = XPolyLog::zero_real(eps);
    for (k, c) in rho.iter().enumerate() {
        if k > 0 {
            power = op.apply(&power)?;
        }
        if !c.is_zero() {
            out = out.try_add(&power.scale(c))?;
        }
    }
    Ok(out.scale(&real_prefactor(eps)?).shift_power(parity.shift()))
}

/// `S_ε` applied to `ρ(x²)ξ_{αi,ε}` with `ρ` the exponential `exp(βx²/(2√ε))`
/// truncated after `order`. The full series gives the Gaussian with `α`
/// shifted to `α − β`.
pub fn gaussian_shift(beta: &BigRational, eps: &EpsParam, order: u32) -> Result<XPolyLog> {
    let r = eps.require_sqrt()?;
    let b = beta / (r * rat(2, 1));
    let rho: Vec<ExactScalar> = (0..=order)
        .map(|k| ExactScalar::real(b.pow(k as i32) / BigRational::from_integer(factorial(k as u64))))
        .collect();
    s_closed_poly(&rho, SymParity::Even, eps)
}

/// `Φ` with `Ŝ^#(x^{2m(+1)}ξ_z) = Φ·ξ_z`: `(i/2)·t_z^m Λ_c`, times `x` when odd.
pub fn s_hat_closed(m: u32, parity: SymParity) -> XPolyLog {
    let v = ParamOperator::complex().apply_n(m, &lambda_complex()).expect("engines agree");
    v.scale(&hat_prefactor()).shift_power(parity.shift())
}

pub fn s_hat_closed_poly(rho: &[ExactScalar], parity: SymParity) -> XPolyLog {
    let op = ParamOperator::complex();
    let mut power = lambda_complex();
    let mut out = XPolyLog::zero_complex();
    for (k, c) in rho.iter().enumerate() {
        if k > 0 {
            power = op.apply(&power).expect("engines agree");
        }
        if !c.is_zero() {
            out = out.try_add(&power.scale(c)).expect("engines agree");
        }
    }
    out.scale(&hat_prefactor()).shift_power(parity.shift())
}

/// `Ŝ^#` applied to `Σ_j c_j(z)x^j ξ_z` with rational coefficients of one parity.
fn s_hat_on_rational(v: &XPolyLog, parity: SymParity) -> Result<XPolyLog> {
    let mut out = XPolyLog::zero_complex();
    for (&j, c) in v.coeffs() {
        if !c.r1().is_zero() {
            return Err(Error::InvalidArgument("Ŝ acts on rational coefficients only".into()));
        }
        if j % 2 != parity.shift() {
            return Err(Error::Domain(format!("power {j} has the wrong parity for Ŝ^#")));
        }
        let m = (j - parity.shift()) / 2;
        out = out.try_add(&s_hat_closed(m, parity).mul_rat(c.r0()))?;
    }
    Ok(out)
}

/// `Ŝ^# h x^{2n(+1)} ξ_z`, assembled from `apply_h` and [`s_hat_closed`].
pub fn s_hat_apply_h(n: u32, parity: SymParity) -> Result<XPolyLog> {
    let mono = XPolyLog::monomial_like(
        &XPolyLog::zero_complex(),
        2 * n + parity.shift(),
        LogExt::constant(Engine::ComplexZ, ExactScalar::one()),
    )?;
    s_hat_on_rational(&mono.apply_h()?, parity)
}

fn t_pow_lambda(k: i64) -> XPolyLog {
    if k < 0 {
        return XPolyLog::zero_complex();
    }
    ParamOperator::complex().apply_n(k as u32, &lambda_complex()).expect("engines agree")
}

fn zpoly(c: &[(i64, i64)]) -> RatFunc {
    RatFunc::poly(Poly::new(c.iter().map(|&(re, im)| ExactScalar::complex_ratio((re, 1), (im, 1))).collect()))
}

/// Closed form of `h Ŝ^# x^{2n(+1)} ξ_z`:
/// even `(i/4){(1+z²)x²tⁿ − iz tⁿ − 2n(1+2izx²)tⁿ⁻¹ − 4n(n−1)x²tⁿ⁻²}Λ_c`,
/// odd `(i/4)x{(1+z²)x²tⁿ − 3iz tⁿ − 2n(3+2izx²)tⁿ⁻¹ − 4n(n−1)x²tⁿ⁻²}Λ_c`.
pub fn k1_expression(n: u32, parity: SymParity) -> Result<XPolyLog> {
    let n = n as i64;
    let odd = parity == SymParity::Odd;
    let tn = t_pow_lambda(n);
    let tn1 = t_pow_lambda(n - 1);
    let tn2 = t_pow_lambda(n - 2);
    let mut acc = tn.shift_power(2).mul_rat(&zpoly(&[(1, 0), (0, 0), (1, 0)]));
    acc = acc.try_add(&tn.mul_rat(&zpoly(&[(0, 0), (0, if odd { -3 } else { -1 })])))?;
    let c0 = if odd { 3 } else { 1 };
    acc = acc.try_sub(&tn1.scale(&ExactScalar::from_int(2 * n * c0)))?;
    acc = acc.try_sub(&tn1.shift_power(2).mul_rat(&zpoly(&[(0, 0), (0, 4 * n)])))?;
    acc = acc.try_sub(&tn2.shift_power(2).scale(&ExactScalar::from_int(4 * n * (n - 1))))?;
    Ok(acc.scale(&ExactScalar::complex_ratio((0, 1), (1, 4))).shift_power(parity.shift()))
}

/// Closed form of `Ŝ^# h x^{2n(+1)} ξ_z`:
/// even `(i/4){(1+z²)tⁿ⁺¹ − i(4n+1)z tⁿ − 2n(2n−1)tⁿ⁻¹}Λ_c`,
/// odd `(i/4)x{(1+z²)tⁿ⁺¹ − i(4n+3)z tⁿ − 2n(2n+1)tⁿ⁻¹}Λ_c`.
pub fn k2_expression(n: u32, parity: SymParity) -> Result<XPolyLog> {
    let n = n as i64;
    let p = parity.shift() as i64;
    let mut acc = t_pow_lambda(n + 1).mul_rat(&zpoly(&[(1, 0), (0, 0), (1, 0)]));
    acc = acc.try_add(&t_pow_lambda(n).mul_rat(&zpoly(&[(0, 0), (0, -(4 * n + 1 + 2 * p))])))?;
    acc = acc.try_sub(&t_pow_lambda(n - 1).scale(&ExactScalar::from_int(2 * n * (2 * n - 1 + 2 * p))))?;
    Ok(acc.scale(&ExactScalar::complex_ratio((0, 1), (1, 4))).shift_power(parity.shift()))
}

/// `[h, Ŝ^#] x^{2n(+1)} ξ_z` from the two closed forms; canonicalizes to
/// `−i·x^{2n(+1)}`.
pub fn commutator_symbolic(n: u32, parity: SymParity) -> Result<XPolyLog> {
    k1_expression(n, parity)?.try_sub(&k2_expression(n, parity)?)
}

/// `Q_n e = (1+z²)t_zⁿe − 4inz t_zⁿ⁻¹e − 4n(n−1)t_zⁿ⁻²e` on a complex-engine value.
pub fn qn_apply(n: u32, e: &LogExt) -> Result<XPolyLog> {
    if e.engine() != Engine::ComplexZ {
        return Err(Error::EngineMismatch("Q_n acts on the complex engine".into()));
    }
    let t = ParamOperator::complex();
    let v = XPolyLog::monomial_like(&XPolyLog::zero_complex(), 0, e.clone())?;
    let n64 = n as i64;
    let mut acc = t.apply_n(n, &v)?.mul_rat(&zpoly(&[(1, 0), (0, 0), (1, 0)]));
    if n >= 1 {
        acc = acc.try_sub(&t.apply_n(n - 1, &v)?.mul_rat(&zpoly(&[(0, 0), (0, 4 * n64)])))?;
    }
    if n >= 2 {
        acc = acc.try_sub(&t.apply_n(n - 2, &v)?.scale(&ExactScalar::from_int(4 * n64 * (n64 - 1))))?;
    }
    Ok(acc)
}

/// `t_zⁿ((1+z²)e)`, the factored form of [`qn_apply`].
pub fn qn_identity_rhs(n: u32, e: &LogExt) -> Result<XPolyLog> {
    let v = XPolyLog::monomial_like(&XPolyLog::zero_complex(), 0, e.mul_rat(&zpoly(&[(1, 0), (0, 0), (1, 0)])))?;
    ParamOperator::complex().apply_n(n, &v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minus_i_x(k: u32) -> XPolyLog {
        XPolyLog::monomial_like(
            &XPolyLog::zero_complex(),
            k,
            LogExt::constant(Engine::ComplexZ, ExactScalar::complex_ratio((0, 1), (-1, 1))),
        )
        .unwrap()
    }

    #[test]
    fn s_closed_m1_matches_known_form() {
        let eps: EpsParam = "1/4".parse().unwrap();
        let v = s_closed(1, SymParity::Even, &eps).unwrap();
        // −(i/(2√ε))Λx² + 2i/(1−α²)
        let l = LogExt::lambda(Engine::RealAlpha);
        assert_eq!(v.coeff(2), l.scale(&ExactScalar::imag(rat(-1, 1))));
        let c0 = v.coeff(0);
        assert!(c0.r1().is_zero());
        let two_i =
            RatFunc::new(Poly::constant(ExactScalar::complex_ratio((0, 1), (2, 1))), Poly::from_ints(&[1, 0, -1]))
                .unwrap();
        assert_eq!(c0.r0(), &two_i);
    }

    #[test]
    fn s_hat_m1_is_item_one() {
        let v = s_hat_closed(1, SymParity::Even);
        let four = RatFunc::new(Poly::constant(ExactScalar::from_int(4)), Poly::from_ints(&[1, 0, 1])).unwrap();
        let half_i = ExactScalar::complex_ratio((0, 1), (1, 2));
        assert_eq!(v.coeff(2), LogExt::lambda(Engine::ComplexZ).scale(&half_i));
        assert_eq!(v.coeff(0), LogExt::rational(Engine::ComplexZ, four.scale(&half_i)));
    }

    #[test]
    fn commutator_is_minus_i() {
        for n in 0..=4 {
            assert_eq!(commutator_symbolic(n, SymParity::Even).unwrap(), minus_i_x(2 * n));
            assert_eq!(commutator_symbolic(n, SymParity::Odd).unwrap(), minus_i_x(2 * n + 1));
        }
    }

    #[test]
    fn qn_base_case() {
        let one = LogExt::constant(Engine::ComplexZ, ExactScalar::one());
        let v = qn_apply(0, &one).unwrap();
        assert_eq!(v.coeff(0).r0(), &zpoly(&[(1, 0), (0, 0), (1, 0)]));
        assert!(qn_apply(1, &LogExt::lambda(Engine::RealAlpha)).is_err());
    }
}
