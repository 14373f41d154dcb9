use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::angle::check_not_singular;
use super::{FormId, FormValue};
use crate::error::{Error, Result};
use crate::gauss::{gaussian_moment, pair_terms, EpsParam, MomentSum, Pairing};
use crate::scalar::{hermite_table, Engine, EvalOptions, ExactScalar, LogExt, LogLinear};
use crate::symrep::{ParamOperator, XPolyLog};

fn check_unit_interval(name: &str, a: &BigRational) -> Result<()> {
    if !(a > &BigRational::zero() && a < &BigRational::one()) {
        return Err(Error::Domain(format!("{name} = {a} must lie in (0, 1)")));
    }
    Ok(())
}

/// `(n, m, shift)` for the pair `(a, b)`, or `None` across parities.
fn split(a: u32, b: u32) -> Option<(u32, u32, u32)> {
    if a % 2 != b % 2 {
        return None;
    }
    Some((a / 2, b / 2, if a.is_multiple_of(2) { 0 } else { 2 }))
}

/// Exact `K_ab` pairing:
/// `(i/(4√ε))(ξ_α, {x^{2m}t_α^nΛ(α) − x^{2n}t_β^mΛ(β)}ξ_β)` for `a = 2n, b = 2m`,
/// with `x^{2m+2}, x^{2n+2}` for odd `a, b`.
pub fn k_matrix_exact(
    a: u32,
    b: u32,
    alpha: &BigRational,
    beta: &BigRational,
    eps: &EpsParam,
) -> Result<MomentSum<LogLinear>> {
    check_unit_interval("α", alpha)?;
    check_unit_interval("β", beta)?;
    let Some((n, m, shift)) = split(a, b) else {
        return Ok(MomentSum::zero());
    };
    let opts = EvalOptions::default();
    let op = ParamOperator::real(eps)?;
    let lam = XPolyLog::monomial_like(&XPolyLog::zero_real(eps), 0, LogExt::lambda(Engine::RealAlpha))?;
    let za = eps.xi_width(alpha)?;
    let zb = eps.xi_width(beta)?;
    let first =
        op.apply_n(n, &lam)?.shift_power(2 * m + shift).eval_linear(&ExactScalar::real(alpha.clone()), &opts)?;
    let second =
        op.apply_n(m, &lam)?.shift_power(2 * n + shift).eval_linear(&ExactScalar::real(beta.clone()), &opts)?;
    let mut right: Vec<(LogLinear, u32, ExactScalar)> = first.into_iter().map(|(p, c)| (c, p, zb.clone())).collect();
    let minus = ExactScalar::from_int(-1);
    right.extend(second.into_iter().map(|(p, c)| (c.scale(&minus), p, zb.clone())));
    let one = ExactScalar::one();
    let sum = pair_terms([(&one, 0u32, &za)], right.iter().map(|(c, p, z)| (c, *p, z)), Pairing::Sesquilinear);
    let r = eps.require_sqrt()?;
    Ok(sum.scale(&ExactScalar::imag(BigRational::new(1.into(), 4.into()) / r)))
}

pub fn k_matrix_element(a: u32, b: u32, alpha: &BigRational, beta: &BigRational, eps: &EpsParam) -> Result<FormValue> {
    Ok(FormValue::from_exact(FormId::TEps, &k_matrix_exact(a, b, alpha, beta, eps)?)
        .with_param("a", a)
        .with_param("b", b)
        .with_param("alpha", alpha)
        .with_param("beta", beta)
        .with_param("eps", eps))
}

/// `𝔱_ε[H_a ξ_α, H_b ξ_β]` as the Hermite-coefficient expansion of [`k_matrix_exact`].
pub fn l_matrix_exact(
    a: u32,
    b: u32,
    alpha: &BigRational,
    beta: &BigRational,
    eps: &EpsParam,
) -> Result<MomentSum<LogLinear>> {
    check_unit_interval("α", alpha)?;
    check_unit_interval("β", beta)?;
    let table = hermite_table(a.max(b) as usize);
    let mut out = MomentSum::zero();
    if a % 2 != b % 2 {
        return Ok(out);
    }
    for (j, hj) in table[a as usize].iter().enumerate() {
        if hj.is_zero() {
            continue;
        }
        for (k, hk) in table[b as usize].iter().enumerate() {
            if hk.is_zero() {
                continue;
            }
            let w = ExactScalar::from_bigint(hj * hk);
            out.add_assign(&k_matrix_exact(j as u32, k as u32, alpha, beta, eps)?.scale(&w));
        }
    }
    Ok(out)
}

pub fn l_matrix_element(a: u32, b: u32, alpha: &BigRational, beta: &BigRational, eps: &EpsParam) -> Result<FormValue> {
    Ok(FormValue::from_exact(FormId::TEps, &l_matrix_exact(a, b, alpha, beta, eps)?)
        .with_param("a", a)
        .with_param("b", b)
        .with_param("alpha", alpha)
        .with_param("beta", beta)
        .with_param("eps", eps)
        .with_param("basis", "hermite"))
}

/// The symbolic kernel `−(i/4)(x^{2m}t_zⁿ − x^{2n}t_z^m)Λ_c` of the continued
/// matrix element, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct HatKernel {
    a: u32,
    b: u32,
    w: Option<XPolyLog>,
}

impl HatKernel {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        let Some((n, m, shift)) = split(a, b) else {
            return Ok(HatKernel { a, b, w: None });
        };
        let op = ParamOperator::complex();
        let lam = XPolyLog::monomial_like(&XPolyLog::zero_complex(), 0, LogExt::lambda(Engine::ComplexZ))?;
        let first = op.apply_n(n, &lam)?.shift_power(2 * m + shift);
        let second = op.apply_n(m, &lam)?.shift_power(2 * n + shift);
        let w = first.try_sub(&second)?.scale(&ExactScalar::complex_ratio((0, 1), (-1, 4)));
        Ok(HatKernel { a, b, w: Some(w) })
    }

    pub fn kernel(&self) -> Option<&XPolyLog> {
        self.w.as_ref()
    }

    /// `(ξ_z, W ξ_z)` with the bilinear pairing, which keeps the result analytic in `z`.
    pub fn eval(&self, z: Complex64, opts: &EvalOptions) -> Result<Complex64> {
        check_not_singular(z, opts.cut_tube)?;
        let Some(w) = &self.w else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        let s = Complex64::new(0.0, -1.0) * z;
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, c) in w.eval(z, opts)? {
            acc += c * gaussian_moment(p, s);
        }
        Ok(acc)
    }

    pub fn eval_exact(&self, z: &ExactScalar, opts: &EvalOptions) -> Result<MomentSum<LogLinear>> {
        check_not_singular(z.to_c64(), opts.cut_tube)?;
        let Some(w) = &self.w else {
            return Ok(MomentSum::zero());
        };
        let right: Vec<(LogLinear, u32)> = w.eval_linear(z, opts)?.into_iter().map(|(p, c)| (c, p)).collect();
        let one = ExactScalar::one();
        Ok(pair_terms([(&one, 0u32, z)], right.iter().map(|(c, p)| (c, *p, z)), Pairing::Bilinear))
    }

    pub fn indices(&self) -> (u32, u32) {
        (self.a, self.b)
    }
}

/// Exact `𝔱̂[x^aξ_z, x^bξ_z]` at a complex-rational `z`.
pub fn t_hat_exact(a: u32, b: u32, z: &ExactScalar) -> Result<MomentSum<LogLinear>> {
    HatKernel::new(a, b)?.eval_exact(z, &EvalOptions::default())
}

pub fn t_hat_form(a: u32, b: u32, z: Complex64, opts: &EvalOptions) -> Result<FormValue> {
    let v = HatKernel::new(a, b)?.eval(z, opts)?;
    Ok(FormValue::from_float(FormId::THat, v).with_param("a", a).with_param("b", b).with_param("z", z))
}
