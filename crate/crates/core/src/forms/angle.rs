use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{FormId, FormValue};
use crate::error::{Error, Result};
use crate::gauss::{
    apply_t, apply_t_star, inner_product, inner_product_exact, pair_terms, EpsParam, GaussTerm, GaussVector, MomentSum,
    Pairing,
};
use crate::scalar::{Engine, EvalOptions, ExactScalar, LogLinear, Scalar};
use crate::symrep::{s_closed, s_closed_f64, s_hat_closed, SymParity, XPolyLog};

type Image = Vec<(LogLinear, u32, ExactScalar)>;

fn parity_of(power: u32) -> SymParity {
    if power.is_multiple_of(2) {
        SymParity::Even
    } else {
        SymParity::Odd
    }
}

/// Which angle operator is being symmetrized, with a cache of its closed forms
/// keyed by the power of `x`.
pub(crate) struct Angle<'a> {
    eps: Option<&'a EpsParam>,
    cache: BTreeMap<u32, XPolyLog>,
    opts: EvalOptions,
    scale: ExactScalar,
}

impl<'a> Angle<'a> {
    pub(crate) fn real(eps: &'a EpsParam, scale: &BigRational) -> Self {
        Angle {
            eps: Some(eps),
            cache: BTreeMap::new(),
            opts: EvalOptions::default(),
            scale: ExactScalar::real(scale.clone()),
        }
    }

    pub(crate) fn with_opts(mut self, opts: EvalOptions) -> Self {
        self.opts = opts;
        self
    }

    pub(crate) fn hat(scale: &BigRational) -> Self {
        Angle {
            eps: None,
            cache: BTreeMap::new(),
            opts: EvalOptions::default(),
            scale: ExactScalar::real(scale.clone()),
        }
    }

    fn closed(&mut self, power: u32) -> Result<&XPolyLog> {
        if !self.cache.contains_key(&power) {
            let v = match self.eps {
                Some(eps) => s_closed(power / 2, parity_of(power), eps)?,
                None => s_hat_closed(power / 2, parity_of(power)),
            };
            self.cache.insert(power, v);
        }
        Ok(&self.cache[&power])
    }

    /// The engine parameter at which a width is evaluated.
    fn point(&self, width: &ExactScalar) -> Result<ExactScalar> {
        match self.eps {
            Some(eps) => Ok(ExactScalar::real(real_alpha(width, eps)?)),
            None => {
                check_not_singular(width.to_c64(), self.opts.cut_tube)?;
                Ok(width.clone())
            }
        }
    }

    fn image(&mut self, v: &GaussVector<ExactScalar>) -> Result<Image> {
        let mut out = Vec::new();
        for t in v.terms() {
            let point = self.point(&t.width)?;
            let opts = self.opts;
            let k = &t.coeff * &self.scale;
            let coeffs = self.closed(t.power)?.eval_linear(&point, &opts)?;
            for (p, c) in coeffs {
                out.push((c.scale(&k), p, t.width.clone()));
            }
        }
        Ok(out)
    }

    /// `½((ψ, S#φ) + (S#ψ, φ))`.
    pub(crate) fn symmetrized(
        &mut self,
        psi: &GaussVector<ExactScalar>,
        phi: &GaussVector<ExactScalar>,
    ) -> Result<MomentSum<LogLinear>> {
        let s_phi = self.image(phi)?;
        let s_psi = self.image(psi)?;
        let mut out = pair_image(psi, &s_phi);
        out.add_assign(&pair_image(phi, &s_psi).conj());
        Ok(out.scale(&ExactScalar::ratio(1, 2)))
    }
}

fn pair_image(left: &GaussVector<ExactScalar>, right: &Image) -> MomentSum<LogLinear> {
    pair_terms(
        left.terms().iter().map(|t| (&t.coeff, t.power, &t.width)),
        right.iter().map(|(c, p, z)| (c, *p, z)),
        Pairing::Sesquilinear,
    )
}

/// `α = √ε·Im z` for a purely imaginary width, required to lie in `(0, 1)`.
fn real_alpha(width: &ExactScalar, eps: &EpsParam) -> Result<BigRational> {
    if !width.re().is_zero() {
        return Err(Error::Domain(format!("width {width} is not on the imaginary axis; t_eps needs ξ_{{αi,ε}}")));
    }
    let a = width.im() * eps.require_sqrt()?;
    if a >= BigRational::one() {
        return Err(Error::Domain(format!(
            "scaled width α = {a} is at or beyond the boundary α = 1, where the arctan series diverges"
        )));
    }
    Ok(a)
}

fn real_alpha_f64(width: Complex64, eps: &EpsParam) -> Result<f64> {
    if width.re != 0.0 {
        return Err(Error::Domain(format!("width {width} is not on the imaginary axis; t_eps needs ξ_{{αi,ε}}")));
    }
    let a = width.im * eps.sqrt_f64();
    if a >= 1.0 {
        return Err(Error::Domain(format!(
            "scaled width α = {a} is at or beyond the boundary α = 1, where the arctan series diverges"
        )));
    }
    Ok(a)
}

pub(crate) fn check_not_singular(z: Complex64, tube: f64) -> Result<()> {
    if (z - Complex64::i()).norm() <= tube {
        return Err(Error::SingularPoint(format!("z = {z}: matrix elements diverge at z = i")));
    }
    if z.im <= 0.0 {
        return Err(Error::Domain(format!("z = {z} is not in the upper half-plane")));
    }
    if Engine::ComplexZ.cut_distance(z) <= tube {
        return Err(Error::BranchCut(format!("z = {z} lies within {tube:e} of the cut {{αi : α ≥ 1}}")));
    }
    Ok(())
}

/// Exact `𝔱_ε[ψ, φ]`; needs rational `√ε` and rational scaled widths.
pub fn t_eps_exact(
    psi: &GaussVector<ExactScalar>,
    phi: &GaussVector<ExactScalar>,
    eps: &EpsParam,
) -> Result<MomentSum<LogLinear>> {
    Angle::real(eps, &BigRational::one()).symmetrized(psi, phi)
}

/// [`t_eps_exact`] with an explicit cut-exclusion tube, for widths close to `α = 1`.
pub fn t_eps_exact_opts(
    psi: &GaussVector<ExactScalar>,
    phi: &GaussVector<ExactScalar>,
    eps: &EpsParam,
    opts: EvalOptions,
) -> Result<MomentSum<LogLinear>> {
    Angle::real(eps, &BigRational::one()).with_opts(opts).symmetrized(psi, phi)
}

fn s_image_f64(v: &GaussVector<Complex64>, eps: &EpsParam, scale: f64) -> Result<GaussVector<Complex64>> {
    let opts = EvalOptions::default();
    let mut terms = Vec::new();
    for t in v.terms() {
        let a = real_alpha_f64(t.width, eps)?;
        for (p, c) in s_closed_f64(t.power / 2, parity_of(t.power), eps, a, &opts)? {
            terms.push(GaussTerm::new(c * t.coeff * scale, p, t.width)?);
        }
    }
    GaussVector::from_terms(terms)
}

pub(crate) fn t_eps_f64_scaled(
    psi: &GaussVector<Complex64>,
    phi: &GaussVector<Complex64>,
    eps: &EpsParam,
    scale: f64,
) -> Result<Complex64> {
    let a = inner_product(psi, &s_image_f64(phi, eps, scale)?);
    let b = inner_product(&s_image_f64(psi, eps, scale)?, phi);
    Ok((a + b) * 0.5)
}

/// `𝔱_ε[ψ, φ]` in double precision, for any `ε`.
pub fn t_eps_f64(psi: &GaussVector<Complex64>, phi: &GaussVector<Complex64>, eps: &EpsParam) -> Result<Complex64> {
    t_eps_f64_scaled(psi, phi, eps, 1.0)
}

/// `𝔱_ε[ψ, φ]`, exact when `√ε` is rational and in double precision otherwise.
pub fn t_eps_form(psi: &GaussVector<ExactScalar>, phi: &GaussVector<ExactScalar>, eps: &EpsParam) -> Result<FormValue> {
    let v = if eps.sqrt_exact().is_some() {
        FormValue::from_exact(FormId::TEps, &t_eps_exact(psi, phi, eps)?)
    } else {
        FormValue::from_float(FormId::TEps, t_eps_f64(&psi.to_c64(), &phi.to_c64(), eps)?)
    };
    Ok(v.with_param("eps", eps))
}

/// Exact `𝔱̂[ψ, φ]`, the sesquilinear form of the complex-width angle operator.
pub fn t_hat_sesq_exact(
    psi: &GaussVector<ExactScalar>,
    phi: &GaussVector<ExactScalar>,
) -> Result<MomentSum<LogLinear>> {
    Angle::hat(&BigRational::one()).symmetrized(psi, phi)
}

/// `t` on the even part and `t*` on the odd part.
fn t_sharp<S: Scalar>(v: &GaussVector<S>) -> Result<GaussVector<S>> {
    let (e, o) = v.split_parity();
    Ok(apply_t(&e)?.add(&apply_t_star(&o)?))
}

pub(crate) fn t_ab_exact_scaled(
    psi: &GaussVector<ExactScalar>,
    phi: &GaussVector<ExactScalar>,
    scale: &BigRational,
) -> Result<MomentSum<ExactScalar>> {
    let mut out = inner_product_exact(psi, &t_sharp(phi)?);
    out.add_assign(&inner_product_exact(&t_sharp(psi)?, phi));
    Ok(out.scale(&ExactScalar::real(-scale / BigRational::from_integer(2.into()))))
}

/// Exact `𝔱_AB[ψ, φ] = −½((ψ, t#φ) + (t#ψ, φ))`.
pub fn t_ab_exact(psi: &GaussVector<ExactScalar>, phi: &GaussVector<ExactScalar>) -> Result<MomentSum<ExactScalar>> {
    t_ab_exact_scaled(psi, phi, &BigRational::one())
}

pub fn t_ab_f64(psi: &GaussVector<Complex64>, phi: &GaussVector<Complex64>) -> Result<Complex64> {
    let a = inner_product(psi, &t_sharp(phi)?);
    let b = inner_product(&t_sharp(psi)?, phi);
    Ok((a + b) * -0.5)
}

pub fn t_ab_form(psi: &GaussVector<ExactScalar>, phi: &GaussVector<ExactScalar>) -> Result<FormValue> {
    Ok(FormValue::from_exact(FormId::TAb, &t_ab_exact(psi, phi)?))
}
