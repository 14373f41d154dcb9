use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::angle::{t_ab_exact_scaled, t_eps_f64_scaled, Angle};
use super::FormId;
use crate::error::{Error, Result};
use crate::gauss::{apply_h, inner_product, inner_product_exact, EpsParam, GaussVector, MomentSum};
use crate::scalar::{rat_to_f64, ExactScalar, LogLinear};
use crate::table::{fmt_c64, fmt_f64, Table};

/// A form together with the Hamiltonian it is a time operator of.
#[derive(Clone, Debug, PartialEq)]
pub enum FormKind {
    /// `𝔱_ε` with `h_ε`.
    TEps(EpsParam),
    /// `𝔱_AB` with `½q²`.
    TAb,
    /// `𝔱̂` with `h = h_1`.
    THat,
}

impl FormKind {
    pub fn id(&self) -> FormId {
        match self {
            FormKind::TEps(_) => FormId::TEps,
            FormKind::TAb => FormId::TAb,
            FormKind::THat => FormId::THat,
        }
    }

    fn hamiltonian(&self, v: &GaussVector<ExactScalar>) -> GaussVector<ExactScalar> {
        match self {
            FormKind::TEps(eps) => apply_h(v, eps),
            FormKind::TAb => v.shift_power(2).scale(&ExactScalar::ratio(1, 2)),
            FormKind::THat => apply_h(v, &EpsParam::one()),
        }
    }

    fn exact_form(
        &self,
        psi: &GaussVector<ExactScalar>,
        phi: &GaussVector<ExactScalar>,
        scale: &BigRational,
    ) -> Result<MomentSum<LogLinear>> {
        match self {
            FormKind::TEps(eps) => Angle::real(eps, scale).symmetrized(psi, phi),
            FormKind::TAb => Ok(t_ab_exact_scaled(psi, phi, scale)?.lift()),
            FormKind::THat => Angle::hat(scale).symmetrized(psi, phi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CcrReport {
    pub form: FormId,
    pub phi: String,
    pub psi: String,
    pub residual: Complex64,
    /// `Some(true)` when the exact pipeline produced an identically zero residual.
    pub exact_zero: Option<bool>,
    pub inner: Complex64,
    pub tolerance: f64,
    pub pass: bool,
}

/// `𝔱[Hφ, ψ] − conj(𝔱[Hψ, φ]) + i⟨φ, ψ⟩`.
pub fn ccr_residual(
    kind: &FormKind,
    phi: &GaussVector<ExactScalar>,
    psi: &GaussVector<ExactScalar>,
    tolerance: f64,
) -> Result<CcrReport> {
    ccr_residual_scaled(kind, phi, psi, tolerance, &BigRational::one())
}

/// [`ccr_residual`] with the angle operator multiplied by `scale`, a hook for
/// checking that the verifier notices a perturbed form.
pub fn ccr_residual_scaled(
    kind: &FormKind,
    phi: &GaussVector<ExactScalar>,
    psi: &GaussVector<ExactScalar>,
    tolerance: f64,
    scale: &BigRational,
) -> Result<CcrReport> {
    let h_phi = kind.hamiltonian(phi);
    let h_psi = kind.hamiltonian(psi);
    let (residual, inner, exact_zero) = match kind {
        FormKind::TEps(eps) if eps.sqrt_exact().is_none() => {
            return ccr_residual_f64(eps, &phi.to_c64(), &psi.to_c64(), tolerance, rat_to_f64(scale));
        }
        _ => {
            let ip = inner_product_exact(phi, psi);
            let mut r = kind.exact_form(&h_phi, psi, scale)?;
            r = r.sub(&kind.exact_form(&h_psi, phi, scale)?.conj());
            r.add_assign(&ip.lift().scale(&ExactScalar::i()));
            (r.eval(), ip.eval(), Some(r.is_zero()))
        }
    };
    let pass = residual.norm() <= tolerance * (1.0 + inner.norm());
    Ok(CcrReport {
        form: kind.id(),
        phi: phi.to_string(),
        psi: psi.to_string(),
        residual,
        exact_zero,
        inner,
        tolerance,
        pass,
    })
}

/// The `𝔱_ε` residual on float vectors, for `ε` without a rational square root.
pub fn ccr_residual_f64(
    eps: &EpsParam,
    phi: &GaussVector<Complex64>,
    psi: &GaussVector<Complex64>,
    tolerance: f64,
    scale: f64,
) -> Result<CcrReport> {
    let (h_phi, h_psi) = (apply_h(phi, eps), apply_h(psi, eps));
    let inner = inner_product(phi, psi);
    let residual = t_eps_f64_scaled(&h_phi, psi, eps, scale)? - t_eps_f64_scaled(&h_psi, phi, eps, scale)?.conj()
        + Complex64::i() * inner;
    Ok(CcrReport {
        form: FormId::TEps,
        phi: phi.to_string(),
        psi: psi.to_string(),
        residual,
        exact_zero: None,
        inner,
        tolerance,
        pass: residual.norm() <= tolerance * (1.0 + inner.norm()),
    })
}

/// The `𝔱_ε` residual on `(x^a ξ_{αi,ε}, x^b ξ_{βi,ε})`, exact when `√ε` is rational.
pub fn ccr_eps_pair(
    eps: &EpsParam,
    (a, b): (u32, u32),
    alpha: &BigRational,
    beta: &BigRational,
    tolerance: f64,
    scale: &BigRational,
) -> Result<CcrReport> {
    if eps.sqrt_exact().is_some() {
        let phi = GaussVector::xi_alpha(alpha, eps)?.shift_power(a);
        let psi = GaussVector::xi_alpha(beta, eps)?.shift_power(b);
        return ccr_residual_scaled(&FormKind::TEps(eps.clone()), &phi, &psi, tolerance, scale);
    }
    for w in [alpha, beta] {
        if !w.is_positive() {
            return Err(Error::InvalidArgument(format!("α = {w} must be positive")));
        }
    }
    let xi =
        |p: u32, w: &BigRational| GaussVector::monomial(Complex64::new(1.0, 0.0), p, eps.xi_width_f64(rat_to_f64(w)));
    ccr_residual_f64(eps, &xi(a, alpha)?, &xi(b, beta)?, tolerance, rat_to_f64(scale))
}

pub fn ccr_table(reports: &[CcrReport]) -> Table {
    let mut t =
        Table::new("ccr", &["form", "phi", "psi", "residual_re", "residual_im", "exact_zero", "tolerance", "pass"]);
    for r in reports {
        let (re, im) = fmt_c64(r.residual);
        t.push(vec![
            r.form.to_string(),
            r.phi.clone(),
            r.psi.clone(),
            re,
            im,
            r.exact_zero.map(|b| b.to_string()).unwrap_or_default(),
            fmt_f64(r.tolerance),
            r.pass.to_string(),
        ]);
    }
    t
}
