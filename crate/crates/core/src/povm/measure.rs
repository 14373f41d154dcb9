use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::frame::{hermite_coefficients, HermiteFrame};
use super::matrix::tg_entry_f64;
use crate::error::{Error, Result};
use crate::forms::{t_eps_exact, FormId, FormValue};
use crate::gauss::{inner_product, inner_product_exact, EpsParam, GaussVector};
use crate::scalar::ExactScalar;
use crate::table::{fmt_f64, Table};

/// `Σ_{n,m ≤ N} conj(a_n) (T_G)_{nm} b_m`. Rows run in parallel; the final sum
/// is sequential so the result does not depend on scheduling.
fn tg_bilinear(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let rows: Vec<Complex64> = (0..a.len())
        .into_par_iter()
        .map(|n| {
            let row: Complex64 = (0..b.len()).map(|m| tg_entry_f64(n, m) * b[m]).sum();
            a[n].conj() * row
        })
        .collect();
    rows.iter().sum()
}

/// `𝔱_G[f, g]` truncated to `e_0..e_N` in the frame at `ε = 1`.
///
/// The `N → 2N` increment is reported as the `increment` parameter.
pub fn tg_form(f: &GaussVector<Complex64>, g: &GaussVector<Complex64>, n: usize) -> Result<FormValue> {
    if n < 1 {
        return Err(Error::InvalidArgument("tg_form needs N ≥ 1".into()));
    }
    let eps = EpsParam::one();
    let a = hermite_coefficients(f, 2 * n, &eps);
    let b = hermite_coefficients(g, 2 * n, &eps);
    let v = tg_bilinear(&a[..=n], &b[..=n]);
    let v2 = tg_bilinear(&a, &b);
    Ok(FormValue::from_float(FormId::TG, v)
        .with_truncation(n as u32)
        .with_param("N", n)
        .with_param("increment", fmt_f64((v2 - v).norm())))
}

/// The `N → 2N` increment recorded by [`tg_form`].
pub fn tg_increment(v: &FormValue) -> Option<f64> {
    v.params.iter().find(|(k, _)| k == "increment").and_then(|(_, s)| s.parse().ok())
}

/// `(f, P_(N)([t1, t2]) f)/‖f‖²` with closed-form time integrals.
pub fn povm_weight(t1: f64, t2: f64, f: &GaussVector<Complex64>, n: usize) -> Result<f64> {
    if !(0.0..=2.0 * PI).contains(&t1) || !(0.0..=2.0 * PI).contains(&t2) {
        return Err(Error::Domain(format!("interval [{t1}, {t2}] is not inside [0, 2π]")));
    }
    if t2 <= t1 {
        return Ok(0.0);
    }
    let norm_sq = inner_product(f, f).re;
    if norm_sq <= 0.0 {
        return Err(Error::InvalidArgument("povm_weight needs f ≠ 0".into()));
    }
    let a = hermite_coefficients(f, n, &EpsParam::one());
    Ok(weight_from_coefficients(t1, t2, &a) / norm_sq)
}

/// `(1/2π) Σ conj(a_n) a_m ∫ e^{−it(n−m)} dt` over `[t1, t2]`.
pub fn weight_from_coefficients(t1: f64, t2: f64, a: &[Complex64]) -> f64 {
    let integral = |k: i64| {
        if k == 0 {
            Complex64::new(t2 - t1, 0.0)
        } else {
            let ik = Complex64::new(0.0, k as f64);
            ((-ik * t1).exp() - (-ik * t2).exp()) / ik
        }
    };
    let rows: Vec<Complex64> = (0..a.len())
        .into_par_iter()
        .map(|n| (0..a.len()).map(|m| a[n].conj() * a[m] * integral(n as i64 - m as i64)).sum::<Complex64>())
        .collect();
    rows.iter().sum::<Complex64>().re / (2.0 * PI)
}

/// Total weight of `[0, 2π]` for `f = Σ β_n Ĥ_n`, as an exact rational.
///
/// The numerator `Σ|β_n|²‖Ĥ_n‖²` comes from the frame's normalization data and
/// the denominator from the exact moment norm of the assembled vector.
pub fn full_circle_weight_exact(frame: &HermiteFrame, beta: &[ExactScalar]) -> Result<BigRational> {
    if beta.len() > frame.n_max + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} coefficients for a frame of order {}",
            beta.len(),
            frame.n_max
        )));
    }
    let num = beta.iter().zip(&frame.norm_sq).fold(BigRational::zero(), |acc, (b, n)| acc + b.norm_sqr() * n);
    let f = frame.combine(beta);
    let den = inner_product_exact(&f, &f)
        .sqrt_pi_multiple()
        .ok_or_else(|| Error::NotExact("‖f‖² is not a rational multiple of √π".into()))?;
    if den.is_zero() {
        return Err(Error::InvalidArgument("f = 0".into()));
    }
    Ok(num / den.re())
}

#[derive(Clone, Debug, Serialize)]
pub struct ContrastRow {
    pub alpha: String,
    /// `|𝔱_1[f_α, g_α]|`.
    pub t_value: f64,
    /// `|𝔱_G[f_α, g_α]|` at truncation `N`.
    pub tg_value: f64,
    pub tg_increment: f64,
    pub t_exceeds_bound: bool,
    pub tg_within_bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContrastReport {
    pub k: u32,
    pub n: usize,
    pub bound: f64,
    pub rows: Vec<ContrastRow>,
}

/// `|𝔱[f_α, g_α]|` against `|𝔱_G[f_α, g_α]|` for the normalized pair
/// `f_α ∝ x^{2k}ξ_{αi,1}`, `g_α ∝ x^{2k+2}ξ_{αi,1}`.
///
/// The diagonal `𝔱[f_α, f_α]` of a real vector is zero, hence the pair.
pub fn contrast_sweep(k: u32, alphas: &[BigRational], n: usize) -> Result<ContrastReport> {
    let bound = 2.0 * PI;
    let rows = alphas
        .par_iter()
        .map(|alpha| {
            if !(alpha > &BigRational::zero() && alpha < &BigRational::one()) {
                return Err(Error::Domain(format!("α = {alpha} must lie in (0, 1)")));
            }
            let f = GaussVector::monomial(ExactScalar::one(), 2 * k, ExactScalar::imag(alpha.clone()))?;
            let g = f.shift_power(2);
            let (nf, ng) = (f.norm(), g.norm());
            let t_value = t_eps_exact(&f, &g, &EpsParam::one())?.eval().norm() / (nf * ng);
            let (fc, gc) = (f.to_c64(), g.to_c64());
            let fc = fc.scale(&Complex64::new(1.0 / nf, 0.0));
            let gc = gc.scale(&Complex64::new(1.0 / ng, 0.0));
            let tg = tg_form(&fc, &gc, n)?;
            let tg_value = tg.value.norm();
            Ok(ContrastRow {
                alpha: alpha.to_string(),
                t_value,
                tg_value,
                tg_increment: tg_increment(&tg).unwrap_or(f64::NAN),
                t_exceeds_bound: t_value > bound,
                tg_within_bound: tg_value <= bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ContrastReport { k, n, bound, rows })
}

impl ContrastReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new("contrast", &["alpha", "t", "t_g", "t_g_increment", "t_exceeds_2pi", "t_g_within_2pi"]);
        for r in &self.rows {
            t.push(vec![
                r.alpha.clone(),
                fmt_f64(r.t_value),
                fmt_f64(r.tg_value),
                fmt_f64(r.tg_increment),
                r.t_exceeds_bound.to_string(),
                r.tg_within_bound.to_string(),
            ]);
        }
        t
    }
}
