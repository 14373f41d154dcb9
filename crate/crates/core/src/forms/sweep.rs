use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::angle::{t_ab_exact, t_eps_exact, t_eps_exact_opts, t_eps_f64};
use super::matrix::HatKernel;
use super::{FormId, FormValue};
use crate::error::{Error, Result};
use crate::gauss::{apply_t, arctan_partial_sum, inner_product_exact, EpsParam, GaussVector, Which};
use crate::scalar::{Engine, EvalOptions, ExactScalar};
use crate::symrep::SymParity;
use crate::table::{fmt_f64, Table};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Clone, Debug, Serialize)]
pub struct ContinuumRow {
    pub eps: String,
    pub value: FormValue,
    /// `|𝔱_ε − 𝔱_AB|`.
    pub diff: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuumReport {
    pub rows: Vec<ContinuumRow>,
    pub limit: FormValue,
    /// Log-log slope of `diff` against `ε`, fitted after dropping the largest values of `ε`.
    pub slope: Option<f64>,
    pub fit_residual: Option<f64>,
}

/// How many of the largest `ε` values are left out of the slope fit.
pub const CONTINUUM_FIT_DROP: usize = 2;

/// `𝔱_ε[ψ, φ]` over `eps_list` against the limit `𝔱_AB[ψ, φ]`.
///
/// Entries with rational `√ε` are computed exactly; the others in double precision.
pub fn continuum_sweep(
    psi: &GaussVector<ExactScalar>,
    phi: &GaussVector<ExactScalar>,
    eps_list: &[EpsParam],
) -> Result<ContinuumReport> {
    let limit = t_ab_exact(psi, phi)?;
    let limit_val = limit.eval();
    let (psi_f, phi_f) = (psi.to_c64(), phi.to_c64());
    let rows = eps_list
        .par_iter()
        .map(|eps| {
            if eps.sqrt_exact().is_some() {
                let v = t_eps_exact(psi, phi, eps)?;
                let diff = v.sub(&limit.lift()).eval().norm();
                Ok(ContinuumRow {
                    eps: eps.to_string(),
                    value: FormValue::from_exact(FormId::TEps, &v).with_param("eps", eps),
                    diff,
                })
            } else {
                let v = t_eps_f64(&psi_f, &phi_f, eps)?;
                Ok(ContinuumRow {
                    eps: eps.to_string(),
                    value: FormValue::from_float(FormId::TEps, v).with_param("eps", eps),
                    diff: (v - limit_val).norm(),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut pts: Vec<(f64, f64)> =
        eps_list.iter().zip(&rows).filter(|(_, r)| r.diff > 0.0).map(|(e, r)| (e.to_f64().ln(), r.diff.ln())).collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    if pts.len() >= CONTINUUM_FIT_DROP + 2 {
        pts.drain(..CONTINUUM_FIT_DROP);
    }
    let (slope, fit_residual) = match line_fit(&pts) {
        Some((a, b)) => {
            let rms = (pts.iter().map(|(x, y)| (y - (a * x + b)).powi(2)).sum::<f64>() / pts.len() as f64).sqrt();
            (Some(a), Some(rms))
        }
        None => (None, None),
    };
    Ok(ContinuumReport { rows, limit: FormValue::from_exact(FormId::TAb, &limit), slope, fit_residual })
}

impl ContinuumReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new("continuum", &["eps", "form", "re", "im", "exact", "diff"]);
        for r in &self.rows {
            t.push(vec![
                r.eps.clone(),
                r.value.form.to_string(),
                fmt_f64(r.value.value.re),
                fmt_f64(r.value.value.im),
                r.value.exact.clone().unwrap_or_default(),
                fmt_f64(r.diff),
            ]);
        }
        t.push(vec![
            "0".into(),
            self.limit.form.to_string(),
            fmt_f64(self.limit.value.re),
            fmt_f64(self.limit.value.im),
            self.limit.exact.clone().unwrap_or_default(),
            "0e0".into(),
        ]);
        t
    }
}

/// Least-squares line `y = a x + b`; `None` with fewer than two points.
fn line_fit(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let a = sxy / sxx;
    Some((a, my - a * mx))
}

/// `ψ(x)` by upward recurrence and the asymptotic series.
fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    let series = x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 / 132.0))));
    acc + x.ln() - 0.5 / x - series
}

/// `Σ_{n=0}^{M} 1/(2n+1) = ½ψ(M + 3/2) + γ/2 + ln 2`.
pub fn harmonic_odd(m: u64) -> f64 {
    0.5 * digamma(m as f64 + 1.5) + 0.5 * EULER_GAMMA + std::f64::consts::LN_2
}

/// The same sum added term by term, largest index first.
pub fn harmonic_odd_sum(m: u64) -> f64 {
    (0..=m).rev().map(|n| 1.0 / (2 * n + 1) as f64).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceRow {
    pub terms: u64,
    pub value: f64,
    pub method: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    pub m: u32,
    pub eps: String,
    /// `|⟨e_{2m}, x^{2m}ξ_{i,ε}⟩|`.
    pub base: f64,
    pub rows: Vec<DivergenceRow>,
    /// Fit of the values against `c(½ ln M + d)`.
    pub fit_c: Option<f64>,
    pub fit_d: Option<f64>,
    pub fit_rel_error: Option<f64>,
}

/// Partial sums up to this many terms are run through the operator pipeline;
/// longer ones use the harmonic closed form.
pub const PIPELINE_TERMS: u64 = 64;

/// `|⟨e_{2m}, Σ_{n≤M} (−1)ⁿ/(2n+1)(√ε t)^{2n+1} x^{2m}ξ_{i,ε}⟩|` at the edge `α = 1`.
///
/// On odd vectors the powers of `t` leave the domain after `m + 1` steps and
/// the probe returns that domain error.
pub fn divergence_probe(m: u32, eps: &EpsParam, m_list: &[u64], parity: SymParity) -> Result<DivergenceReport> {
    let width = eps.xi_width_f64(1.0);
    if parity == SymParity::Odd {
        let r = Complex64::new(eps.sqrt_f64(), 0.0);
        let mut v = GaussVector::monomial(Complex64::new(1.0, 0.0), 2 * m + 1, width)?;
        for k in 1..=m + 1 {
            v = apply_t(&v)
                .map_err(|e| {
                    Error::Domain(format!("x^{} ξ_(i,ε) is outside the domain of (√ε t)^{k}: {e}", 2 * m + 1))
                })?
                .scale(&r);
        }
        unreachable!("odd vectors leave the domain of t within m + 1 steps");
    }
    let r = eps.to_f64().powf(0.25);
    let ln_fact: f64 = (1..=2 * m as u64).map(|k| (k as f64).ln()).sum();
    let ln_c_inv = 0.5 * (r.ln() + (2 * m) as f64 * std::f64::consts::LN_2 + ln_fact + 0.5 * std::f64::consts::PI.ln());
    let base = (ln_c_inv + (2 * m) as f64 * (r / 2.0).ln()).exp();

    let start = GaussVector::monomial(Complex64::new(1.0, 0.0), 2 * m, width)?;
    let rows = m_list
        .par_iter()
        .map(|&big_m| {
            if big_m <= PIPELINE_TERMS {
                let s = arctan_partial_sum(&start, eps, big_m as usize, Which::T)?;
                let top = s.sum.terms().iter().find(|t| t.power == 2 * m).map(|t| t.coeff).unwrap_or_default();
                Ok(DivergenceRow { terms: big_m, value: base * top.norm() * eps.sqrt_f64(), method: "pipeline" })
            } else {
                Ok(DivergenceRow { terms: big_m, value: base * harmonic_odd(big_m), method: "closed_form" })
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.terms > 0).map(|r| ((r.terms as f64).ln(), r.value)).collect();
    let (fit_c, fit_d, fit_rel_error) = match line_fit(&pts) {
        Some((a, b)) => {
            let err = pts.iter().map(|(x, y)| ((a * x + b) - y).abs() / y).fold(0.0, f64::max);
            (Some(2.0 * a), Some(b / (2.0 * a)), Some(err))
        }
        None => (None, None, None),
    };
    Ok(DivergenceReport { m, eps: eps.to_string(), base, rows, fit_c, fit_d, fit_rel_error })
}

impl DivergenceReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new("diverge", &["m", "eps", "M", "value", "method"]);
        for r in &self.rows {
            t.push(vec![self.m.to_string(), self.eps.clone(), r.terms.to_string(), fmt_f64(r.value), r.method.into()]);
        }
        t
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Whether `i` lies strictly inside the polygon (even-odd rule).
fn contains_i(poly: &[Complex64]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        if (a.im > 1.0) != (b.im > 1.0) {
            let x = a.re + (1.0 - a.im) * (b.re - a.re) / (b.im - a.im);
            if x > 0.0 {
                inside = !inside;
            }
        }
    }
    inside
}

/// Distance from the segment `[a, b]` to the cut `{αi : α ≥ 1}`.
fn segment_cut_distance(a: Complex64, b: Complex64) -> f64 {
    // Crossing the ray above i.
    if (a.re <= 0.0) != (b.re <= 0.0) && a.re != b.re {
        let t = a.re / (a.re - b.re);
        if a.im + t * (b.im - a.im) >= 1.0 {
            return 0.0;
        }
    }
    let i = Complex64::i();
    let d = b - a;
    let t = if d.norm_sqr() == 0.0 { 0.0 } else { (((i - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0) };
    let to_i = (a + d * t - i).norm();
    Engine::ComplexZ.cut_distance(a).min(Engine::ComplexZ.cut_distance(b)).min(to_i)
}

/// `∮ 𝔱̂[x^aξ_z, x^bξ_z] dz` around a closed polygon by Gauss–Legendre on each edge.
pub fn analyticity_check(a: u32, b: u32, poly: &[Complex64], nodes: usize, opts: &EvalOptions) -> Result<Complex64> {
    if poly.len() < 2 || nodes == 0 {
        return Err(Error::InvalidArgument("a loop needs at least two vertices and one node per edge".into()));
    }
    let n = poly.len();
    for k in 0..n {
        let (p, q) = (poly[k], poly[(k + 1) % n]);
        if p.im <= opts.cut_tube {
            return Err(Error::Domain(format!("vertex {p} is not inside the upper half-plane")));
        }
        if segment_cut_distance(p, q) <= opts.cut_tube {
            return Err(Error::BranchCut(format!("edge {p} → {q} meets the cut {{αi : α ≥ 1}}")));
        }
    }
    if contains_i(poly) {
        return Err(Error::BranchCut("the loop encloses z = i and the start of the cut".into()));
    }
    let kernel = HatKernel::new(a, b)?;
    let (x, w) = gauss_legendre(nodes);
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let (p, q) = (poly[k], poly[(k + 1) % n]);
        let half = (q - p) * 0.5;
        let mid = (q + p) * 0.5;
        let mut edge = Complex64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(&w) {
            edge += kernel.eval(mid + half * *xi, opts)? * *wi;
        }
        total += edge * half;
    }
    Ok(total)
}

/// `(x^{2k} + i x^{2k+2})ξ_{αi,1}`. Real vectors have a vanishing diagonal, so the
/// imaginary admixture is what makes `𝔱[f, f]` visible.
pub fn witness_vector(k: u32, alpha: &num_rational::BigRational) -> Result<GaussVector<ExactScalar>> {
    let z = ExactScalar::imag(alpha.clone());
    let a = GaussVector::monomial(ExactScalar::one(), 2 * k, z.clone())?;
    Ok(a.add(&GaussVector::monomial(ExactScalar::i(), 2 * k + 2, z)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessRow {
    pub j: u32,
    pub alpha: String,
    /// `|𝔱_1[f, f]| / ‖f‖²`.
    pub value: f64,
}

/// Normalized diagonal values along `α = 1 − 2^{−j}`, with the cut tube shrunk
/// below the distance to `α = 1`.
pub fn unboundedness_witness(k: u32, js: &[u32]) -> Result<Vec<WitnessRow>> {
    js.par_iter()
        .map(|&j| {
            let one = num_rational::BigRational::from_integer(1.into());
            let alpha = &one - num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(1) << j);
            let f = witness_vector(k, &alpha)?;
            let opts = EvalOptions { cut_tube: 0.5f64.powi(j as i32 + 4), ..EvalOptions::default() };
            let v = t_eps_exact_opts(&f, &f, &EpsParam::one(), opts)?.eval().norm();
            let n2 = inner_product_exact(&f, &f).eval().re;
            Ok(WitnessRow { j, alpha: alpha.to_string(), value: v / n2 })
        })
        .collect()
}

pub fn witness_table(rows: &[WitnessRow]) -> Table {
    let mut t = Table::new("witness", &["j", "alpha", "value"]);
    for r in rows {
        t.push(vec![r.j.to_string(), r.alpha.clone(), fmt_f64(r.value)]);
    }
    t
}
