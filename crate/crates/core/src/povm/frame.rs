use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gauss::{apply_h, inner_product_exact, EpsParam, GaussTerm, GaussVector};
use crate::scalar::{factorial, hermite_explicit, hermite_rodrigues, hermite_table, rat_to_f64, ExactScalar};

/// The oscillator eigenvectors `e_n = c_n Ĥ_n`, `Ĥ_n = H_n(x/r)·ξ_{i,ε}`, `r = ε^{1/4}`.
///
/// The unnormalized `Ĥ_n` are exact; `‖Ĥ_n‖² = norm_sq[n]·√π` with rational `norm_sq`.
#[derive(Clone, Debug)]
pub struct HermiteFrame {
    pub n_max: usize,
    pub eps: EpsParam,
    pub r: BigRational,
    pub vectors: Vec<GaussVector<ExactScalar>>,
    pub norm_sq: Vec<BigRational>,
}

pub fn hermite_frame(n_max: usize, eps: &EpsParam) -> Result<HermiteFrame> {
    let r = eps
        .fourth_root_exact()
        .ok_or_else(|| Error::NotExact(format!("the exact frame needs a rational fourth root of ε = {eps}")))?;
    for n in 0..=n_max {
        if hermite_rodrigues(n) != hermite_explicit(n) {
            return Err(Error::InvalidArgument(format!("Hermite formulas disagree at n = {n}")));
        }
    }
    let width = eps.xi_width(&BigRational::one())?;
    let table = hermite_table(n_max);
    let mut vectors = Vec::with_capacity(n_max + 1);
    let mut norm_sq = Vec::with_capacity(n_max + 1);
    for (n, h) in table.iter().enumerate().take(n_max + 1) {
        let mut terms = Vec::new();
        for (k, c) in h.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = BigRational::from_integer(c.clone()) / num_traits::pow(r.clone(), k);
            terms.push(GaussTerm::new(ExactScalar::real(coeff), k as u32, width.clone())?);
        }
        vectors.push(GaussVector::from_terms(terms)?);
        let two_n = BigRational::from_integer(num_bigint::BigInt::from(1) << n);
        norm_sq.push(&r * two_n * BigRational::from_integer(factorial(n as u64)));
    }
    Ok(HermiteFrame { n_max, eps: eps.clone(), r, vectors, norm_sq })
}

impl HermiteFrame {
    /// `c_n = (norm_sq[n]·√π)^{−1/2}`.
    pub fn c(&self, n: usize) -> f64 {
        (rat_to_f64(&self.norm_sq[n]) * std::f64::consts::PI.sqrt()).sqrt().recip()
    }

    pub fn e_f64(&self, n: usize) -> GaussVector<Complex64> {
        self.vectors[n].to_c64().scale(&Complex64::new(self.c(n), 0.0))
    }

    /// Gram matrix of the normalized frame checked in exact `√π` units:
    /// `(Ĥ_n, Ĥ_m) = δ_{nm} norm_sq[n]·√π`. Returns the first offending pair.
    pub fn check_orthonormal(&self) -> std::result::Result<(), (usize, usize)> {
        for n in 0..=self.n_max {
            for m in n..=self.n_max {
                let g = inner_product_exact(&self.vectors[n], &self.vectors[m]);
                let ok = match g.sqrt_pi_multiple() {
                    Some(c) if n == m => c == ExactScalar::real(self.norm_sq[n].clone()),
                    Some(c) => c.is_zero(),
                    None => g.is_zero() && n != m,
                };
                if !ok {
                    return Err((n, m));
                }
            }
        }
        Ok(())
    }

    /// `h_ε Ĥ_n = √ε(n + ½)Ĥ_n`, exactly.
    pub fn check_eigen(&self, n: usize) -> Result<bool> {
        let root = self.eps.require_sqrt()?;
        let lambda = root * (BigRational::from_integer(n.into()) + BigRational::new(1.into(), 2.into()));
        let v = &self.vectors[n];
        Ok(apply_h(v, &self.eps) == v.scale(&ExactScalar::real(lambda)))
    }

    /// `Σ β_n Ĥ_n`.
    pub fn combine(&self, beta: &[ExactScalar]) -> GaussVector<ExactScalar> {
        beta.iter().zip(&self.vectors).fold(GaussVector::zero(), |acc, (b, v)| acc.add(&v.scale(b)))
    }
}

/// Coefficients `(e_n, f)` for `n ≤ n_max` in the frame at `ε`.
///
/// Uses the closed Gaussian moments `(e_{2j}, ξ_z)` and the ladder
/// `x e_n = √((n+1)/2) e_{n+1} + √(n/2) e_{n−1}` for the powers of `x`.
pub fn hermite_coefficients(f: &GaussVector<Complex64>, n_max: usize, eps: &EpsParam) -> Vec<Complex64> {
    let r = eps.to_f64().powf(0.25);
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for t in f.terms() {
        let z = t.width * (r * r);
        let p = t.power as usize;
        let len = n_max + p + 1;
        let mut a = ground_moments(z, len);
        for _ in 0..p {
            let mut next = vec![Complex64::new(0.0, 0.0); len];
            for n in 0..len {
                let up = if n + 1 < len { a[n + 1] * ((n + 1) as f64 / 2.0).sqrt() } else { Complex64::new(0.0, 0.0) };
                let down = if n > 0 { a[n - 1] * (n as f64 / 2.0).sqrt() } else { Complex64::new(0.0, 0.0) };
                next[n] = up + down;
            }
            a = next;
        }
        let k = t.coeff * r.powf(p as f64 + 0.5);
        for n in 0..=n_max {
            out[n] += k * a[n];
        }
    }
    out
}

/// `(e_n, exp(izx²/2))` at `ε = 1` for `n < len`.
fn ground_moments(z: Complex64, len: usize) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let iz = Complex64::i() * z;
    let a = (one - iz) / 2.0;
    let rho = (one + iz) / (one - iz);
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    let mut cur = std::f64::consts::PI.powf(-0.25) * (std::f64::consts::PI / a).sqrt();
    for n in (0..len).step_by(2) {
        out[n] = cur;
        let j = (n / 2) as f64;
        cur *= rho * ((2.0 * j + 1.0) / (2.0 * j + 2.0)).sqrt();
    }
    out
}
