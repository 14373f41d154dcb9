//! Finite sums of `x^n·exp(izx²/2)` with `Im z > 0`, their Gaussian-moment
//! inner products, and the actions of `t = q⁻¹p`, `t*`, `h_ε` and truncated
//! arctan series on them.

mod eps;
mod io;
mod moments;
mod ops;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Scalar};

pub use eps::EpsParam;
pub use io::{read_text, write_text};
pub use moments::{gaussian_moment, inner_product, inner_product_exact, pair_terms, MomentCoeff, MomentSum, Pairing};
pub use ops::{
    apply_h, apply_t, apply_t_star, arctan_partial_sum, power_t_closed, power_t_closed_f64, ArctanSum, Which,
};

/// One term `coeff·x^power·exp(i·width·x²/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussTerm<S> {
    pub coeff: S,
    pub power: u32,
    pub width: S,
}

impl<S: Scalar> GaussTerm<S> {
    pub fn new(coeff: S, power: u32, width: S) -> Result<Self> {
        if !width.imag_is_positive() {
            return Err(Error::InvalidArgument(format!(
                "Gaussian width {:?} must have positive imaginary part",
                width
            )));
        }
        Ok(GaussTerm { coeff, power, width })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// A vector in normal form: terms sorted by `(width, power)`, equal keys
/// merged, zero coefficients dropped. The zero vector has no terms.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussVector<S> {
    terms: Vec<GaussTerm<S>>,
}

impl<S: Scalar> Default for GaussVector<S> {
    fn default() -> Self {
        GaussVector { terms: Vec::new() }
    }
}

impl<S: Scalar> GaussVector<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Validates every width and brings the terms into normal form.
    pub fn from_terms(terms: Vec<GaussTerm<S>>) -> Result<Self> {
        for t in &terms {
            if !t.width.imag_is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "Gaussian width {:?} must have positive imaginary part",
                    t.width
                )));
            }
        }
        Ok(Self::normalize(terms))
    }

    pub fn monomial(coeff: S, power: u32, width: S) -> Result<Self> {
        Self::from_terms(vec![GaussTerm::new(coeff, power, width)?])
    }

    /// Widths are assumed already validated.
    pub(crate) fn normalize(mut terms: Vec<GaussTerm<S>>) -> Self {
        terms.sort_by(|a, b| key_cmp(a, b));
        let mut out: Vec<GaussTerm<S>> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if key_cmp(last, &t) == Ordering::Equal => {
                    last.coeff = last.coeff.clone() + t.coeff;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        GaussVector { terms: out }
    }

    pub fn terms(&self) -> &[GaussTerm<S>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn parity(&self) -> Parity {
        let even = self.terms.iter().all(|t| t.power % 2 == 0);
        let odd = self.terms.iter().all(|t| t.power % 2 == 1);
        match (even, odd) {
            (true, _) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }

    /// `(even part, odd part)`.
    pub fn split_parity(&self) -> (Self, Self) {
        let (e, o): (Vec<_>, Vec<_>) = self.terms.iter().cloned().partition(|t| t.power % 2 == 0);
        (GaussVector { terms: e }, GaussVector { terms: o })
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Self::normalize(t)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&S::from_int(-1)))
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| GaussTerm { coeff: t.coeff.clone() * k.clone(), power: t.power, width: t.width.clone() })
            .collect();
        Self::normalize(terms)
    }

    /// Multiplication by `x^k`.
    pub fn shift_power(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| GaussTerm { coeff: t.coeff.clone(), power: t.power + k, width: t.width.clone() })
            .collect();
        GaussVector { terms }
    }

    pub fn to_c64(&self) -> GaussVector<num_complex::Complex64> {
        let terms = self
            .terms
            .iter()
            .map(|t| GaussTerm { coeff: t.coeff.to_c64(), power: t.power, width: t.width.to_c64() })
            .collect();
        GaussVector::normalize(terms)
    }

    /// L² norm computed from the moment formula in double precision.
    pub fn norm(&self) -> f64 {
        let v = self.to_c64();
        inner_product(&v, &v).re.max(0.0).sqrt()
    }

    /// Value at a real point, for quadrature cross-checks.
    pub fn eval_at(&self, x: f64) -> num_complex::Complex64 {
        let i = num_complex::Complex64::i();
        self.terms
            .iter()
            .map(|t| t.coeff.to_c64() * x.powi(t.power as i32) * (i * t.width.to_c64() * (x * x / 2.0)).exp())
            .sum()
    }
}

impl GaussVector<ExactScalar> {
    /// `ξ_{αi,ε} = exp(−αx²/(2√ε))`, exact when `√ε` is rational.
    pub fn xi_alpha(alpha: &num_rational::BigRational, eps: &EpsParam) -> Result<Self> {
        Self::monomial(ExactScalar::one(), 0, eps.xi_width(alpha)?)
    }
}

fn key_cmp<S: Scalar>(a: &GaussTerm<S>, b: &GaussTerm<S>) -> Ordering {
    a.width.total_cmp(&b.width).then(a.power.cmp(&b.power))
}

impl<S: Scalar> fmt::Display for GaussVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let (cr, ci) = t.coeff.to_parts();
            let (zr, zi) = t.width.to_parts();
            write!(f, "({cr}+{ci}i)·x^{}·ξ[{zr}+{zi}i]", t.power)?;
        }
        Ok(())
    }
}
