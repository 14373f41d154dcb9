use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, rat_to_f64, ExactScalar};

/// The oscillator parameter `ε ∈ (0, 1]`, held exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsParam(BigRational);

impl EpsParam {
    pub fn new(eps: BigRational) -> Result<Self> {
        if !eps.is_positive() || eps > BigRational::one() {
            return Err(Error::InvalidArgument(format!("ε = {eps} is outside (0, 1]")));
        }
        Ok(EpsParam(eps))
    }

    pub fn one() -> Self {
        EpsParam(BigRational::one())
    }

    /// `ε = 2^-k`.
    pub fn pow2(k: u32) -> Self {
        EpsParam(BigRational::new(1.into(), num_bigint::BigInt::from(1) << k))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.0)
    }

    /// `√ε` when it is rational.
    pub fn sqrt_exact(&self) -> Option<BigRational> {
        ExactScalar::sqrt_rational(&self.0)
    }

    /// `ε^{1/4}` when it is rational.
    pub fn fourth_root_exact(&self) -> Option<BigRational> {
        self.sqrt_exact().and_then(|s| ExactScalar::sqrt_rational(&s))
    }

    pub fn sqrt_f64(&self) -> f64 {
        match self.sqrt_exact() {
            Some(s) => rat_to_f64(&s),
            None => self.to_f64().sqrt(),
        }
    }

    pub(crate) fn require_sqrt(&self) -> Result<BigRational> {
        self.sqrt_exact().ok_or_else(|| Error::NotExact(format!("√ε is irrational for ε = {}; use float mode", self.0)))
    }

    /// The width `z = iα/√ε` of `ξ_{αi,ε}`.
    pub fn xi_width(&self, alpha: &BigRational) -> Result<ExactScalar> {
        if !alpha.is_positive() {
            return Err(Error::InvalidArgument(format!("α = {alpha} must be positive")));
        }
        let s = self.require_sqrt()?;
        Ok(ExactScalar::imag(alpha / s))
    }

    pub fn xi_width_f64(&self, alpha: f64) -> num_complex::Complex64 {
        num_complex::Complex64::new(0.0, alpha / self.sqrt_f64())
    }
}

impl FromStr for EpsParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        // `2^-k` is accepted for the continuum grid.
        if let Some(k) = s.strip_prefix("2^-") {
            let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad exponent in {s}")))?;
            return Ok(EpsParam::pow2(k));
        }
        let v = parse_rational(s)?;
        if v.is_zero() {
            return Err(Error::InvalidArgument("ε must be positive".into()));
        }
        EpsParam::new(v)
    }
}

impl fmt::Display for EpsParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
