//! Closed forms of `S_ε`, `S_ε*` and the complex extension `Ŝ` as
//! differential expressions in the Gaussian parameter. Values are polynomials
//! in `x` whose coefficients are log-extended rational functions of the
//! parameter ([`XPolyLog`]); they multiply `ξ` to give the image vector.

mod closed;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{EpsParam, GaussTerm, GaussVector};
use crate::scalar::{Engine, EvalOptions, ExactScalar, LogExt, LogLinear, Poly, RatFunc};

pub use closed::{
    commutator_symbolic, gaussian_shift, k1_expression, k2_expression, key_binomial_sum, qn_apply, qn_identity_rhs,
    s_closed, s_closed_f64, s_closed_poly, s_hat_apply_h, s_hat_closed, s_hat_closed_poly, SymParity,
};

/// `Σ_k c_k(π)·x^k` with `c_k` in the log-extended ring of one engine.
#[derive(Clone, PartialEq, Eq)]
pub struct XPolyLog {
    engine: Engine,
    /// Present exactly for the real engine.
    eps: Option<EpsParam>,
    coeffs: BTreeMap<u32, LogExt>,
}

impl XPolyLog {
    pub fn zero_real(eps: &EpsParam) -> Self {
        XPolyLog { engine: Engine::RealAlpha, eps: Some(eps.clone()), coeffs: BTreeMap::new() }
    }

    pub fn zero_complex() -> Self {
        XPolyLog { engine: Engine::ComplexZ, eps: None, coeffs: BTreeMap::new() }
    }

    fn empty_like(&self) -> Self {
        XPolyLog { engine: self.engine, eps: self.eps.clone(), coeffs: BTreeMap::new() }
    }

    /// `e·x^power` in the engine (and ε) of `like`.
    pub fn monomial_like(like: &XPolyLog, power: u32, e: LogExt) -> Result<Self> {
        let mut out = like.empty_like();
        out.add_coeff(power, e)?;
        Ok(out)
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn eps(&self) -> Option<&EpsParam> {
        self.eps.as_ref()
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, LogExt> {
        &self.coeffs
    }

    pub fn coeff(&self, power: u32) -> LogExt {
        self.coeffs.get(&power).cloned().unwrap_or_else(|| LogExt::zero(self.engine))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_coeff(&mut self, power: u32, e: LogExt) -> Result<()> {
        if e.engine() != self.engine {
            return Err(Error::EngineMismatch(format!("{:?} coefficient in {:?} container", e.engine(), self.engine)));
        }
        let sum = match self.coeffs.get(&power) {
            Some(a) => a.try_add(&e)?,
            None => e,
        };
        if sum.is_zero() {
            self.coeffs.remove(&power);
        } else {
            self.coeffs.insert(power, sum);
        }
        Ok(())
    }

    fn check(&self, other: &XPolyLog) -> Result<()> {
        if self.engine != other.engine || self.eps != other.eps {
            return Err(Error::EngineMismatch(format!(
                "{:?}/{:?} vs {:?}/{:?}",
                self.engine, self.eps, other.engine, other.eps
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &XPolyLog) -> Result<XPolyLog> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_coeff(*k, c.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &XPolyLog) -> Result<XPolyLog> {
        self.try_add(&other.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> XPolyLog {
        self.map_coeffs(|e| e.scale(c))
    }

    pub fn mul_rat(&self, r: &RatFunc) -> XPolyLog {
        self.map_coeffs(|e| e.mul_rat(r))
    }

    fn map_coeffs(&self, f: impl Fn(&LogExt) -> LogExt) -> XPolyLog {
        let mut out = self.empty_like();
        for (k, c) in &self.coeffs {
            let v = f(c);
            if !v.is_zero() {
                out.coeffs.insert(*k, v);
            }
        }
        out
    }

    /// Multiplication by `x^k`.
    pub fn shift_power(&self, k: u32) -> XPolyLog {
        let mut out = self.empty_like();
        out.coeffs = self.coeffs.iter().map(|(p, c)| (p + k, c.clone())).collect();
        out
    }

    /// The Gaussian width `z` as a function of the engine parameter:
    /// `iα/√ε` for the real engine and `z` itself for the complex one.
    pub fn width_function(&self) -> Result<RatFunc> {
        match self.engine {
            Engine::ComplexZ => Ok(RatFunc::poly(Poly::x())),
            Engine::RealAlpha => {
                let eps = self.eps.as_ref().expect("real engine carries ε");
                let r = eps.sqrt_exact().ok_or_else(|| Error::NotExact(format!("√ε is irrational for ε = {eps}")))?;
                let k = ExactScalar::imag(num_rational::BigRational::from_integer(1.into()) / r);
                Ok(RatFunc::poly(Poly::new(vec![ExactScalar::zero(), k])))
            }
        }
    }

    fn eps_value(&self) -> EpsParam {
        self.eps.clone().unwrap_or_else(EpsParam::one)
    }

    /// `h_ε (Φ·ξ) = Ψ·ξ` for `Φ = self`; the complex engine uses `ε = 1`.
    pub fn apply_h(&self) -> Result<XPolyLog> {
        let z = self.width_function()?;
        let e = ExactScalar::real(self.eps_value().value().clone());
        let one = RatFunc::one();
        let top = &one + &(&z * &z).scale(&e);
        let mut out = self.empty_like();
        let half = ExactScalar::ratio(1, 2);
        for (&k, c) in &self.coeffs {
            let c = c.scale(&half);
            // ½((1+εz²)x^{k+2} − iεz(2k+1)x^k − εk(k−1)x^{k−2})
            out.add_coeff(k + 2, c.mul_rat(&top))?;
            let mid = z.scale(&(&ExactScalar::imag(-e.re().clone()) * &ExactScalar::from_int(2 * k as i64 + 1)));
            out.add_coeff(k, c.mul_rat(&mid))?;
            if k >= 2 {
                let low =
                    ExactScalar::real(-e.re().clone() * num_rational::BigRational::from_integer((k * (k - 1)).into()));
                out.add_coeff(k - 2, c.scale(&low))?;
            }
        }
        Ok(out)
    }

    /// Numeric coefficients at a parameter point.
    pub fn eval(&self, point: Complex64, opts: &EvalOptions) -> Result<BTreeMap<u32, Complex64>> {
        self.coeffs.iter().map(|(k, c)| Ok((*k, c.eval(point, opts)?))).collect()
    }

    /// Coefficients at an exact point with the log kept symbolic.
    pub fn eval_linear(&self, point: &ExactScalar, opts: &EvalOptions) -> Result<BTreeMap<u32, LogLinear>> {
        self.coeffs.iter().map(|(k, c)| Ok((*k, c.eval_linear(point, opts)?))).collect()
    }

    /// `Φ(point)·ξ` as a double-precision vector.
    pub fn to_gauss(&self, point: Complex64, opts: &EvalOptions) -> Result<GaussVector<Complex64>> {
        let z = match self.engine {
            Engine::ComplexZ => point,
            Engine::RealAlpha => self.eps_value().xi_width_f64(1.0) * point,
        };
        let terms =
            self.eval(point, opts)?.into_iter().map(|(k, c)| GaussTerm::new(c, k, z)).collect::<Result<Vec<_>>>()?;
        GaussVector::from_terms(terms)
    }

    /// Rewrites a complex-engine value on the imaginary axis `z = αi` in the
    /// real engine with `ε = 1`, using `Λ_c(αi) = −Λ(α)`.
    pub fn to_real_engine(&self) -> Result<XPolyLog> {
        if self.engine != Engine::ComplexZ {
            return Err(Error::EngineMismatch("already in the real engine".into()));
        }
        let i = ExactScalar::i();
        let mut out = XPolyLog::zero_real(&EpsParam::one());
        for (k, c) in &self.coeffs {
            let r0 = c.r0().rescale_var(&i);
            let r1 = -&c.r1().rescale_var(&i);
            out.add_coeff(*k, LogExt::new(Engine::RealAlpha, r0, r1))?;
        }
        Ok(out)
    }
}

/// `t_π = x² − c·d/dπ`, with `c = 2√ε` over `α` or `c = 2i` over `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamOperator {
    engine: Engine,
    c: ExactScalar,
}

impl ParamOperator {
    pub fn real(eps: &EpsParam) -> Result<Self> {
        let r = eps
            .sqrt_exact()
            .ok_or_else(|| Error::NotExact(format!("√ε is irrational for ε = {eps}; use float mode")))?;
        Ok(ParamOperator {
            engine: Engine::RealAlpha,
            c: ExactScalar::real(r * num_rational::BigRational::from_integer(2.into())),
        })
    }

    pub fn complex() -> Self {
        ParamOperator { engine: Engine::ComplexZ, c: ExactScalar::complex_ratio((0, 1), (2, 1)) }
    }

    pub fn constant(&self) -> &ExactScalar {
        &self.c
    }

    pub fn apply(&self, v: &XPolyLog) -> Result<XPolyLog> {
        if v.engine != self.engine {
            return Err(Error::EngineMismatch(format!("{:?} operator on {:?} value", self.engine, v.engine)));
        }
        let mut out = v.empty_like();
        let mc = -&self.c;
        for (&k, e) in &v.coeffs {
            out.add_coeff(k + 2, e.clone())?;
            out.add_coeff(k, e.derivative().scale(&mc))?;
        }
        Ok(out)
    }

    pub fn apply_n(&self, n: u32, v: &XPolyLog) -> Result<XPolyLog> {
        let mut out = v.clone();
        for _ in 0..n {
            out = self.apply(&out)?;
        }
        Ok(out)
    }
}

impl fmt::Display for XPolyLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.coeffs.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "[{c}]")?,
                1 => write!(f, "[{c}]·x")?,
                _ => write!(f, "[{c}]·x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for XPolyLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct XPolyLogRepr {
    engine: Engine,
    eps: Option<String>,
    coeffs: BTreeMap<u32, LogExt>,
}

impl Serialize for XPolyLog {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        XPolyLogRepr { engine: self.engine, eps: self.eps.as_ref().map(|e| e.to_string()), coeffs: self.coeffs.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for XPolyLog {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = XPolyLogRepr::deserialize(d)?;
        let eps = r.eps.map(|s| s.parse::<EpsParam>()).transpose().map_err(serde::de::Error::custom)?;
        if (r.engine == Engine::RealAlpha) != eps.is_some() {
            return Err(serde::de::Error::custom("ε must be present exactly for the real engine"));
        }
        if r.coeffs.values().any(|c| c.engine() != r.engine || c.is_zero()) {
            return Err(serde::de::Error::custom("coefficient engine mismatch or zero coefficient"));
        }
        Ok(XPolyLog { engine: r.engine, eps, coeffs: r.coeffs })
    }
}
