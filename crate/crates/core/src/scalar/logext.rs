use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hp, ExactScalar, LogLinear, LogSym, Poly, RatFunc};
use crate::error::{Error, Result};

/// Which formal log symbol a [`LogExt`] value carries.
///
/// * `RealAlpha`: `Λ(α) = log((1+α)/(1-α))`, `Λ' = 2/(1-α²)`.
/// * `ComplexZ`: `Λ(z) = log(-(z-i)/(z+i))`, `Λ' = 2i/(1+z²)`.
///
/// On `z = αi` with `0 < α < 1` the two are related by `Λ_real(α) = -Λ_complex(αi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Engine {
    RealAlpha,
    ComplexZ,
}

impl Engine {
    pub fn var(self) -> &'static str {
        match self {
            Engine::RealAlpha => "a",
            Engine::ComplexZ => "z",
        }
    }

    /// Distance from `p` to the branch cut of this engine's log symbol.
    pub fn cut_distance(self, p: Complex64) -> f64 {
        let (along, across) = match self {
            Engine::RealAlpha => (p.re, p.im),
            Engine::ComplexZ => (p.im, p.re),
        };
        if along.abs() >= 1.0 {
            across.abs()
        } else {
            (along.abs() - 1.0).hypot(across)
        }
    }

    /// The argument `w` with `Λ = log w`.
    pub fn log_argument(self, p: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Engine::RealAlpha => (one + p) / (one - p),
            Engine::ComplexZ => -(p - i) / (p + i),
        }
    }

    pub fn log_argument_exact(self, p: &ExactScalar) -> Option<ExactScalar> {
        let one = ExactScalar::one();
        let i = ExactScalar::i();
        match self {
            Engine::RealAlpha => (&one + p).checked_div(&(&one - p)),
            Engine::ComplexZ => (-(p - &i)).checked_div(&(p + &i)),
        }
    }
}

/// Principal log with `-π ≤ arg < π`.
pub fn principal_log(w: Complex64) -> Complex64 {
    let mut arg = w.im.atan2(w.re);
    if arg >= std::f64::consts::PI {
        arg -= 2.0 * std::f64::consts::PI;
    }
    Complex64::new(w.norm().ln(), arg)
}

/// Derivative of the log symbol, a rational function in the engine parameter.
pub fn lambda_derivative(engine: Engine) -> RatFunc {
    match engine {
        Engine::RealAlpha => RatFunc::new(Poly::from_ints(&[2]), Poly::from_ints(&[1, 0, -1])).unwrap(),
        Engine::ComplexZ => {
            RatFunc::new(Poly::constant(ExactScalar::from_int(2).mul_i()), Poly::from_ints(&[1, 0, 1])).unwrap()
        }
    }
}

/// Options for numeric evaluation of log-extended values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Significant decimal digits. Values above [`DOUBLE_DIGITS`] go through the multiprecision path.
    pub precision: u32,
    /// Radius of the exclusion tube around the branch cut.
    pub cut_tube: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { precision: 16, cut_tube: 1e-6 }
    }
}

/// `r0(π) + r1(π)·Λ(π)` over one engine.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LogExt {
    engine: Engine,
    r0: RatFunc,
    r1: RatFunc,
}

impl LogExt {
    pub fn new(engine: Engine, r0: RatFunc, r1: RatFunc) -> Self {
        LogExt { engine, r0, r1 }
    }

    pub fn zero(engine: Engine) -> Self {
        LogExt { engine, r0: RatFunc::zero(), r1: RatFunc::zero() }
    }

    pub fn rational(engine: Engine, r: RatFunc) -> Self {
        LogExt { engine, r0: r, r1: RatFunc::zero() }
    }

    pub fn constant(engine: Engine, c: ExactScalar) -> Self {
        Self::rational(engine, RatFunc::constant(c))
    }

    /// The bare log symbol Λ.
    pub fn lambda(engine: Engine) -> Self {
        LogExt { engine, r0: RatFunc::zero(), r1: RatFunc::one() }
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn r0(&self) -> &RatFunc {
        &self.r0
    }

    pub fn r1(&self) -> &RatFunc {
        &self.r1
    }

    pub fn is_zero(&self) -> bool {
        self.r0.is_zero() && self.r1.is_zero()
    }

    fn check(&self, other: &LogExt) -> Result<()> {
        if self.engine != other.engine {
            return Err(Error::EngineMismatch(format!("{:?} vs {:?}", self.engine, other.engine)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LogExt) -> Result<LogExt> {
        self.check(other)?;
        Ok(LogExt { engine: self.engine, r0: &self.r0 + &other.r0, r1: &self.r1 + &other.r1 })
    }

    pub fn try_sub(&self, other: &LogExt) -> Result<LogExt> {
        self.check(other)?;
        Ok(LogExt { engine: self.engine, r0: &self.r0 - &other.r0, r1: &self.r1 - &other.r1 })
    }

    pub fn neg(&self) -> LogExt {
        LogExt { engine: self.engine, r0: -&self.r0, r1: -&self.r1 }
    }

    /// Multiplication by a rational function of the parameter.
    pub fn mul_rat(&self, r: &RatFunc) -> LogExt {
        LogExt { engine: self.engine, r0: &self.r0 * r, r1: &self.r1 * r }
    }

    pub fn scale(&self, c: &ExactScalar) -> LogExt {
        LogExt { engine: self.engine, r0: self.r0.scale(c), r1: self.r1.scale(c) }
    }

    /// `d/dπ (r0 + r1 Λ) = r0' + r1 Λ' + r1' Λ`.
    pub fn derivative(&self) -> LogExt {
        let dl = lambda_derivative(self.engine);
        LogExt { engine: self.engine, r0: &self.r0.derivative() + &(&self.r1 * &dl), r1: self.r1.derivative() }
    }

    /// Numeric value at `point`; see [`logext_eval`].
    pub fn eval(&self, point: Complex64, opts: &EvalOptions) -> Result<Complex64> {
        logext_eval(self, point, opts)
    }

    /// Substitutes an exact point, keeping `Λ(point)` as a formal symbol.
    pub fn eval_linear(&self, point: &ExactScalar, opts: &EvalOptions) -> Result<LogLinear> {
        let a = self.r0.eval(point)?;
        let b = self.r1.eval(point)?;
        let mut out = LogLinear::constant(a);
        if !b.is_zero() {
            let sym = LogSym::new(self.engine, point.clone(), opts)?;
            out = out.add(&LogLinear::symbol(sym).scale(&b));
        }
        Ok(out)
    }
}

/// Formal derivative in the engine parameter.
pub fn logext_derivative(e: &LogExt) -> LogExt {
    e.derivative()
}

/// Precisions up to this many digits are served in double precision.
pub const DOUBLE_DIGITS: u32 = 16;

/// Numeric value of `r0(p) + r1(p)Λ(p)` with the principal branch `-π ≤ arg < π`.
///
/// Fails with `Pole` where a denominator vanishes and with `BranchCut` when the
/// log term is needed within `opts.cut_tube` of the cut.
pub fn logext_eval(e: &LogExt, point: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    if opts.precision > DOUBLE_DIGITS {
        let exact = exact_from_c64(point);
        return hp::logext_eval_hp(e, &exact, opts).map(|v| v.to_c64());
    }
    let a = e.r0.eval_c64(point)?;
    if e.r1.is_zero() {
        return Ok(a);
    }
    let b = e.r1.eval_c64(point)?;
    Ok(a + b * lambda_value(e.engine, point, opts.cut_tube)?)
}

/// `Λ(p)` for one engine, refusing points inside the cut tube.
pub fn lambda_value(engine: Engine, point: Complex64, tube: f64) -> Result<Complex64> {
    let d = engine.cut_distance(point);
    if d <= tube {
        return Err(Error::BranchCut(format!(
            "{} = {point} lies within {tube:e} of the cut of the log term",
            engine.var()
        )));
    }
    Ok(principal_log(engine.log_argument(point)))
}

/// The exact binary rational equal to an f64 pair.
pub(crate) fn exact_from_c64(p: Complex64) -> ExactScalar {
    use num_rational::BigRational;
    let conv = |v: f64| BigRational::from_float(v).unwrap_or_default();
    ExactScalar::new(conv(p.re), conv(p.im))
}

impl fmt::Display for LogExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.engine.var();
        match (self.r0.is_zero(), self.r1.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => self.r0.fmt_with(f, v),
            (true, false) => {
                self.r1.fmt_with(f, v)?;
                write!(f, "*L")
            }
            (false, false) => {
                self.r0.fmt_with(f, v)?;
                write!(f, " + ")?;
                self.r1.fmt_with(f, v)?;
                write!(f, "*L")
            }
        }
    }
}

impl fmt::Debug for LogExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogExt[{:?}]({self})", self.engine)
    }
}
