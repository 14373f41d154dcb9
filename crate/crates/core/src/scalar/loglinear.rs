use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::logext::{lambda_value, EvalOptions};
use super::{Engine, ExactScalar};
use crate::error::Result;

/// The log symbol `Λ` of one engine evaluated at an exact point, optionally conjugated.
///
/// Distinct symbols are treated as linearly independent over the complex
/// rationals, so an exact zero in [`LogLinear`] is a genuine identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LogSym {
    pub engine: Engine,
    pub point: ExactScalar,
    pub conjugated: bool,
}

impl LogSym {
    pub fn new(engine: Engine, point: ExactScalar, opts: &EvalOptions) -> Result<Self> {
        // Rejects points on the cut before the symbol ever enters a computation.
        lambda_value(engine, point.to_c64(), opts.cut_tube)?;
        Ok(LogSym { engine, point, conjugated: false })
    }

    /// Whether `Λ` is real at this point, in which case conjugation is the identity.
    fn is_real_valued(&self) -> bool {
        let one = num_rational::BigRational::from_integer(1.into());
        match self.engine {
            Engine::RealAlpha => self.point.is_real() && self.point.re().abs() < one,
            Engine::ComplexZ => self.point.is_imaginary() && self.point.im().abs() < one,
        }
    }

    pub fn conj(&self) -> LogSym {
        let mut s = self.clone();
        if !s.is_real_valued() {
            s.conjugated = !s.conjugated;
        }
        s
    }

    pub fn value(&self) -> Complex64 {
        // Already validated against the cut at construction.
        let v = lambda_value(self.engine, self.point.to_c64(), 0.0).expect("validated symbol");
        if self.conjugated {
            v.conj()
        } else {
            v
        }
    }
}

impl fmt::Display for LogSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.engine {
            Engine::RealAlpha => "L",
            Engine::ComplexZ => "Lc",
        };
        if self.conjugated {
            write!(f, "conj({name}({}))", self.point)
        } else {
            write!(f, "{name}({})", self.point)
        }
    }
}

/// `c + Σ c_k Λ_k` with exact complex-rational coefficients and formal log symbols.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LogLinear {
    constant: Option<ExactScalar>,
    terms: BTreeMap<LogSym, ExactScalar>,
}

impl LogLinear {
    pub fn zero() -> Self {
        LogLinear::default()
    }

    pub fn constant(c: ExactScalar) -> Self {
        LogLinear { constant: (!c.is_zero()).then_some(c), terms: BTreeMap::new() }
    }

    pub fn symbol(s: LogSym) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(s, ExactScalar::one());
        LogLinear { constant: None, terms }
    }

    pub fn constant_part(&self) -> ExactScalar {
        self.constant.clone().unwrap_or_else(ExactScalar::zero)
    }

    pub fn terms(&self) -> &BTreeMap<LogSym, ExactScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_none() && self.terms.is_empty()
    }

    pub fn add(&self, other: &LogLinear) -> LogLinear {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &LogLinear) {
        if let Some(c) = &other.constant {
            let sum = &self.constant_part() + c;
            self.constant = (!sum.is_zero()).then_some(sum);
        }
        for (s, c) in &other.terms {
            let sum = match self.terms.get(s) {
                Some(a) => a + c,
                None => c.clone(),
            };
            if sum.is_zero() {
                self.terms.remove(s);
            } else {
                self.terms.insert(s.clone(), sum);
            }
        }
    }

    pub fn sub(&self, other: &LogLinear) -> LogLinear {
        self.add(&other.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, k: &ExactScalar) -> LogLinear {
        if k.is_zero() {
            return LogLinear::zero();
        }
        LogLinear {
            constant: self.constant.as_ref().map(|c| c * k),
            terms: self.terms.iter().map(|(s, c)| (s.clone(), c * k)).collect(),
        }
    }

    pub fn conj(&self) -> LogLinear {
        let mut out = LogLinear::constant(self.constant_part().conj());
        for (s, c) in &self.terms {
            let mut t = LogLinear::symbol(s.conj());
            t = t.scale(&c.conj());
            out.add_assign(&t);
        }
        out
    }

    pub fn eval(&self) -> Complex64 {
        let mut acc = self.constant_part().to_c64();
        for (s, c) in &self.terms {
            acc += c.to_c64() * s.value();
        }
        acc
    }

    /// Largest coefficient magnitude, a scale for relative comparisons.
    pub fn magnitude_bound(&self) -> f64 {
        let mut m = self.constant_part().to_c64().norm();
        for (s, c) in &self.terms {
            m = m.max(c.to_c64().norm() * s.value().norm());
        }
        m
    }
}

impl fmt::Display for LogLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if let Some(c) = &self.constant {
            parts.push(c.to_string());
        }
        for (s, c) in &self.terms {
            parts.push(format!("({c})*{s}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LogLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_is_exact() {
        let o = EvalOptions::default();
        let s = LogSym::new(Engine::RealAlpha, ExactScalar::ratio(1, 2), &o).unwrap();
        let a = LogLinear::symbol(s.clone()).scale(&ExactScalar::ratio(3, 2));
        let b = LogLinear::symbol(s).scale(&ExactScalar::ratio(3, 2));
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn conjugation_of_real_symbol_is_identity() {
        let o = EvalOptions::default();
        let s = LogSym::new(Engine::ComplexZ, ExactScalar::complex_ratio((0, 1), (1, 2)), &o).unwrap();
        assert_eq!(s.conj(), s);
        let t = LogSym::new(Engine::ComplexZ, ExactScalar::complex_ratio((1, 5), (2, 5)), &o).unwrap();
        assert_ne!(t.conj(), t);
        assert!((t.conj().value() - t.value().conj()).norm() < 1e-15);
    }

    #[test]
    fn symbol_on_cut_rejected() {
        let o = EvalOptions::default();
        assert!(LogSym::new(Engine::ComplexZ, ExactScalar::complex_ratio((0, 1), (3, 1)), &o).is_err());
    }
}
