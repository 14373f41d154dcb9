use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ExactScalar, Poly};
use crate::error::{Error, Result};

/// Univariate rational function `num/den` in canonical form: common factors
/// removed and `den` monic. Structural equality is therefore functional equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds and canonicalizes `num/den`. Fails if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("rational function with zero denominator".into()));
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let lead = den.leading().unwrap().inv().unwrap();
        RatFunc { num: num.scale(&lead), den: den.scale(&lead) }
    }

    /// `num/den` already free of common factors; only normalizes `den` to monic.
    fn from_reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let lead = den.leading().unwrap().inv().unwrap();
        RatFunc { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value when the function does not depend on the parameter.
    pub fn as_constant(&self) -> Option<ExactScalar> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(ExactScalar::zero()),
            (Some(0), Some(0)) => Some(self.num.coeff(0)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `conj(r(conj(π)))`: conjugates every coefficient.
    pub fn conj(&self) -> RatFunc {
        RatFunc { num: self.num.conj(), den: self.den.conj() }
    }

    /// `r(k·x)` for `k ≠ 0`.
    pub fn rescale_var(&self, k: &ExactScalar) -> RatFunc {
        Self::canonical(self.num.rescale_var(k), self.den.rescale_var(k))
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            None
        } else {
            Some(Self::canonical(self.den.clone(), self.num.clone()))
        }
    }

    pub fn derivative(&self) -> RatFunc {
        // (n/d)' = (n'd - nd')/d², with g = gcd(d, d') divided out first:
        // (n'·(d/g) - n·(d'/g)) / (d·(d/g)).
        let dd = self.den.derivative();
        if dd.is_zero() {
            return Self::canonical(self.num.derivative(), self.den.clone());
        }
        let g = Poly::gcd(&self.den, &dd);
        let dg = self.den.div_rem(&g).0;
        let ddg = dd.div_rem(&g).0;
        let top = &(&self.num.derivative() * &dg) - &(&self.num * &ddg);
        Self::canonical(top, &self.den * &dg)
    }

    pub fn eval(&self, x: &ExactScalar) -> Result<ExactScalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(x.to_string()));
        }
        Ok(&self.num.eval(x) / &d)
    }

    pub fn eval_c64(&self, x: Complex64) -> Result<Complex64> {
        let d = self.den.eval_c64(x);
        if d.norm() == 0.0 || !d.is_finite() {
            return Err(Error::Pole(format!("{x}")));
        }
        Ok(self.num.eval_c64(x) / d)
    }

    pub fn fmt_with(&self, f: &mut impl fmt::Write, var: &str) -> fmt::Result {
        if self.den.degree() == Some(0) {
            if self.num.degree().unwrap_or(0) == 0 {
                return self.num.fmt_with(f, var);
            }
            write!(f, "(")?;
            self.num.fmt_with(f, var)?;
            return write!(f, ")");
        }
        write!(f, "(")?;
        self.num.fmt_with(f, var)?;
        write!(f, ")/(")?;
        self.den.fmt_with(f, var)?;
        write!(f, ")")
    }
}

/// `gcd(a, b)` for monic denominators, with a cheap exit when one divides the
/// other (the usual case, since denominators here are powers of a few factors).
fn shared_factor(a: &Poly, b: &Poly) -> Poly {
    if a == b {
        return a.clone();
    }
    let (small, big) = if a.degree() <= b.degree() { (a, b) } else { (b, a) };
    if big.div_rem(small).1.is_zero() {
        return small.clone();
    }
    Poly::gcd(a, b)
}

/// Formal derivative of a rational function in its parameter, in canonical form.
pub fn ratfunc_derivative(r: &RatFunc) -> RatFunc {
    r.derivative()
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Both operands are reduced, so only the common part g of the
        // denominators can cancel against the new numerator.
        let g = shared_factor(&self.den, &rhs.den);
        if g.degree() == Some(0) {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFunc::from_reduced(num, &self.den * &rhs.den);
        }
        let a = self.den.div_rem(&g).0;
        let b = rhs.den.div_rem(&g).0;
        let t = &(&self.num * &b) + &(&rhs.num * &a);
        if t.is_zero() {
            return RatFunc::zero();
        }
        let g2 = Poly::gcd(&t, &g);
        RatFunc::from_reduced(t.div_rem(&g2).0, (&a * &rhs.den).div_rem(&g2).0)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // Cross-cancellation of reduced operands yields a reduced product.
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let num = &self.num.div_rem(&g1).0 * &rhs.num.div_rem(&g2).0;
        let den = &self.den.div_rem(&g2).0 * &rhs.den.div_rem(&g1).0;
        RatFunc::from_reduced(num, den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, "x")
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn derivative_of_constant() {
        assert_eq!(rf(&[1], &[1]).derivative(), RatFunc::zero());
    }

    #[test]
    fn derivative_of_inverse_quadratic() {
        // d/dα 1/(1-α²) = 2α/(1-α²)²
        let lhs = rf(&[1], &[1, 0, -1]).derivative();
        let rhs = rf(&[0, 2], &[1, 0, -2, 0, 1]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_matches_pointwise_oracle() {
        // d/dα α²/(1+α) = (α²+2α)/(1+α)², checked at 5 rational points.
        let d = rf(&[0, 0, 1], &[1, 1]).derivative();
        for (p, q) in [(1, 3), (2, 5), (-1, 7), (7, 2), (3, 1)] {
            let a = ExactScalar::ratio(p, q);
            let one = ExactScalar::one();
            let expect = &(&(&a * &a) + &(&a * &ExactScalar::from_int(2))) / &(&(&one + &a) * &(&one + &a));
            assert_eq!(d.eval(&a).unwrap(), expect);
        }
    }

    #[test]
    fn canonical_form_cancels_common_factor() {
        let r = rf(&[-1, 0, 1], &[2, 2]); // (α²-1)/(2α+2) = (α-1)/2
        assert_eq!(r.den(), &Poly::one());
        assert_eq!(r.num(), &Poly::new(vec![ExactScalar::ratio(-1, 2), ExactScalar::ratio(1, 2)]));
    }

    #[test]
    fn pole_detected() {
        let r = rf(&[1], &[1, 0, -1]);
        assert!(matches!(r.eval(&ExactScalar::one()), Err(Error::Pole(_))));
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
    }
}
