//! Exact scalar tower: complex rationals, polynomials and rational functions in
//! one formal parameter, and the log-extended ring `r0 + r1·Λ` that is closed
//! under differentiation.

mod exact;
pub mod hp;
mod logext;
mod loglinear;
mod poly;
mod ratfunc;

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;

pub use exact::{parse_rational, rat_to_f64, ExactScalar};
pub use logext::{lambda_derivative, logext_derivative, logext_eval, Engine, EvalOptions, LogExt};
pub use loglinear::{LogLinear, LogSym};
pub use poly::Poly;
pub use ratfunc::{ratfunc_derivative, RatFunc};

/// Coefficient field shared by the exact and floating-point vector pipelines.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn is_zero(&self) -> bool;
    fn from_int(n: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn from_exact(e: &ExactScalar) -> Self;
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn to_c64(&self) -> Complex64;
    /// Total order used to put vectors into a unique normal form.
    fn total_cmp(&self, other: &Self) -> Ordering;
    fn imag_is_positive(&self) -> bool;
    /// Real and imaginary parts as text that [`Scalar::from_parts`] reads back exactly.
    fn to_parts(&self) -> (String, String);
    fn from_parts(re: &str, im: &str) -> crate::Result<Self>;
    /// Nearest value to a double; exact fields convert the double's binary value.
    fn from_f64(x: f64) -> Self;
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;
}

impl Scalar for ExactScalar {
    const EXACT: bool = true;
    fn from_f64(x: f64) -> Self {
        ExactScalar::real(BigRational::from_float(x).unwrap_or_default())
    }
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn i() -> Self {
        ExactScalar::i()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn from_int(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
    fn from_rational(r: &BigRational) -> Self {
        ExactScalar::real(r.clone())
    }
    fn from_exact(e: &ExactScalar) -> Self {
        e.clone()
    }
    fn conj(&self) -> Self {
        ExactScalar::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        ExactScalar::inv(self)
    }
    fn to_c64(&self) -> Complex64 {
        ExactScalar::to_c64(self)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn imag_is_positive(&self) -> bool {
        self.im().is_positive()
    }
    fn to_parts(&self) -> (String, String) {
        (rat_string(self.re()), rat_string(self.im()))
    }
    fn from_parts(re: &str, im: &str) -> crate::Result<Self> {
        Ok(ExactScalar::new(parse_rational(re)?, parse_rational(im)?))
    }
}

fn rat_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(rat_to_f64(r), 0.0)
    }
    fn from_exact(e: &ExactScalar) -> Self {
        e.to_c64()
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(Complex64::inv(self))
        }
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.re.total_cmp(&other.re).then(self.im.total_cmp(&other.im))
    }
    fn imag_is_positive(&self) -> bool {
        self.im > 0.0
    }
    fn to_parts(&self) -> (String, String) {
        // Debug output for f64 is the shortest string that parses back to the same bits.
        (format!("{:?}", self.re), format!("{:?}", self.im))
    }
    fn from_parts(re: &str, im: &str) -> crate::Result<Self> {
        let p = |s: &str| s.parse::<f64>().map_err(|e| crate::Error::Parse(format!("{s}: {e}")));
        Ok(Complex64::new(p(re)?, p(im)?))
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> num_bigint::BigInt {
    if k > n {
        return 0.into();
    }
    let k = k.min(n - k);
    let mut acc = num_bigint::BigInt::from(1);
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// `(2n-1)!!` with the convention `(-1)!! = 1`.
pub fn double_factorial_odd(n: u64) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::from(1);
    let mut k = 1u64;
    while k < 2 * n {
        acc *= k;
        k += 2;
    }
    acc
}

pub fn factorial(n: u64) -> num_bigint::BigInt {
    (1..=n).fold(num_bigint::BigInt::from(1), |acc, k| acc * k)
}

/// Physicists' Hermite polynomial `H_n`, lowest degree first, from the
/// Rodrigues form via `H_{n+1} = 2x·H_n − H_n'`.
pub fn hermite_rodrigues(n: usize) -> Vec<num_bigint::BigInt> {
    let mut h = vec![num_bigint::BigInt::from(1)];
    for _ in 0..n {
        let mut next = vec![num_bigint::BigInt::from(0); h.len() + 1];
        for (k, c) in h.iter().enumerate() {
            next[k + 1] += c * 2;
            if k > 0 {
                next[k - 1] -= c * k;
            }
        }
        h = next;
    }
    h
}

/// `H_n = n! Σ_k (−1)^k/k! (2x)^{n−2k}/(n−2k)!`.
pub fn hermite_explicit(n: usize) -> Vec<num_bigint::BigInt> {
    let mut h = vec![num_bigint::BigInt::from(0); n + 1];
    let nf = factorial(n as u64);
    for k in 0..=n / 2 {
        let j = n - 2 * k;
        let mut c = (&nf / (factorial(k as u64) * factorial(j as u64))) << j;
        if k % 2 == 1 {
            c = -c;
        }
        h[j] = c;
    }
    h
}

/// The Hermite polynomials `H_0..=H_n` by the three-term recurrence.
pub fn hermite_table(n: usize) -> Vec<Vec<num_bigint::BigInt>> {
    let mut out: Vec<Vec<num_bigint::BigInt>> = vec![vec![1.into()]];
    if n >= 1 {
        out.push(vec![0.into(), 2.into()]);
    }
    for k in 1..n {
        let mut next = vec![num_bigint::BigInt::from(0); k + 2];
        for (j, c) in out[k].iter().enumerate() {
            next[j + 1] += c * 2;
        }
        for (j, c) in out[k - 1].iter().enumerate() {
            next[j] -= c * (2 * k);
        }
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_forms_agree() {
        let table = hermite_table(12);
        for n in 0..=12 {
            assert_eq!(hermite_rodrigues(n), hermite_explicit(n));
            assert_eq!(hermite_rodrigues(n), table[n]);
        }
        let h2: Vec<num_bigint::BigInt> = vec![(-2).into(), 0.into(), 4.into()];
        assert_eq!(hermite_explicit(2), h2);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(5, 2), 10.into());
        assert_eq!(binomial(3, 4), 0.into());
        assert_eq!(double_factorial_odd(0), 1.into());
        assert_eq!(double_factorial_odd(3), 15.into());
        assert_eq!(factorial(6), 720.into());
    }
}
