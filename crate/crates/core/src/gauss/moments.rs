use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;

use super::GaussVector;
use crate::scalar::{double_factorial_odd, ExactScalar, LogLinear};

/// Which pairing to realize. `Sesquilinear` is the L² inner product,
/// conjugate-linear in the first slot; `Bilinear` drops both conjugations and
/// is the analytic continuation of the former off the imaginary axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    Sesquilinear,
    Bilinear,
}

/// `∫ x^n exp(−s x²) dx` over the real line, for `Re s > 0`.
pub fn gaussian_moment(n: u32, s: Complex64) -> Complex64 {
    if n % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = (Complex64::new(std::f64::consts::PI, 0.0) / s).sqrt();
    let two_s = s * 2.0;
    for k in 1..=n / 2 {
        acc = acc * (2 * k - 1) as f64 / two_s;
    }
    acc
}

/// The exponent `s` of `exp(−s x²)` in the product of two Gaussians.
fn exponent_c64(zl: Complex64, zr: Complex64, pairing: Pairing) -> Complex64 {
    let zl = match pairing {
        Pairing::Sesquilinear => zl.conj(),
        Pairing::Bilinear => -zl,
    };
    // s = −i(z_r − z̄_l)/2, or −i(z_r + z_l)/2 without conjugation.
    Complex64::new(0.0, -0.5) * (zr - zl)
}

/// Double-precision inner product, conjugate-linear in `f`.
pub fn inner_product(f: &GaussVector<Complex64>, g: &GaussVector<Complex64>) -> Complex64 {
    pair_c64(f, g, Pairing::Sesquilinear)
}

pub(crate) fn pair_c64(f: &GaussVector<Complex64>, g: &GaussVector<Complex64>, pairing: Pairing) -> Complex64 {
    // Neumaier summation keeps the result independent of term order to rounding.
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for a in f.terms() {
        let ca = match pairing {
            Pairing::Sesquilinear => a.coeff.conj(),
            Pairing::Bilinear => a.coeff,
        };
        for b in g.terms() {
            let n = a.power + b.power;
            if n % 2 == 1 {
                continue;
            }
            let v = ca * b.coeff * gaussian_moment(n, exponent_c64(a.width, b.width, pairing));
            let (sr, cr) = neumaier(sum.re, comp.re, v.re);
            let (si, ci) = neumaier(sum.im, comp.im, v.im);
            sum = Complex64::new(sr, si);
            comp = Complex64::new(cr, ci);
        }
    }
    sum + comp
}

fn neumaier(sum: f64, comp: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
    (t, comp + c)
}

/// Coefficients that can multiply a Gaussian moment in an exact pairing.
pub trait MomentCoeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn scale(&self, k: &ExactScalar) -> Self;
    fn conj(&self) -> Self;
    fn eval(&self) -> Complex64;
}

impl MomentCoeff for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn scale(&self, k: &ExactScalar) -> Self {
        self * k
    }
    fn conj(&self) -> Self {
        ExactScalar::conj(self)
    }
    fn eval(&self) -> Complex64 {
        self.to_c64()
    }
}

impl MomentCoeff for LogLinear {
    fn zero() -> Self {
        LogLinear::zero()
    }
    fn is_zero(&self) -> bool {
        LogLinear::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        LogLinear::add_assign(self, other);
    }
    fn scale(&self, k: &ExactScalar) -> Self {
        LogLinear::scale(self, k)
    }
    fn conj(&self) -> Self {
        LogLinear::conj(self)
    }
    fn eval(&self) -> Complex64 {
        LogLinear::eval(self)
    }
}

/// An exact pairing value `Σ_s C_s·√(π/s)`, keyed by the Gaussian exponent `s`.
///
/// Distinct `s` keep separate coefficients, so no square root is ever taken
/// and a zero result is an exact identity.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSum<C> {
    entries: BTreeMap<ExactScalar, C>,
}

impl<C: MomentCoeff> Default for MomentSum<C> {
    fn default() -> Self {
        MomentSum { entries: BTreeMap::new() }
    }
}

impl<C: MomentCoeff> MomentSum<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &BTreeMap<ExactScalar, C> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_term(&mut self, s: ExactScalar, c: C) {
        if c.is_zero() {
            return;
        }
        let remove = match self.entries.get_mut(&s) {
            Some(a) => {
                a.add_assign(&c);
                a.is_zero()
            }
            None => {
                self.entries.insert(s.clone(), c);
                false
            }
        };
        if remove {
            self.entries.remove(&s);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (s, c) in &other.entries {
            self.add_term(s.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(&other.scale(&ExactScalar::from_int(-1)));
        out
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.entries {
            out.add_term(s.clone(), c.scale(k));
        }
        out
    }

    /// Complex conjugate, using `conj √(π/s) = √(π/s̄)` for `Re s > 0`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.entries {
            out.add_term(s.conj(), c.conj());
        }
        out
    }

    pub fn eval(&self) -> Complex64 {
        let pi = Complex64::new(std::f64::consts::PI, 0.0);
        self.entries.iter().map(|(s, c)| c.eval() * (pi / s.to_c64()).sqrt()).sum()
    }

    /// The value as a multiple of `√π`, when every exponent is a positive
    /// rational square.
    pub fn sqrt_pi_multiple(&self) -> Option<C> {
        let mut acc = C::zero();
        for (s, c) in &self.entries {
            if !s.is_real() {
                return None;
            }
            let r = ExactScalar::sqrt_rational(s.re())?;
            acc.add_assign(&c.scale(&ExactScalar::real(BigRational::from_integer(1.into()) / r)));
        }
        Some(acc)
    }
}

impl MomentSum<ExactScalar> {
    /// The same value with coefficients viewed as log-linear combinations.
    pub fn lift(&self) -> MomentSum<LogLinear> {
        MomentSum { entries: self.entries.iter().map(|(s, c)| (s.clone(), LogLinear::constant(c.clone()))).collect() }
    }
}

impl<C: MomentCoeff + std::fmt::Display> std::fmt::Display for MomentSum<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(c) = self.sqrt_pi_multiple() {
            return write!(f, "({c})*sqrt(pi)");
        }
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.entries.iter().map(|(s, c)| format!("({c})*sqrt(pi/({s}))")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn exponent_exact(zl: &ExactScalar, zr: &ExactScalar, pairing: Pairing) -> ExactScalar {
    let d = match pairing {
        Pairing::Sesquilinear => zr - &zl.conj(),
        Pairing::Bilinear => zr + zl,
    };
    &d * &ExactScalar::complex_ratio((0, 1), (-1, 2))
}

/// `(2j−1)!!/(2s)^j`, the rational part of the `2j`-th moment.
fn moment_rational(n: u32, s: &ExactScalar) -> ExactScalar {
    let j = n / 2;
    let two_s = s * &ExactScalar::from_int(2);
    let denom = two_s.pow(j);
    &ExactScalar::from_bigint(double_factorial_odd(j as u64)) / &denom
}

/// Exact pairing of an exact-coefficient left side with a right side whose
/// coefficients live in any [`MomentCoeff`] module.
pub fn pair_terms<'a, C: MomentCoeff + 'a>(
    left: impl IntoIterator<Item = (&'a ExactScalar, u32, &'a ExactScalar)>,
    right: impl IntoIterator<Item = (&'a C, u32, &'a ExactScalar)>,
    pairing: Pairing,
) -> MomentSum<C> {
    let left: Vec<_> = left.into_iter().collect();
    let mut out = MomentSum::zero();
    for (cr, pr, zr) in right {
        for (cl, pl, zl) in &left {
            let n = pl + pr;
            if n % 2 == 1 {
                continue;
            }
            let s = exponent_exact(zl, zr, pairing);
            let cl = match pairing {
                Pairing::Sesquilinear => cl.conj(),
                Pairing::Bilinear => (*cl).clone(),
            };
            let k = &cl * &moment_rational(n, &s);
            out.add_term(s, cr.scale(&k));
        }
    }
    out
}

/// Exact inner product `⟨f, g⟩`, conjugate-linear in `f`.
pub fn inner_product_exact(f: &GaussVector<ExactScalar>, g: &GaussVector<ExactScalar>) -> MomentSum<ExactScalar> {
    pair_terms(
        f.terms().iter().map(|t| (&t.coeff, t.power, &t.width)),
        g.terms().iter().map(|t| (&t.coeff, t.power, &t.width)),
        Pairing::Sesquilinear,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::GaussTerm;

    fn ground() -> GaussVector<ExactScalar> {
        GaussVector::monomial(ExactScalar::one(), 0, ExactScalar::i()).unwrap()
    }

    #[test]
    fn standard_gaussian_integrals() {
        let e0 = ground();
        let sp = std::f64::consts::PI.sqrt();
        let v = inner_product_exact(&e0, &e0);
        assert_eq!(v.sqrt_pi_multiple(), Some(ExactScalar::one()));
        assert!((v.eval().re - sp).abs() < 1e-15);
        let x1 = e0.shift_power(1);
        assert!(inner_product_exact(&x1, &e0).is_zero());
        let x2 = e0.shift_power(2);
        assert_eq!(inner_product_exact(&x2, &e0).sqrt_pi_multiple(), Some(ExactScalar::ratio(1, 2)));
        assert!((inner_product(&x2.to_c64(), &e0.to_c64()).re - sp / 2.0).abs() < 1e-15);
    }

    #[test]
    fn conjugate_linear_in_first_slot() {
        let e0 = ground();
        let i = ExactScalar::i();
        let v = inner_product_exact(&e0.scale(&i), &e0).sqrt_pi_multiple().unwrap();
        assert_eq!(v, ExactScalar::complex_ratio((0, 1), (-1, 1)));
    }

    #[test]
    fn hermitian_symmetry_exact() {
        let z1 = ExactScalar::complex_ratio((1, 3), (1, 2));
        let z2 = ExactScalar::complex_ratio((-2, 1), (3, 1));
        let f = GaussVector::from_terms(vec![
            GaussTerm::new(ExactScalar::complex_ratio((1, 1), (2, 1)), 2, z1.clone()).unwrap(),
            GaussTerm::new(ExactScalar::ratio(3, 7), 0, z2.clone()).unwrap(),
        ])
        .unwrap();
        let g = GaussVector::monomial(ExactScalar::complex_ratio((0, 1), (5, 1)), 4, z2).unwrap();
        assert_eq!(inner_product_exact(&f, &g), inner_product_exact(&g, &f).conj());
    }

    #[test]
    fn moment_float_matches_exact() {
        let s = ExactScalar::complex_ratio((3, 2), (1, 4));
        for n in [0, 2, 4, 10] {
            let exact =
                moment_rational(n, &s).to_c64() * (Complex64::new(std::f64::consts::PI, 0.0) / s.to_c64()).sqrt();
            let fl = gaussian_moment(n, s.to_c64());
            assert!((exact - fl).norm() <= 1e-14 * fl.norm());
        }
    }
}
