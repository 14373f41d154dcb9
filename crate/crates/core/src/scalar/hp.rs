//! Multiprecision evaluation of log-extended values, for probes that need more
//! than double precision. The symbolic layer is exact, so only the final
//! logarithm and the products around it are rounded.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_complex::Complex64;
use num_rational::BigRational;

use super::logext::lambda_value;
use super::{EvalOptions, ExactScalar, LogExt};
use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// A complex value carried at a chosen binary precision.
#[derive(Clone, Debug)]
pub struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    digits: u32,
}

impl HpComplex {
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    /// Decimal rendering `(re, im)` with roughly `digits` significant digits.
    pub fn to_decimal(&self) -> (String, String) {
        (decimal(&self.re, self.digits), decimal(&self.im, self.digits))
    }
}

fn bits_for(digits: u32) -> usize {
    (digits as usize * 3322) / 1000 + 64
}

fn consts() -> Result<Consts> {
    Consts::new().map_err(|e| Error::InvalidArgument(format!("multiprecision constants: {e:?}")))
}

fn from_rational(r: &BigRational, p: usize, cc: &mut Consts) -> BigFloat {
    let n = BigFloat::parse(&r.numer().to_string(), Radix::Dec, p, RM, cc);
    let d = BigFloat::parse(&r.denom().to_string(), Radix::Dec, p, RM, cc);
    n.div(&d, p, RM)
}

fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let mut cc = match Consts::new() {
        Ok(c) => c,
        Err(_) => return f64::NAN,
    };
    x.format(Radix::Dec, RM, &mut cc).ok().and_then(|s| s.parse::<f64>().ok()).unwrap_or(f64::NAN)
}

fn decimal(x: &BigFloat, digits: u32) -> String {
    let mut cc = match Consts::new() {
        Ok(c) => c,
        Err(_) => return "nan".into(),
    };
    // Round to the requested decimal precision before formatting.
    let p = bits_for(digits).saturating_sub(60).max(8);
    let mut y = x.clone();
    y.set_precision(p, RM).ok();
    y.format(Radix::Dec, RM, &mut cc).unwrap_or_else(|_| "nan".into())
}

/// `r0(point) + r1(point)·Λ(point)` at `digits` significant decimal digits.
pub fn logext_eval_hp(e: &LogExt, point: &ExactScalar, opts: &EvalOptions) -> Result<HpComplex> {
    let digits = opts.precision.max(16);
    let p = bits_for(digits);
    let mut cc = consts()?;
    let a = e.r0().eval(point)?;
    let b = e.r1().eval(point)?;
    let mut re = from_rational(a.re(), p, &mut cc);
    let mut im = from_rational(a.im(), p, &mut cc);
    if !b.is_zero() {
        // Validates the cut tube with the f64 image of the point.
        lambda_value(e.engine(), point.to_c64(), opts.cut_tube)?;
        let w = e.engine().log_argument_exact(point).ok_or_else(|| Error::Pole(point.to_string()))?;
        let (lre, lim) = complex_log(&w, p, &mut cc);
        let bre = from_rational(b.re(), p, &mut cc);
        let bim = from_rational(b.im(), p, &mut cc);
        let pr = bre.mul(&lre, p, RM).sub(&bim.mul(&lim, p, RM), p, RM);
        let pi = bre.mul(&lim, p, RM).add(&bim.mul(&lre, p, RM), p, RM);
        re = re.add(&pr, p, RM);
        im = im.add(&pi, p, RM);
    }
    Ok(HpComplex { re, im, digits })
}

/// Principal `log w` with `-π ≤ arg w < π`.
fn complex_log(w: &ExactScalar, p: usize, cc: &mut Consts) -> (BigFloat, BigFloat) {
    let modsq = from_rational(&w.norm_sqr(), p, cc);
    let half = BigFloat::from_f64(0.5, p);
    let ln_mod = modsq.ln(p, RM, cc).mul(&half, p, RM);
    let x = from_rational(w.re(), p, cc);
    let y = from_rational(w.im(), p, cc);
    let pi = cc.pi(p, RM);
    let arg = if x.is_zero() {
        let h = pi.mul(&half, p, RM);
        if y.is_negative() {
            h.neg()
        } else {
            h
        }
    } else {
        let base = y.div(&x, p, RM).atan(p, RM, cc);
        if x.is_positive() {
            base
        } else if y.is_negative() || y.is_zero() {
            // Second branch of atan2; the negative real axis maps to -π.
            base.sub(&pi, p, RM)
        } else {
            base.add(&pi, p, RM)
        }
    };
    (ln_mod, arg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Engine;

    #[test]
    fn log3_to_forty_digits() {
        let e = LogExt::lambda(Engine::RealAlpha);
        let opts = EvalOptions { precision: 40, cut_tube: 1e-6 };
        let v = logext_eval_hp(&e, &ExactScalar::ratio(1, 2), &opts).unwrap();
        let (re, _) = v.to_decimal();
        let digits: String = re.chars().filter(|c| c.is_ascii_digit()).take(36).collect();
        // ln 3 = 1.0986122886681096913952452369225257046475...
        assert_eq!(digits, "109861228866810969139524523692252570");
    }

    #[test]
    fn negative_real_axis_uses_minus_pi() {
        let mut cc = consts().unwrap();
        let (_, arg) = complex_log(&ExactScalar::from_int(-2), 128, &mut cc);
        assert!((to_f64(&arg) + std::f64::consts::PI).abs() < 1e-15);
    }
}
