use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::scalar::ExactScalar;

/// A Laurent polynomial in `π` with exact complex-rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiPoly(BTreeMap<i32, ExactScalar>);

impl PiPoly {
    pub fn zero() -> Self {
        PiPoly(BTreeMap::new())
    }

    pub fn constant(c: ExactScalar) -> Self {
        PiPoly::term(c, 0)
    }

    /// `c·π^k`.
    pub fn term(c: ExactScalar, k: i32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        PiPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: i32) -> ExactScalar {
        self.0.get(&k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, c) in &other.0 {
            let v = m.remove(k).unwrap_or_else(ExactScalar::zero) + c.clone();
            if !v.is_zero() {
                m.insert(*k, v);
            }
        }
        PiPoly(m)
    }

    pub fn neg(&self) -> Self {
        PiPoly(self.0.iter().map(|(k, c)| (*k, -c.clone())).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = PiPoly::zero();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                out = out.add(&PiPoly::term(x * y, a + b));
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        PiPoly(self.0.iter().map(|(k, c)| (*k, c.conj())).collect())
    }

    pub fn eval(&self) -> Complex64 {
        self.0.iter().map(|(k, c)| c.to_c64() * std::f64::consts::PI.powi(*k)).sum()
    }

    /// Real and imaginary parts as exact text, e.g. `1/2*pi^-1`.
    pub fn parts(&self) -> (String, String) {
        let part = |f: &dyn Fn(&ExactScalar) -> num_rational::BigRational| {
            let terms: Vec<String> = self
                .0
                .iter()
                .filter_map(|(k, c)| {
                    let v = f(c);
                    if num_traits::Zero::is_zero(&v) {
                        return None;
                    }
                    Some(match k {
                        0 => v.to_string(),
                        1 => format!("{v}*pi"),
                        _ => format!("{v}*pi^{k}"),
                    })
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join("+")
            }
        };
        (part(&|c| c.re().clone()), part(&|c| c.im().clone()))
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.parts();
        write!(f, "({re})+i({im})")
    }
}

/// The truncation of `T_G` to `e_0..e_N`: `π` on the diagonal and `i/(n−m)` off it.
#[derive(Clone, Debug)]
pub struct TgMatrix {
    pub n: usize,
    pub entries: Vec<Vec<PiPoly>>,
}

/// `(T_G)_{nm}` without building the matrix.
pub fn tg_entry_f64(n: usize, m: usize) -> Complex64 {
    if n == m {
        Complex64::new(std::f64::consts::PI, 0.0)
    } else {
        Complex64::new(0.0, 1.0 / (n as f64 - m as f64))
    }
}

pub fn tg_entry(n: usize, m: usize) -> PiPoly {
    if n == m {
        PiPoly::term(ExactScalar::one(), 1)
    } else {
        PiPoly::constant(ExactScalar::imag(num_rational::BigRational::new(1.into(), (n as i64 - m as i64).into())))
    }
}

pub fn tg_matrix(n: usize) -> TgMatrix {
    let entries = (0..=n).into_par_iter().map(|i| (0..=n).map(|j| tg_entry(i, j)).collect()).collect();
    TgMatrix { n, entries }
}

impl TgMatrix {
    pub fn is_hermitian(&self) -> bool {
        (0..=self.n).all(|i| (i..=self.n).all(|j| self.entries[i][j] == self.entries[j][i].conj()))
    }

    /// Dense text export: a header line, then one row per line of `re im` pairs.
    pub fn to_text(&self) -> String {
        let mut s = format!("# tg_matrix N={} rows={} layout=row-major entry=re,im\n", self.n, self.n + 1);
        for row in &self.entries {
            let cells: Vec<String> = row
                .iter()
                .map(|e| {
                    let (re, im) = e.parts();
                    format!("{re},{im}")
                })
                .collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    pub n: usize,
    pub entries_checked: usize,
    pub mismatches: usize,
    /// Pairs `n ≠ m` for which `[h,T_G](e_n − e_m) = −i(e_n − e_m)` was checked.
    pub restriction_pairs: usize,
    pub restriction_failures: usize,
    pub pass: bool,
}

/// `[h, T_G^{(N)}]` against `−i(1 − 2πP_0^{(N)})`, entrywise in exact arithmetic,
/// with `h = diag(n + ½)` and `P_0` the matrix of `1/(2π)`.
///
/// The restriction check runs over all pairs with `n, m ≤ restrict`.
pub fn commutator_check(n: usize, restrict: usize) -> CommutatorReport {
    let t = tg_matrix(n);
    let h = |k: usize| PiPoly::constant(ExactScalar::ratio(2 * k as i64 + 1, 2));
    let p0 = PiPoly::term(ExactScalar::ratio(1, 2), -1);
    let two_pi = PiPoly::term(ExactScalar::from_int(2), 1);
    let minus_i = PiPoly::constant(ExactScalar::imag(num_rational::BigRational::from_integer((-1).into())));
    let comm: Vec<Vec<PiPoly>> = (0..=n)
        .into_par_iter()
        .map(|i| (0..=n).map(|j| h(i).mul(&t.entries[i][j]).sub(&t.entries[i][j].mul(&h(j)))).collect())
        .collect();
    let mismatches: usize = (0..=n)
        .into_par_iter()
        .map(|i| {
            (0..=n)
                .filter(|&j| {
                    let id = if i == j { PiPoly::constant(ExactScalar::one()) } else { PiPoly::zero() };
                    let rhs = minus_i.mul(&id.sub(&two_pi.mul(&p0)));
                    comm[i][j] != rhs
                })
                .count()
        })
        .sum();

    let r = restrict.min(n);
    let pairs: Vec<(usize, usize)> =
        (0..=r).flat_map(|a| (0..=r).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let restriction_failures = pairs
        .par_iter()
        .filter(|&&(a, b)| {
            (0..=n).any(|k| {
                let lhs = comm[k][a].sub(&comm[k][b]);
                let unit = |j: usize| if k == j { ExactScalar::one() } else { ExactScalar::zero() };
                let rhs = minus_i.mul(&PiPoly::constant(unit(a) - unit(b)));
                lhs != rhs
            })
        })
        .count();
    let pass = mismatches == 0 && restriction_failures == 0;
    CommutatorReport {
        n,
        entries_checked: (n + 1) * (n + 1),
        mismatches,
        restriction_pairs: pairs.len(),
        restriction_failures,
        pass,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub n: usize,
    pub estimate: f64,
    /// Next eigenvalue after deflating the top one.
    pub second: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub bound: f64,
    pub pass: bool,
}

pub const POWER_TOL: f64 = 1e-8;
const POWER_MAX_ITER: usize = 200_000;

fn tg_apply(v: &[Complex64]) -> Vec<Complex64> {
    (0..v.len()).into_par_iter().map(|i| (0..v.len()).map(|j| tg_entry_f64(i, j) * v[j]).sum()).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalize(v: &mut [Complex64]) {
    let n = dot(v, v).re.sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

/// Power iteration with Rayleigh quotients on `T_G^{(N)}`, optionally
/// projected off the vectors in `deflate`.
fn power_iteration(dim: usize, deflate: &[Vec<Complex64>], seed: u64) -> (f64, Vec<Complex64>, usize, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let project = |v: &mut Vec<Complex64>| {
        for u in deflate {
            let c = dot(u, v);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
    };
    project(&mut v);
    normalize(&mut v);
    let mut lambda = 0.0;
    for it in 1..=POWER_MAX_ITER {
        let mut w = tg_apply(&v);
        project(&mut w);
        let next = dot(&v, &w).re;
        normalize(&mut w);
        v = w;
        if (next - lambda).abs() <= POWER_TOL * next.abs() {
            return (next, v, it, true);
        }
        lambda = next;
    }
    (lambda, v, POWER_MAX_ITER, false)
}

/// Largest eigenvalue of the (positive, Hermitian) truncation `T_G^{(N)}`,
/// compared with the Hilbert-inequality bound `2π`.
pub fn norm_bound_check(n: usize) -> NormReport {
    let dim = n + 1;
    let (estimate, top, iterations, converged) = power_iteration(dim, &[], 0);
    let second = (dim > 1).then(|| power_iteration(dim, &[top], 1).0);
    let bound = 2.0 * std::f64::consts::PI;
    NormReport { n, estimate, second, iterations, converged, bound, pass: estimate <= bound }
}
