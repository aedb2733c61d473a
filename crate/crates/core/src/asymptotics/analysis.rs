//! Radius of convergence, dominant directions, classification and the
//! singularity-analysis leading term.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::fixed::{Fx, Num};
use super::{AsymptError, EExpr};
use crate::numeric::ratio_to_f64;

/// Value with first and second derivative.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jet<N = f64> {
    pub v: N,
    pub d: N,
    pub dd: N,
}

impl<N: Num> Jet<N> {
    fn add(&self, o: &Jet<N>) -> Jet<N> {
        Jet { v: self.v.add(&o.v), d: self.d.add(&o.d), dd: self.dd.add(&o.dd) }
    }

    fn mul(&self, o: &Jet<N>) -> Jet<N> {
        let two = N::int(2);
        Jet {
            v: self.v.mul(&o.v),
            d: self.d.mul(&o.v).add(&self.v.mul(&o.d)),
            dd: self.dd.mul(&o.v).add(&two.mul(&self.d).mul(&o.d)).add(&self.v.mul(&o.dd)),
        }
    }

    /// `h(self)` given `h`, `h'` and `h''` at `self.v`.
    fn chain(&self, h: N, h1: N, h2: N) -> Jet<N> {
        Jet { d: h1.mul(&self.d), dd: h2.mul(&self.d).mul(&self.d).add(&h1.mul(&self.dd)), v: h }
    }
}

/// Jet of `e` at `x >= 0`, or `None` outside the disc of convergence.
pub(crate) fn jet_n<N: Num>(e: &EExpr, x: &N) -> Option<Jet<N>> {
    let one = N::int(1);
    let j = match e {
        EExpr::Poly(p) => {
            let (mut v, mut d, mut dd) = (N::int(0), N::int(0), N::int(0));
            for c in p.coeffs().iter().rev() {
                dd = dd.mul(x).add(&N::int(2).mul(&d));
                d = d.mul(x).add(&v);
                v = v.mul(x).add(&N::from_ratio(c));
            }
            Jet { v, d, dd }
        }
        EExpr::Z => Jet { v: x.clone(), d: one, dd: N::int(0) },
        EExpr::Plus(a, b) => jet_n(a, x)?.add(&jet_n(b, x)?),
        EExpr::Times(a, b) => jet_n(a, x)?.mul(&jet_n(b, x)?),
        EExpr::Pow(a, k) => {
            let j = jet_n(a, x)?;
            let km1 = j.v.powi(k - 1);
            let km2 = if *k >= 2 { j.v.powi(k - 2) } else { N::int(0) };
            let h = km1.mul(&j.v);
            j.chain(h, N::int(*k as i64).mul(&km1), N::int((k * (k - 1)) as i64).mul(&km2))
        }
        EExpr::Q(a) | EExpr::L(a) => {
            let j = jet_n(a, x)?;
            if j.v.to_f64() >= 1.0 {
                return None;
            }
            let h = one.div(&one.sub(&j.v));
            if matches!(e, EExpr::Q(_)) {
                let h2 = h.mul(&h);
                j.chain(h.clone(), h2.clone(), N::int(2).mul(&h2).mul(&h))
            } else {
                j.chain(h.ln(), h.clone(), h.mul(&h))
            }
        }
        EExpr::E(a) | EExpr::E1(a) => {
            let j = jet_n(a, x)?;
            let h = j.v.exp();
            let v = if matches!(e, EExpr::E(_)) { h.clone() } else { h.sub(&one) };
            j.chain(v, h.clone(), h)
        }
    };
    j.v.to_f64().is_finite().then_some(j)
}

pub(crate) fn jet(e: &EExpr, x: f64) -> Option<Jet> {
    jet_n(e, &x)
}

pub(crate) fn value(e: &EExpr, x: f64) -> Option<f64> {
    jet(e, x).map(|j| j.v)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Radius {
    Infinite,
    /// The radius lies in `[lo, hi]`; `exact` is set when a rational root
    /// was confirmed by exact evaluation.
    Finite {
        lo: f64,
        hi: f64,
        exact: Option<BigRational>,
    },
}

impl Radius {
    pub fn is_finite(&self) -> bool {
        matches!(self, Radius::Finite { .. })
    }

    pub fn value(&self) -> f64 {
        match self {
            Radius::Infinite => f64::INFINITY,
            Radius::Finite { exact: Some(r), .. } => ratio_to_f64(r),
            Radius::Finite { lo, hi, .. } => (lo + hi) / 2.0,
        }
    }

    /// Half-width of the enclosing interval.
    pub fn error(&self) -> f64 {
        match self {
            Radius::Finite { exact: None, lo, hi } => (hi - lo) / 2.0,
            _ => 0.0,
        }
    }

    fn min(self, other: Radius) -> Radius {
        if other.value() < self.value() {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Infinite => f.write_str("inf"),
            Radius::Finite { exact: Some(r), .. } => f.write_str(&crate::numeric::fmt_ratio(r)),
            r => write!(f, "{}", r.value()),
        }
    }
}

/// Look for a small-denominator rational root of `p(x) = 1` near `x`.
fn exact_root(p: &crate::poly::QPoly, x: f64) -> Option<BigRational> {
    let one = BigRational::one();
    (1..=1000i64).find_map(|den| {
        let num = libm::round(x * den as f64).to_i64()?;
        let cand = BigRational::new(BigInt::from(num), BigInt::from(den));
        (num > 0 && p.eval(&cand) == one).then_some(cand)
    })
}

/// Radius of convergence by structural recursion: polynomials are entire,
/// `E` and `E1` keep the radius of their argument, sums and products take
/// the minimum, and `Q(g)`, `L(g)` stop at the least positive root of
/// `g(x) = 1` if it comes before the radius of `g`.
pub fn radius(e: &EExpr) -> Radius {
    match e {
        EExpr::Poly(_) | EExpr::Z => Radius::Infinite,
        EExpr::Plus(a, b) | EExpr::Times(a, b) => radius(a).min(radius(b)),
        EExpr::Pow(a, _) | EExpr::E(a) | EExpr::E1(a) => radius(a),
        EExpr::Q(a) | EExpr::L(a) => {
            if a.as_poly().is_some_and(|p| p.is_zero()) {
                return Radius::Infinite;
            }
            let inner = radius(a);
            let below = |x: f64| value(a, x).is_some_and(|v| v < 1.0);
            let mut hi = match inner {
                Radius::Finite { lo, .. } => lo,
                Radius::Infinite => {
                    let mut h = 1.0;
                    while below(h) {
                        h *= 2.0;
                        if h > 1e300 {
                            return Radius::Infinite;
                        }
                    }
                    h
                }
            };
            let mut lo = 0.0;
            if below(hi) {
                // g stays below 1 up to its own singularity
                return inner;
            }
            for _ in 0..2000 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if below(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let exact = a.as_poly().and_then(|p| exact_root(&p, 0.5 * (lo + hi)));
            Radius::Finite { lo, hi, exact }
        }
    }
}

/// Directions `θ ∈ [-π, π)` of the singularities on the circle of
/// convergence, from the period `d` of `F(z) = z^v H(z^d)`.
pub fn dominant_directions(e: &EExpr) -> Result<Vec<f64>, AsymptError> {
    if !radius(e).is_finite() {
        return Err(AsymptError::InfiniteRadius);
    }
    let d = e.period().1.max(1);
    let mut out: Vec<f64> = (0..d)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / d as f64;
            if t >= PI {
                t - 2.0 * PI
            } else {
                t
            }
        })
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    AlgebraicLogarithmic,
    Entire,
    Other,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::AlgebraicLogarithmic => "AL",
            Class::Entire => "entire",
            Class::Other => "other",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub class: Class,
    pub trace: Vec<String>,
}

/// Local shape at the dominant point: analytic with a value, or
/// `c (1 - z/r)^(-alpha) log^k(1/(1 - z/r))`.
#[derive(Clone, Debug)]
enum Local<N> {
    Analytic(N),
    Sing { alpha: u32, k: u32, c: N },
}

const TOL: f64 = 1e-9;

fn analytic_at(e: &EExpr, r: f64) -> bool {
    radius(e).value() > r * (1.0 + TOL)
}

/// Local expansion at `r`; `rf` is its `f64` value, used for the
/// structural decisions.
fn local<N: Num>(e: &EExpr, r: &N, rf: f64, trace: &mut Vec<String>) -> Result<Local<N>, AsymptError> {
    let unsupported = |msg: String| AsymptError::Unsupported(msg);
    if analytic_at(e, rf) {
        return jet_n(e, r)
            .map(|j| Local::Analytic(j.v))
            .ok_or_else(|| unsupported(format!("{e} has no value at {rf}")));
    }
    Ok(match e {
        EExpr::Poly(_) | EExpr::Z => unreachable!("entire"),
        EExpr::Plus(a, b) => match (local(a, r, rf, trace)?, local(b, r, rf, trace)?) {
            (Local::Analytic(x), Local::Analytic(y)) => Local::Analytic(x.add(&y)),
            (s @ Local::Sing { .. }, Local::Analytic(_)) | (Local::Analytic(_), s @ Local::Sing { .. }) => s,
            (Local::Sing { alpha: a1, k: k1, c: c1 }, Local::Sing { alpha: a2, k: k2, c: c2 }) => {
                match (a1, k1).cmp(&(a2, k2)) {
                    core::cmp::Ordering::Greater => Local::Sing { alpha: a1, k: k1, c: c1 },
                    core::cmp::Ordering::Less => Local::Sing { alpha: a2, k: k2, c: c2 },
                    core::cmp::Ordering::Equal => Local::Sing { alpha: a1, k: k1, c: c1.add(&c2) },
                }
            }
        },
        EExpr::Times(a, b) => match (local(a, r, rf, trace)?, local(b, r, rf, trace)?) {
            (Local::Analytic(x), Local::Analytic(y)) => Local::Analytic(x.mul(&y)),
            (Local::Sing { alpha, k, c }, Local::Analytic(v)) | (Local::Analytic(v), Local::Sing { alpha, k, c }) => {
                if v.to_f64() <= 0.0 {
                    return Err(unsupported(format!("cofactor vanishes at the singularity in {e}")));
                }
                Local::Sing { alpha, k, c: c.mul(&v) }
            }
            (Local::Sing { alpha: a1, k: k1, c: c1 }, Local::Sing { alpha: a2, k: k2, c: c2 }) => {
                Local::Sing { alpha: a1 + a2, k: k1 + k2, c: c1.mul(&c2) }
            }
        },
        EExpr::Pow(a, j) => match local(a, r, rf, trace)? {
            Local::Analytic(v) => Local::Analytic(v.powi(*j)),
            Local::Sing { alpha, k, c } => Local::Sing { alpha: alpha * j, k: k * j, c: c.powi(*j) },
        },
        EExpr::Q(a) | EExpr::L(a) => {
            if !analytic_at(a, rf) {
                return Err(unsupported(format!("{e}: argument is singular at the dominant point")));
            }
            let g = jet_n(a, r).ok_or_else(|| unsupported(format!("{a} has no value at {rf}")))?;
            if g.d.to_f64() <= 0.0 {
                return Err(unsupported(format!("{e}: g'(r) = {} is not positive", g.d.to_f64())));
            }
            if matches!(e, EExpr::Q(_)) {
                trace.push(format!("{e}: simple pole, g(r) = {}, g'(r) = {}", g.v.to_f64(), g.d.to_f64()));
                Local::Sing { alpha: 1, k: 0, c: N::int(1).div(&r.mul(&g.d)) }
            } else {
                trace.push(format!("{e}: logarithmic singularity, g'(r) = {}", g.d.to_f64()));
                Local::Sing { alpha: 0, k: 1, c: N::int(1) }
            }
        }
        EExpr::E(_) | EExpr::E1(_) => {
            return Err(unsupported(format!("{e}: exponential of a singular argument")));
        }
    })
}

/// Arguments `g` of the `Q` and `L` nodes that are singular at `r`.
fn singular_args(e: &EExpr, r: f64, out: &mut Vec<EExpr>) {
    if analytic_at(e, r) {
        return;
    }
    match e {
        EExpr::Plus(a, b) | EExpr::Times(a, b) => {
            singular_args(a, r, out);
            singular_args(b, r, out);
        }
        EExpr::Pow(a, _) | EExpr::E(a) | EExpr::E1(a) => singular_args(a, r, out),
        EExpr::Q(a) | EExpr::L(a) => {
            if analytic_at(a, r) {
                out.push((**a).clone());
            } else {
                singular_args(a, r, out);
            }
        }
        EExpr::Poly(_) | EExpr::Z => {}
    }
}

/// Refine the root of `g(x) = 1` near `x0` by Newton steps.
fn refine_root(g: &EExpr, x0: f64) -> Option<Fx> {
    let one = Fx::int(1);
    let mut x = Fx::from_f64(x0);
    for _ in 0..8 {
        let j = jet_n(g, &x)?;
        x = x.sub(&j.v.sub(&one).div(&j.d));
    }
    Some(x)
}

/// Split the explicit class into entire functions, functions with an
/// algebraic-logarithmic dominant singularity, and the rest.
pub fn classify(e: &EExpr) -> Classification {
    let mut trace = Vec::new();
    let r = radius(e);
    trace.push(format!("radius {r}"));
    if !r.is_finite() {
        return Classification { class: Class::Entire, trace };
    }
    let class = match local(e, &r.value(), r.value(), &mut trace) {
        Ok(Local::Sing { .. }) => Class::AlgebraicLogarithmic,
        Ok(Local::Analytic(_)) => {
            trace.push("no singular node found at the radius".into());
            Class::Other
        }
        Err(err) => {
            trace.push(format!("{err}"));
            Class::Other
        }
    };
    Classification { class, trace }
}

/// `[z^n] F ~ C r^(-n) n^a (log n)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticTerm {
    pub radius: f64,
    pub radius_err: f64,
    pub radius_exact: Option<BigRational>,
    pub power: i64,
    pub log_power: u32,
    pub constant: f64,
    /// Distance between `constant` and a recomputation at roughly 300 bits.
    pub constant_err: f64,
    /// `r` and `C` to roughly 300 bits.
    pub radius_precise: BigRational,
    pub constant_precise: BigRational,
    pub trace: Vec<String>,
}

impl AsymptoticTerm {
    /// `ln` of the estimate at `n`, usable where the value over- or
    /// underflows.
    pub fn ln_eval(&self, n: usize) -> f64 {
        let n = n as f64;
        let mut out = libm::log(self.constant) - n * libm::log(self.radius) + self.power as f64 * libm::log(n);
        if self.log_power > 0 {
            out += self.log_power as f64 * libm::log(libm::log(n));
        }
        out
    }

    pub fn eval(&self, n: usize) -> f64 {
        libm::exp(self.ln_eval(n))
    }

    /// The estimate at `n >= 1` from the high-precision constants.
    pub fn eval_precise(&self, n: usize) -> BigRational {
        let nr = BigRational::from_integer(BigInt::from(n));
        let mut out = self.constant_precise.clone() / pow_i(&self.radius_precise, n as i64);
        out *= pow_i(&nr, self.power);
        if self.log_power > 0 {
            let ln = Fx::from_ratio(&nr).ln().to_ratio();
            out *= pow_i(&ln, self.log_power as i64);
        }
        out
    }
}

fn pow_i(x: &BigRational, k: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k.unsigned_abs() {
        acc *= x;
    }
    if k < 0 {
        acc.recip()
    } else {
        acc
    }
}

impl fmt::Display for AsymptoticTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}^-n * n^{} * log(n)^{}", self.constant, self.radius, self.power, self.log_power)
    }
}

fn transfer<N: Num>(l: Local<N>) -> Result<(N, i64, u32), AsymptError> {
    match l {
        Local::Sing { alpha: 0, k, c } if k >= 1 => Ok((c.mul(&N::int(k as i64)), -1, k - 1)),
        Local::Sing { alpha, k, c } if alpha >= 1 => {
            let fact = (1..alpha as i64).fold(N::int(1), |acc, i| acc.mul(&N::int(i)));
            Ok((c.div(&fact), alpha as i64 - 1, k))
        }
        _ => Err(AsymptError::Unsupported("no singular term".into())),
    }
}

/// Leading term of the coefficients by singularity analysis. Handles
/// poles from `Q` and logarithms from `L` with analytic cofactors.
pub fn equivalent(e: &EExpr) -> Result<AsymptoticTerm, AsymptError> {
    e.validate()?;
    let r = radius(e);
    let Radius::Finite { exact, .. } = r.clone() else {
        return Err(AsymptError::InfiniteRadius);
    };
    let dirs = dominant_directions(e)?;
    if dirs.len() > 1 {
        return Err(AsymptError::MultipleDirections(dirs.len()));
    }
    let rv = r.value();
    let mut trace = Vec::new();
    trace.push(format!("radius {r}"));
    let (constant, power, log_power) = transfer(local(e, &rv, rv, &mut trace)?)?;

    let r_fx = match &exact {
        Some(q) => Fx::from_ratio(q),
        None => {
            let mut args = Vec::new();
            singular_args(e, rv, &mut args);
            let g = args.first().ok_or_else(|| AsymptError::Unsupported("no singular node".into()))?;
            refine_root(g, rv).ok_or_else(|| AsymptError::Unsupported("root refinement failed".into()))?
        }
    };
    let (c_fx, _, _) = transfer(local(e, &r_fx, rv, &mut Vec::new())?)?;
    let constant_precise = c_fx.to_ratio();
    let constant_err = (ratio_to_f64(&(BigRational::from_float(constant).expect("finite") - &constant_precise))).abs();
    Ok(AsymptoticTerm {
        radius: rv,
        radius_err: r.error(),
        radius_exact: exact,
        power,
        log_power,
        constant,
        constant_err,
        radius_precise: r_fx.to_ratio(),
        constant_precise,
        trace,
    })
}
