//! Saddle-point estimates for H-admissible functions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::analysis::{jet, radius};
use super::{support_gcd, AsymptError, EExpr};

/// Outcome of the syntactic admissibility check. A rejection means the
/// rules could not verify the function, not that it is inadmissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCheck {
    pub accepted: bool,
    pub trace: Vec<String>,
}

fn nonconstant_poly(e: &EExpr) -> bool {
    e.as_poly().is_some_and(|p| p.degree().unwrap_or(0) >= 1)
}

fn admissible(e: &EExpr, trace: &mut Vec<String>) -> bool {
    match e {
        EExpr::E(a) | EExpr::E1(a) => {
            if let Some(p) = a.as_poly() {
                if p.degree().unwrap_or(0) == 0 {
                    trace.push(format!("{e}: constant exponent"));
                    return false;
                }
                let g = support_gcd(&p);
                if g != 1 {
                    trace.push(format!("{e}: support gcd {g}"));
                    return false;
                }
                trace.push(format!("{e}: exp of a polynomial with support gcd 1"));
                return true;
            }
            let ok = admissible(a, trace);
            if ok {
                trace.push(format!("{e}: exp of an admissible function"));
            }
            ok
        }
        EExpr::Plus(a, b) => {
            let ok = match (a.as_poly().is_some(), b.as_poly().is_some()) {
                (true, true) => false,
                (true, false) => admissible(b, trace),
                (false, true) => admissible(a, trace),
                (false, false) => admissible(a, trace) && admissible(b, trace),
            };
            if ok {
                trace.push(format!("{e}: sum rule"));
            }
            ok
        }
        EExpr::Times(a, b) => {
            let ok = if a.as_poly().is_some_and(|p| !p.is_zero()) {
                admissible(b, trace)
            } else if b.as_poly().is_some_and(|p| !p.is_zero()) {
                admissible(a, trace)
            } else {
                trace.push(format!("{e}: product of two non-polynomials"));
                false
            };
            if ok {
                trace.push(format!("{e}: polynomial multiple"));
            }
            ok
        }
        EExpr::Pow(a, _) => {
            let ok = admissible(a, trace);
            if ok {
                trace.push(format!("{e}: polynomial in an admissible function"));
            }
            ok
        }
        _ if nonconstant_poly(e) || e.as_poly().is_some() => {
            trace.push(format!("{e}: polynomial"));
            false
        }
        _ => {
            trace.push(format!("{e}: no rule applies"));
            false
        }
    }
}

pub fn h_admissible_check(e: &EExpr) -> HCheck {
    let mut trace = Vec::new();
    let accepted = admissible(e, &mut trace);
    HCheck { accepted, trace }
}

/// `(ln F, (ln F)', (ln F)'')` at `x`, computed without forming `F` where
/// that would overflow.
fn log_jet(e: &EExpr, x: f64) -> Option<(f64, f64, f64)> {
    match e {
        EExpr::E(a) => jet(a, x).map(|j| (j.v, j.d, j.dd)),
        EExpr::E1(a) => {
            let j = jet(a, x)?;
            // F = e^g - 1, with t = e^-g
            let t = libm::exp(-j.v);
            let l = j.v + libm::log1p(-t);
            let l1 = j.d / (1.0 - t);
            let l2 = (j.dd + j.d * j.d) / (1.0 - t) - l1 * l1;
            Some((l, l1, l2))
        }
        EExpr::Times(a, b) => {
            let (x0, x1, x2) = log_jet(a, x)?;
            let (y0, y1, y2) = log_jet(b, x)?;
            Some((x0 + y0, x1 + y1, x2 + y2))
        }
        EExpr::Plus(a, b) => {
            let (x0, x1, x2) = log_jet(a, x)?;
            let (y0, y1, y2) = log_jet(b, x)?;
            let m = x0.max(y0);
            let (wa, wb) = (libm::exp(x0 - m), libm::exp(y0 - m));
            let s = wa + wb;
            let l1 = (wa * x1 + wb * y1) / s;
            let l2 = (wa * (x2 + x1 * x1) + wb * (y2 + y1 * y1)) / s - l1 * l1;
            Some((m + libm::log(s), l1, l2))
        }
        EExpr::Pow(a, k) => {
            let (l, l1, l2) = log_jet(a, x)?;
            let k = *k as f64;
            Some((k * l, k * l1, k * l2))
        }
        _ => {
            let j = jet(e, x)?;
            if j.v <= 0.0 {
                return None;
            }
            let l1 = j.d / j.v;
            Some((libm::log(j.v), l1, j.dd / j.v - l1 * l1))
        }
    }
}

/// `ln` of the saddle-point estimate `F(r) / (r^n sqrt(2π b(r)))` where
/// `a(r) = r F'(r)/F(r) = n` and `b(r) = r a'(r)`.
pub fn hayman_log_estimate(e: &EExpr, n: usize) -> Result<f64, AsymptError> {
    e.validate()?;
    let check = h_admissible_check(e);
    if !check.accepted {
        return Err(AsymptError::NotAdmissible(check.trace.join("; ")));
    }
    if n == 0 {
        return Err(AsymptError::NoSaddle(0));
    }
    let target = n as f64;
    let limit = radius(e).value();
    let a = |r: f64| log_jet(e, r).map(|(_, l1, _)| r * l1);
    let below = |r: f64| r < limit && a(r).is_some_and(|v| v < target);
    let mut hi = 1.0f64.min(limit / 2.0);
    while below(hi) {
        hi = if limit.is_finite() { (hi + limit) / 2.0 } else { hi * 2.0 };
        if hi > 1e300 || (limit.is_finite() && limit - hi < 1e-15 * limit) {
            return Err(AsymptError::NoSaddle(n));
        }
    }
    let mut lo = 0.0;
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
    let r = 0.5 * (lo + hi);
    let (l0, l1, l2) = log_jet(e, r).ok_or(AsymptError::NoSaddle(n))?;
    let b = r * (l1 + r * l2);
    if b.is_nan() || b <= 0.0 {
        return Err(AsymptError::NoSaddle(n));
    }
    Ok(l0 - target * libm::log(r) - 0.5 * libm::log(2.0 * PI * b))
}

/// Saddle-point estimate of `[z^n] F`.
pub fn hayman_estimate(e: &EExpr, n: usize) -> Result<f64, AsymptError> {
    hayman_log_estimate(e, n).map(libm::exp)
}
