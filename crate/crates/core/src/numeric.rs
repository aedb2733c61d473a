//! Conversions between exact rationals and floating point.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Nearest `f64` to a big integer, with huge values mapped to `±inf`.
pub fn int_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// `f64` value of a rational; numerator and denominator are scaled down
/// together so that ratios of huge integers still convert accurately.
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (n, d) = (x.numer(), x.denom());
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    if nb < 1000 && db < 1000 {
        return int_to_f64(n) / int_to_f64(d);
    }
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let nf = int_to_f64(&(n >> shift_n as usize));
    let df = int_to_f64(&(d >> shift_d as usize));
    nf / df * libm::exp2((shift_n - shift_d) as f64)
}

/// Natural log of a positive big integer, valid far beyond `f64` range.
pub fn ln_int(x: &BigInt) -> f64 {
    let bits = x.bits() as i64;
    if bits < 1000 {
        return libm::log(int_to_f64(x));
    }
    let shift = bits - 64;
    libm::log(int_to_f64(&(x >> shift as usize))) + shift as f64 * core::f64::consts::LN_2
}

/// `ln |x|` for a nonzero rational.
pub fn ln_ratio(x: &BigRational) -> f64 {
    ln_int(&x.numer().abs()) - ln_int(&x.denom().abs())
}

/// `a/b` or `a` when the denominator is one.
pub fn fmt_ratio(x: &BigRational) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn ln_factorial(n: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}
