//! Binary fixed-point numbers with a few hundred fractional bits, enough
//! to see the error of a leading term that is far below `f64` resolution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numeric::ratio_to_f64;

const PREC: usize = 320;

/// `m / 2^PREC`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Fx(BigInt);

/// Arithmetic shared by the `f64` and fixed-point evaluators.
pub(crate) trait Num: Clone + PartialOrd {
    fn from_f64(x: f64) -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;

    fn int(k: i64) -> Self {
        Self::from_f64(k as f64)
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::int(1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Num for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_ratio(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn exp(&self) -> Self {
        libm::exp(*self)
    }
    fn ln(&self) -> Self {
        libm::log(*self)
    }
}

impl Fx {
    fn one_raw() -> BigInt {
        BigInt::one() << PREC
    }

    pub(crate) fn to_ratio(&self) -> BigRational {
        BigRational::new(self.0.clone(), Self::one_raw())
    }

    fn tiny(&self) -> bool {
        self.0.bits() < 8
    }

    fn atanh(t: &Fx) -> Fx {
        // t + t^3/3 + t^5/5 + ...
        let t2 = t.mul(t);
        let mut pow = t.clone();
        let mut acc = Fx(BigInt::zero());
        let mut k = 1i64;
        while !pow.tiny() {
            acc = acc.add(&Fx(&pow.0 / BigInt::from(k)));
            pow = pow.mul(&t2);
            k += 2;
        }
        acc
    }

    fn ln2() -> Fx {
        let third = Fx::int(1).div(&Fx::int(3));
        let a = Fx::atanh(&third);
        a.add(&a)
    }
}

impl Num for Fx {
    fn from_f64(x: f64) -> Self {
        let r = BigRational::from_float(x).expect("finite");
        Fx::from_ratio(&r)
    }

    fn from_ratio(r: &BigRational) -> Self {
        let scaled = r.numer() << PREC;
        let (q, rem) = (&scaled / r.denom(), &scaled % r.denom());
        // round half away from zero
        let twice = rem.abs() * 2;
        if twice >= r.denom().abs() {
            Fx(q + if scaled.is_negative() != r.denom().is_negative() { -1 } else { 1 })
        } else {
            Fx(q)
        }
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.to_ratio())
    }

    fn add(&self, o: &Self) -> Self {
        Fx(&self.0 + &o.0)
    }

    fn sub(&self, o: &Self) -> Self {
        Fx(&self.0 - &o.0)
    }

    fn mul(&self, o: &Self) -> Self {
        Fx((&self.0 * &o.0) >> PREC)
    }

    fn div(&self, o: &Self) -> Self {
        Fx((&self.0 << PREC) / &o.0)
    }

    fn exp(&self) -> Self {
        let x = self.to_f64().abs();
        let s = if x < 1.0 / 256.0 { 0 } else { (libm::log2(x) as i32 + 9).max(0) as usize };
        let y = Fx(&self.0 >> s);
        let mut term = Fx::int(1);
        let mut acc = Fx::int(1);
        let mut k = 1i64;
        while !term.tiny() {
            term = Fx(&term.mul(&y).0 / BigInt::from(k));
            acc = acc.add(&term);
            k += 1;
        }
        for _ in 0..s {
            acc = acc.mul(&acc);
        }
        acc
    }

    fn ln(&self) -> Self {
        assert!(self.0.is_positive(), "log of a nonpositive number");
        let k = self.0.bits() as i64 - 1 - PREC as i64;
        let m = if k >= 0 { Fx(&self.0 >> k as usize) } else { Fx(&self.0 << (-k) as usize) };
        let one = Fx::int(1);
        let t = m.sub(&one).div(&m.add(&one));
        let a = Fx::atanh(&t);
        let kl = Fx(Fx::ln2().0 * BigInt::from(k));
        kl.add(&a).add(&a)
    }

    fn int(k: i64) -> Self {
        Fx(BigInt::from(k) << PREC)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Fx, b: &BigRational, bits: u32) -> bool {
        let diff = (a.to_ratio() - b).abs();
        diff < BigRational::new(BigInt::one(), BigInt::one() << bits as usize)
    }

    #[test]
    fn exp_and_log_are_inverse() {
        for x in [-3.5, -0.25, 0.0, 0.693, 1.0, 2.5, 10.0] {
            let fx = Fx::from_f64(x);
            assert!(close(&fx.exp().ln(), &fx.to_ratio(), 250), "{x}");
        }
        for y in [0.001, 0.5, 1.0, 2.0, 3.0, 1e6] {
            let fy = Fx::from_f64(y);
            let back = fy.ln().exp();
            let rel = (back.to_ratio() - fy.to_ratio()) / fy.to_ratio();
            assert!(rel.abs() < BigRational::new(BigInt::one(), BigInt::one() << 240usize), "{y}");
        }
    }

    #[test]
    fn known_constants() {
        // ln 2 = 0.693147180559945309417232121458176568...
        let ln2 = Fx::ln2().to_f64();
        assert!((ln2 - core::f64::consts::LN_2).abs() < 1e-16);
        let e = Fx::int(1).exp();
        assert!((e.to_f64() - core::f64::consts::E).abs() < 1e-15);
        // e^(ln 2) = 2 to far beyond double precision
        assert!(close(&Fx::ln2().exp(), &BigRational::from_integer(2.into()), 280));
    }
}
