//! Coefficient domains for the counting engine: plain integers, or
//! integer polynomials in a marker variable `u` truncated at a fixed degree.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) trait Weights {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn marker(&self) -> Self::E;
    fn add_assign(&self, acc: &mut Self::E, b: &Self::E);
    fn sub_assign(&self, acc: &mut Self::E, b: &Self::E);
    /// `acc += a * b`
    fn mul_add(&self, acc: &mut Self::E, a: &Self::E, b: &Self::E);
    fn scale(&self, a: &Self::E, c: &BigInt) -> Self::E;
    fn div_exact(&self, a: &Self::E, c: &BigInt) -> Self::E;
    /// `u -> u^k`
    fn adams(&self, a: &Self::E, k: usize) -> Self::E;
}

pub(crate) struct Plain;

impl Weights for Plain {
    type E = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn marker(&self) -> BigInt {
        BigInt::one()
    }
    fn add_assign(&self, acc: &mut BigInt, b: &BigInt) {
        *acc += b;
    }
    fn sub_assign(&self, acc: &mut BigInt, b: &BigInt) {
        *acc -= b;
    }
    fn mul_add(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
    fn scale(&self, a: &BigInt, c: &BigInt) -> BigInt {
        a * c
    }
    fn div_exact(&self, a: &BigInt, c: &BigInt) -> BigInt {
        debug_assert!((a % c).is_zero(), "inexact division in counting engine");
        a / c
    }
    fn adams(&self, a: &BigInt, _k: usize) -> BigInt {
        a.clone()
    }
}

/// Polynomials in `u` with coefficients `0..=cap`.
pub(crate) struct Marked {
    pub cap: usize,
}

impl Weights for Marked {
    type E = Vec<BigInt>;
    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.cap + 1]
    }
    fn one(&self) -> Vec<BigInt> {
        let mut v = self.zero();
        v[0] = BigInt::one();
        v
    }
    fn marker(&self) -> Vec<BigInt> {
        let mut v = self.zero();
        if self.cap >= 1 {
            v[1] = BigInt::one();
        }
        v
    }
    fn add_assign(&self, acc: &mut Vec<BigInt>, b: &Vec<BigInt>) {
        for (x, y) in acc.iter_mut().zip(b) {
            *x += y;
        }
    }
    fn sub_assign(&self, acc: &mut Vec<BigInt>, b: &Vec<BigInt>) {
        for (x, y) in acc.iter_mut().zip(b) {
            *x -= y;
        }
    }
    fn mul_add(&self, acc: &mut Vec<BigInt>, a: &Vec<BigInt>, b: &Vec<BigInt>) {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(self.cap + 1 - i) {
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
    }
    fn scale(&self, a: &Vec<BigInt>, c: &BigInt) -> Vec<BigInt> {
        a.iter().map(|x| x * c).collect()
    }
    fn div_exact(&self, a: &Vec<BigInt>, c: &BigInt) -> Vec<BigInt> {
        a.iter()
            .map(|x| {
                debug_assert!((x % c).is_zero(), "inexact division in counting engine");
                x / c
            })
            .collect()
    }
    fn adams(&self, a: &Vec<BigInt>, k: usize) -> Vec<BigInt> {
        if k == 1 {
            return a.clone();
        }
        let mut v = self.zero();
        for (i, x) in a.iter().enumerate() {
            if i * k > self.cap {
                break;
            }
            v[i * k] = x.clone();
        }
        v
    }
}
