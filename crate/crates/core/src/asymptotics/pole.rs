//! Exact coefficients of `A(z) (1 - z/r)^(-m)` as a descending series in `n`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AsymptError;
use crate::arith::factorial;
use crate::poly::QPoly;

/// `[z^n] = r^(-n) Σ_j c_j n^(m-1-j)` for `n >= deg A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleSeries {
    pub r: BigRational,
    pub order: usize,
    /// `c_0, c_1, ...`, the coefficient of `n^(m-1-j)` at index `j`.
    pub coeffs: Vec<BigRational>,
    poly: QPoly,
}

impl PoleSeries {
    /// The full polynomial in `n`.
    pub fn polynomial(&self) -> &QPoly {
        &self.poly
    }

    /// Exact coefficient `[z^n]`, valid for `n` at least the degree of `A`.
    pub fn coefficient(&self, n: usize) -> BigRational {
        let n_r = BigRational::from_integer(BigInt::from(n));
        let scale = (0..n).fold(BigRational::one(), |acc, _| acc / &self.r);
        self.poly.eval(&n_r) * scale
    }
}

impl fmt::Display for PoleSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.r.is_one() {
            write!(f, "({})^-n * ", crate::numeric::fmt_ratio(&self.r))?;
        }
        write!(f, "({})", self.poly.to_string_desc("n"))
    }
}

pub fn pole_series(a: &QPoly, r: &BigRational, m: usize, terms: usize) -> Result<PoleSeries, AsymptError> {
    if m < 1 {
        return Err(AsymptError::PoleOrder);
    }
    if !r.is_positive() {
        return Err(AsymptError::PoleLocation);
    }
    let int = |k: i64| BigRational::from_integer(BigInt::from(k));
    // [z^(n-i)] (1 - z/r)^(-m) = r^(i-n) C(n-i+m-1, m-1)
    let mut poly = QPoly::zero();
    let mut r_pow = BigRational::one();
    for (i, c) in a.coeffs().iter().enumerate() {
        if !c.is_zero() {
            let mut binom = QPoly::one();
            for t in 1..m {
                binom = &binom * &QPoly::from_coeffs(alloc::vec![int(t as i64 - i as i64), BigRational::one()]);
            }
            poly = &poly + &binom.scale(&(c * &r_pow));
        }
        r_pow *= r;
    }
    let poly = poly.scale(&(BigRational::one() / BigRational::from_integer(BigInt::from(factorial(m - 1)))));
    let coeffs = (0..terms).map(|j| if j < m { poly.coeff(m - 1 - j) } else { BigRational::zero() }).collect();
    Ok(PoleSeries { r: r.clone(), order: m, coeffs, poly })
}
