//! First-order coefficient asymptotics for explicit generating functions
//! built from `1`, `z`, `+`, `*` and the operators `Q(f) = 1/(1-f)`,
//! `L(f) = log 1/(1-f)`, `E(f) = exp(f)` and `E1(f) = exp(f) - 1`.

mod analysis;
mod fixed;
mod hayman;
mod parse;
mod pole;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::counting::{series_coeffs, GfExpr};
use crate::poly::QPoly;

pub use analysis::{classify, dominant_directions, equivalent, radius, AsymptoticTerm, Class, Classification, Radius};
pub use hayman::{h_admissible_check, hayman_estimate, hayman_log_estimate, HCheck};
pub use parse::parse_eexpr;
pub use pole::{pole_series, PoleSeries};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum AsymptError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("negative coefficient in {0}")]
    NegativeCoefficient(String),
    #[error("{op} needs an argument with zero constant term, got {arg}")]
    NonZeroConstant { op: &'static str, arg: String },
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("radius of convergence is infinite")]
    InfiniteRadius,
    #[error("{0} dominant directions; only a single dominant singularity is supported")]
    MultipleDirections(usize),
    #[error("unsupported singular behaviour: {0}")]
    Unsupported(String),
    #[error("not verified H-admissible: {0}")]
    NotAdmissible(String),
    #[error("saddle point equation has no root for n = {0}")]
    NoSaddle(usize),
    #[error("pole order must be at least 1")]
    PoleOrder,
    #[error("pole location must be positive")]
    PoleLocation,
}

/// An expression of the explicit class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EExpr {
    /// Polynomial with nonnegative rational coefficients.
    Poly(QPoly),
    Z,
    Plus(Box<EExpr>, Box<EExpr>),
    Times(Box<EExpr>, Box<EExpr>),
    Pow(Box<EExpr>, u32),
    Q(Box<EExpr>),
    L(Box<EExpr>),
    E(Box<EExpr>),
    E1(Box<EExpr>),
}

impl EExpr {
    pub fn constant(c: i64) -> Self {
        EExpr::Poly(QPoly::from_int(c))
    }

    pub fn plus(a: EExpr, b: EExpr) -> Self {
        EExpr::Plus(a.into(), b.into())
    }

    pub fn times(a: EExpr, b: EExpr) -> Self {
        EExpr::Times(a.into(), b.into())
    }

    pub fn pow(a: EExpr, k: u32) -> Self {
        EExpr::Pow(a.into(), k)
    }

    pub fn q(a: EExpr) -> Self {
        EExpr::Q(a.into())
    }

    pub fn l(a: EExpr) -> Self {
        EExpr::L(a.into())
    }

    pub fn e(a: EExpr) -> Self {
        EExpr::E(a.into())
    }

    pub fn e1(a: EExpr) -> Self {
        EExpr::E1(a.into())
    }

    /// The expression as a polynomial, if it is one.
    pub fn as_poly(&self) -> Option<QPoly> {
        match self {
            EExpr::Poly(p) => Some(p.clone()),
            EExpr::Z => Some(QPoly::x()),
            EExpr::Plus(a, b) => Some(&a.as_poly()? + &b.as_poly()?),
            EExpr::Times(a, b) => Some(&a.as_poly()? * &b.as_poly()?),
            EExpr::Pow(a, k) => Some(a.as_poly()?.pow(*k as usize)),
            _ => None,
        }
    }

    /// Exact constant term.
    pub fn constant_term(&self) -> BigRational {
        self.series(0).map(|s| s[0].clone()).unwrap_or_else(|_| BigRational::zero())
    }

    /// Check coefficient signs, powers and the zero-constant requirement of
    /// `Q`, `L` and `E1`.
    pub fn validate(&self) -> Result<(), AsymptError> {
        match self {
            EExpr::Poly(p) => {
                if p.coeffs().iter().any(Signed::is_negative) {
                    Err(AsymptError::NegativeCoefficient(p.to_string_asc("z")))
                } else {
                    Ok(())
                }
            }
            EExpr::Z => Ok(()),
            EExpr::Plus(a, b) | EExpr::Times(a, b) => {
                a.validate()?;
                b.validate()
            }
            EExpr::Pow(a, k) => {
                if *k == 0 {
                    return Err(AsymptError::ZeroPower);
                }
                a.validate()
            }
            EExpr::E(a) => a.validate(),
            EExpr::Q(a) | EExpr::L(a) | EExpr::E1(a) => {
                a.validate()?;
                if a.constant_term().is_zero() {
                    Ok(())
                } else {
                    let op = match self {
                        EExpr::Q(_) => "Q",
                        EExpr::L(_) => "L",
                        _ => "E1",
                    };
                    Err(AsymptError::NonZeroConstant { op, arg: alloc::format!("{a}") })
                }
            }
        }
    }

    pub fn to_gf(&self) -> GfExpr {
        match self {
            EExpr::Poly(p) => GfExpr::add(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| GfExpr::mul(alloc::vec![GfExpr::Const(c.clone()), GfExpr::Pow(GfExpr::Z.into(), i)]))
                    .collect(),
            ),
            EExpr::Z => GfExpr::Z,
            EExpr::Plus(a, b) => GfExpr::add(alloc::vec![a.to_gf(), b.to_gf()]),
            EExpr::Times(a, b) => GfExpr::mul(alloc::vec![a.to_gf(), b.to_gf()]),
            EExpr::Pow(a, k) => GfExpr::Pow(a.to_gf().into(), *k as usize),
            EExpr::Q(a) => GfExpr::Q(a.to_gf().into()),
            EExpr::L(a) => GfExpr::L { arg: a.to_gf().into(), min: 1 },
            EExpr::E(a) => GfExpr::E { arg: a.to_gf().into(), min: 0 },
            EExpr::E1(a) => GfExpr::E { arg: a.to_gf().into(), min: 1 },
        }
    }

    /// Translate a closed form produced by the counting module, when it
    /// stays inside the explicit class.
    pub fn from_gf(e: &GfExpr) -> Option<EExpr> {
        let fold = |parts: &[GfExpr], f: fn(EExpr, EExpr) -> EExpr| -> Option<EExpr> {
            let mut it = parts.iter();
            let first = EExpr::from_gf(it.next()?)?;
            it.try_fold(first, |acc, p| Some(f(acc, EExpr::from_gf(p)?)))
        };
        let out = match e {
            GfExpr::One => EExpr::constant(1),
            GfExpr::Z => EExpr::Z,
            GfExpr::Const(c) if !c.is_negative() => EExpr::Poly(QPoly::constant(c.clone())),
            GfExpr::Add(parts) => fold(parts, EExpr::plus)?,
            GfExpr::Mul(parts) => fold(parts, EExpr::times)?,
            GfExpr::Pow(a, k) if *k >= 1 => EExpr::pow(EExpr::from_gf(a)?, u32::try_from(*k).ok()?),
            GfExpr::Pow(_, 0) => EExpr::constant(1),
            GfExpr::Q(a) => EExpr::q(EExpr::from_gf(a)?),
            GfExpr::L { arg, min: 1 } => EExpr::l(EExpr::from_gf(arg)?),
            GfExpr::E { arg, min: 0 } => EExpr::e(EExpr::from_gf(arg)?),
            GfExpr::E { arg, min: 1 } => EExpr::e1(EExpr::from_gf(arg)?),
            _ => return None,
        };
        out.validate().ok()?;
        Some(out)
    }

    /// Exact Maclaurin coefficients `c_0..c_n`.
    pub fn series(&self, n: usize) -> Result<Vec<BigRational>, crate::counting::SeriesError> {
        series_coeffs(&self.to_gf(), n)
    }

    /// `(v, d)` with `F(z) = z^v H(z^d)`; `d = 0` when the series has a
    /// single term.
    pub(crate) fn period(&self) -> (usize, usize) {
        use crate::arith::gcd;
        match self {
            EExpr::Poly(p) => {
                let support: Vec<usize> = (0..p.coeffs().len()).filter(|&i| !p.coeff(i).is_zero()).collect();
                let v = support.first().copied().unwrap_or(0);
                (v, support.iter().fold(0, |g, &e| gcd(g, e - v)))
            }
            EExpr::Z => (1, 0),
            EExpr::Plus(a, b) => {
                let ((v1, d1), (v2, d2)) = (a.period(), b.period());
                (v1.min(v2), gcd(gcd(d1, d2), v1.abs_diff(v2)))
            }
            EExpr::Times(a, b) => {
                let ((v1, d1), (v2, d2)) = (a.period(), b.period());
                (v1 + v2, gcd(d1, d2))
            }
            EExpr::Pow(a, k) => {
                let (v, d) = a.period();
                (v * *k as usize, d)
            }
            EExpr::Q(a) | EExpr::E(a) => {
                let (v, d) = a.period();
                (0, gcd(v, d))
            }
            EExpr::L(a) | EExpr::E1(a) => {
                let (v, d) = a.period();
                (v, gcd(v, d))
            }
        }
    }
}

/// Exponents of the nonzero coefficients have gcd `d`.
pub(crate) fn support_gcd(p: &QPoly) -> usize {
    (1..p.coeffs().len()).filter(|&i| !p.coeff(i).is_zero()).fold(0, crate::arith::gcd)
}

impl fmt::Display for EExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EExpr::Poly(p) => write!(f, "Poly({})", p.to_string_asc("z")),
            EExpr::Z => f.write_str("z"),
            EExpr::Plus(a, b) => write!(f, "({a} + {b})"),
            EExpr::Times(a, b) => write!(f, "{a}*{b}"),
            EExpr::Pow(a, k) => write!(f, "Pow({a}, {k})"),
            EExpr::Q(a) => write!(f, "Q({a})"),
            EExpr::L(a) => write!(f, "L({a})"),
            EExpr::E(a) => write!(f, "E({a})"),
            EExpr::E1(a) => write!(f, "E1({a})"),
        }
    }
}

#[cfg(test)]
mod tests;
