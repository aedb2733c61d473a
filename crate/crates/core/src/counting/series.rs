//! Exact truncated power series for explicit generating functions.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gf::{GfExpr, PolyaOp};
use crate::arith::{divisors, factorial, totient};
use crate::spec::Restriction;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("{0} applied to a series with nonzero constant term")]
    NonZeroConstant(&'static str),
    #[error("class `{0}` is not explicit")]
    Unresolved(String),
}

type S = Vec<BigRational>;

fn int(k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

fn zeros(n: usize) -> S {
    vec![BigRational::zero(); n + 1]
}

fn constant(c: BigRational, n: usize) -> S {
    let mut s = zeros(n);
    s[0] = c;
    s
}

fn add(a: &S, b: &S) -> S {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &S, b: &S) -> S {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(a: &S, c: &BigRational) -> S {
    a.iter().map(|x| x * c).collect()
}

fn mul(a: &S, b: &S) -> S {
    let n = a.len() - 1;
    let mut out = zeros(n);
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn pow(a: &S, k: usize) -> S {
    let mut acc = constant(BigRational::one(), a.len() - 1);
    for _ in 0..k {
        acc = mul(&acc, a);
    }
    acc
}

fn require_zero_constant(a: &S, op: &'static str) -> Result<(), SeriesError> {
    if a[0].is_zero() {
        Ok(())
    } else {
        Err(SeriesError::NonZeroConstant(op))
    }
}

/// `1/(1-a)`
fn quasi_inverse(a: &S) -> S {
    let n = a.len() - 1;
    let mut g = zeros(n);
    g[0] = BigRational::one();
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for k in 1..=m {
            acc += &a[k] * &g[m - k];
        }
        g[m] = acc;
    }
    g
}

/// `log 1/(1-a)` from `h' = a' / (1-a)`.
fn log_quasi_inverse(a: &S) -> S {
    let n = a.len() - 1;
    let q = quasi_inverse(a);
    let mut h = zeros(n);
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for k in 1..=m {
            acc += int(k) * &a[k] * &q[m - k];
        }
        h[m] = acc / int(m);
    }
    h
}

/// `exp(a)` from `e' = a' e`.
fn exp(a: &S) -> S {
    let n = a.len() - 1;
    let mut e = zeros(n);
    e[0] = BigRational::one();
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for k in 1..=m {
            acc += int(k) * &a[k] * &e[m - k];
        }
        e[m] = acc / int(m);
    }
    e
}

/// `a(z^k)`
fn adams(a: &S, k: usize) -> S {
    let n = a.len() - 1;
    let mut out = zeros(n);
    for (i, x) in a.iter().enumerate() {
        if i * k > n {
            break;
        }
        out[i * k] = x.clone();
    }
    out
}

/// Components-counted parts `P_0..P_kmax` of a Pólya construction.
fn polya_parts(op: PolyaOp, a: &S, kmax: usize) -> Vec<S> {
    let n = a.len() - 1;
    let mut parts = vec![constant(BigRational::one(), n)];
    if op == PolyaOp::Cycle {
        parts[0] = zeros(n);
        for k in 1..=kmax {
            let mut acc = zeros(n);
            for d in divisors(k) {
                let t = adams(&pow(a, k / d), d);
                acc = add(&acc, &scale(&t, &int(totient(d))));
            }
            parts.push(scale(&acc, &BigRational::new(BigInt::one(), BigInt::from(k))));
        }
        return parts;
    }
    for k in 1..=kmax {
        let mut acc = zeros(n);
        for j in 1..=k {
            let t = mul(&adams(a, j), &parts[k - j]);
            if op == PolyaOp::PowerSet && j % 2 == 0 {
                acc = sub(&acc, &t);
            } else {
                acc = add(&acc, &t);
            }
        }
        parts.push(scale(&acc, &BigRational::new(BigInt::one(), BigInt::from(k))));
    }
    parts
}

fn polya_full(op: PolyaOp, a: &S) -> S {
    let n = a.len() - 1;
    let mut acc = zeros(n);
    match op {
        PolyaOp::Cycle => {
            let l = log_quasi_inverse(a);
            for k in 1..=n.max(1) {
                let t = adams(&l, k);
                acc = add(&acc, &scale(&t, &BigRational::new(BigInt::from(totient(k)), BigInt::from(k))));
            }
            acc
        }
        _ => {
            for j in 1..=n.max(1) {
                let mut c = BigRational::new(BigInt::one(), BigInt::from(j));
                if op == PolyaOp::PowerSet && j % 2 == 0 {
                    c = -c;
                }
                acc = add(&acc, &scale(&adams(a, j), &c));
            }
            exp(&acc)
        }
    }
}

fn polya(op: PolyaOp, a: &S, r: Restriction) -> S {
    let n = a.len() - 1;
    match r {
        Restriction::None => polya_full(op, a),
        Restriction::Eq(k) => {
            if k > n {
                zeros(n)
            } else {
                polya_parts(op, a, k).pop().unwrap()
            }
        }
        Restriction::Le(k) => polya_parts(op, a, k.min(n)).iter().fold(zeros(n), |acc, p| add(&acc, p)),
        Restriction::Ge(k) => {
            let full = polya_full(op, a);
            let small = polya_parts(op, a, k.saturating_sub(1).min(n));
            let small = if k == 0 { zeros(n) } else { small.iter().fold(zeros(n), |acc, p| add(&acc, p)) };
            sub(&full, &small)
        }
    }
}

/// `Σ_k outer_k inner^k`, with `inner(0) = 0`.
fn compose(outer: &S, inner: &S) -> S {
    let n = outer.len() - 1;
    let mut acc = zeros(n);
    let mut p = constant(BigRational::one(), n);
    for o in outer.iter() {
        if !o.is_zero() {
            acc = add(&acc, &scale(&p, o));
        }
        p = mul(&p, inner);
    }
    acc
}

fn eval(e: &GfExpr, n: usize) -> Result<S, SeriesError> {
    Ok(match e {
        GfExpr::One => constant(BigRational::one(), n),
        GfExpr::Marker(_) => constant(BigRational::one(), n),
        GfExpr::Const(c) => constant(c.clone(), n),
        GfExpr::Z => {
            let mut s = zeros(n);
            if n >= 1 {
                s[1] = BigRational::one();
            }
            s
        }
        GfExpr::Class(name) => return Err(SeriesError::Unresolved(name.clone())),
        GfExpr::Add(ps) => {
            let mut acc = zeros(n);
            for p in ps {
                acc = add(&acc, &eval(p, n)?);
            }
            acc
        }
        GfExpr::Mul(ps) => {
            let mut acc = constant(BigRational::one(), n);
            for p in ps {
                acc = mul(&acc, &eval(p, n)?);
            }
            acc
        }
        GfExpr::Pow(b, k) => pow(&eval(b, n)?, *k),
        GfExpr::Q(x) => {
            let a = eval(x, n)?;
            require_zero_constant(&a, "Q")?;
            quasi_inverse(&a)
        }
        GfExpr::L { arg, min } => {
            let a = eval(arg, n)?;
            require_zero_constant(&a, "L")?;
            let mut l = log_quasi_inverse(&a);
            for j in 1..*min {
                l = sub(&l, &scale(&pow(&a, j), &BigRational::new(BigInt::one(), BigInt::from(j))));
            }
            l
        }
        GfExpr::E { arg, min } => {
            let a = eval(arg, n)?;
            require_zero_constant(&a, "E")?;
            let mut e = exp(&a);
            for j in 0..*min {
                let c = BigRational::new(BigInt::one(), BigInt::from(factorial(j)));
                e = sub(&e, &scale(&pow(&a, j), &c));
            }
            e
        }
        GfExpr::Polya { op, arg, restriction } => {
            let a = eval(arg, n)?;
            require_zero_constant(&a, op_name(*op))?;
            polya(*op, &a, *restriction)
        }
        GfExpr::Subst { outer, inner } => {
            let i = eval(inner, n)?;
            require_zero_constant(&i, "Subst")?;
            compose(&eval(outer, n)?, &i)
        }
    })
}

fn op_name(op: PolyaOp) -> &'static str {
    match op {
        PolyaOp::MultiSet => "MSet",
        PolyaOp::PowerSet => "PSet",
        PolyaOp::Cycle => "Cyc",
    }
}

/// Maclaurin coefficients `c_0..c_n` of an explicit expression. Markers
/// evaluate to 1.
pub fn series_coeffs(e: &GfExpr, n: usize) -> Result<Vec<BigRational>, SeriesError> {
    eval(e, n)
}
