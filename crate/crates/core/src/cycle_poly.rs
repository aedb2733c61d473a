//! Sparse polynomials in the power-sum variables `s1, s2, ...`.
//!
//! Cycle indices of permutation groups use rational coefficients; cycle
//! index series of weighted species use coefficients in `Q[q]`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numeric::fmt_ratio;
use crate::poly::QPoly;

/// Exponent vector: entry `i` is the power of `s_{i+1}`. Trailing zeros are
/// always trimmed so that equal monomials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    /// `s_i^e` with `i` counted from 1.
    pub fn var_pow(i: usize, e: u32) -> Self {
        assert!(i >= 1, "power-sum variables start at s1");
        let mut v = vec![0; i];
        v[i - 1] = e;
        Self::new(v)
    }

    /// `s_1^n`, with `s_1^0 = 1`.
    pub fn var_pow_or_one(n: usize) -> Monomial {
        if n == 0 {
            Monomial::one()
        } else {
            Monomial::var_pow(1, n as u32)
        }
    }

    /// Monomial of a cycle type: `c[j]` cycles of length `j + 1`.
    pub fn from_cycle_type(c: &[usize]) -> Self {
        Self::new(c.iter().map(|&x| x as u32).collect())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Power of `s_i` (1-based).
    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// `Σ i·e_i`, the degree of the permutation this monomial records.
    pub fn grade(&self) -> usize {
        self.0.iter().enumerate().map(|(i, &e)| (i + 1) * e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0)).collect();
        Monomial::new(v)
    }

    /// `s_i -> s_{ik}`.
    pub fn adams(&self, k: usize) -> Monomial {
        if self.0.is_empty() || k == 1 {
            return self.clone();
        }
        let mut v = vec![0; self.0.len() * k];
        for (i, &e) in self.0.iter().enumerate() {
            v[(i + 1) * k - 1] = e;
        }
        Monomial::new(v)
    }

    /// `Π i^{e_i} e_i!`, the centralizer order of the cycle type.
    pub fn z_factor(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (i, &e) in self.0.iter().enumerate() {
            let base = BigInt::from(i + 1);
            for j in 1..=e {
                acc *= &base * BigInt::from(j);
            }
        }
        acc
    }

    fn render(&self) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("s{}", i + 1)),
                _ => parts.push(format!("s{}^{}", i + 1, e)),
            }
        }
        parts.join(" ")
    }
}

/// Coefficient rings usable in a [`CyclePoly`].
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: BigRational) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
    /// Action of the `k`-th Adams operation on the coefficient ring itself
    /// (identity on `Q`, `q -> q^k` on `Q[q]`).
    fn adams(&self, k: usize) -> Self;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: BigRational) -> Self {
        r
    }
    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
    fn adams(&self, _k: usize) -> Self {
        self.clone()
    }
}

impl Coeff for QPoly {
    fn zero() -> Self {
        QPoly::zero()
    }
    fn one() -> Self {
        QPoly::one()
    }
    fn is_zero(&self) -> bool {
        QPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: BigRational) -> Self {
        QPoly::constant(r)
    }
    fn scale(&self, r: &BigRational) -> Self {
        QPoly::scale(self, r)
    }
    fn adams(&self, k: usize) -> Self {
        QPoly::adams(self, k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CyclePoly<C: Coeff = BigRational> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for CyclePoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> CyclePoly<C> {
    pub fn zero() -> Self {
        CyclePoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::term(Monomial::one(), C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// The variable `s_i`, 1-based.
    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var_pow(i, 1), C::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(r));
        }
        out
    }

    pub fn scale_coeff(&self, k: &C) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(k));
        }
        out
    }

    /// `p_k[self]`: `s_i -> s_{ik}` together with the Adams action on the
    /// coefficients.
    pub fn adams(&self, k: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.adams(k), c.adams(k));
        }
        out
    }

    /// Keep only monomials of grade `n`.
    pub fn grade_part(&self, n: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.grade() == n {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// True when every monomial has grade `n`.
    pub fn is_homogeneous(&self, n: usize) -> bool {
        self.terms.keys().all(|m| m.grade() == n)
    }

    pub fn coeff_sum(&self) -> C {
        self.terms.values().fold(C::zero(), |a, c| a.add(c))
    }

    /// Evaluate by substituting a ring element for every `s_i`.
    ///
    /// `var(i)` gives the value of `s_i`; `lift` embeds coefficients.
    pub fn substitute<T, V, L, M>(&self, var: V, lift: L, mul: M, zero: T, one: T) -> T
    where
        T: Clone,
        V: Fn(usize) -> T,
        L: Fn(&C) -> T,
        M: Fn(&T, &T) -> T,
        T: core::ops::Add<Output = T>,
    {
        let mut powers: BTreeMap<(usize, u32), T> = BTreeMap::new();
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut term = lift(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let key = (i + 1, e);
                let value = match powers.get(&key) {
                    Some(v) => v.clone(),
                    None => {
                        let base = var(i + 1);
                        let mut p = one.clone();
                        for _ in 0..e {
                            p = mul(&p, &base);
                        }
                        powers.insert(key, p.clone());
                        p
                    }
                };
                term = mul(&term, &value);
            }
            acc = acc + term;
        }
        acc
    }
}

impl CyclePoly<BigRational> {
    /// Embed into the weighted coefficient ring.
    pub fn to_weighted(&self) -> CyclePoly<QPoly> {
        let mut out = CyclePoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), QPoly::constant(c.clone()));
        }
        out
    }

    /// Substitute `s_i -> a(t^i)`.
    pub fn inventory(&self, a: &QPoly) -> QPoly {
        self.substitute(|i| a.adams(i), |c| QPoly::constant(c.clone()), |x, y| x * y, QPoly::zero(), QPoly::one())
    }

    /// Substitute the same rational for every `s_i`.
    pub fn eval_all(&self, x: &BigRational) -> BigRational {
        self.substitute(
            |_| x.clone(),
            |c| c.clone(),
            |a, b| a * b,
            <BigRational as Zero>::zero(),
            <BigRational as One>::one(),
        )
    }

    fn common_denominator(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for CyclePoly<BigRational> {
    /// Numerators over a common denominator, monomials in descending
    /// lexicographic order: `(s1^4 + 2 s1^2 s2 + 3 s2^2 + 2 s4)/8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let den = self.common_denominator();
        let mut body = String::new();
        for (pos, (m, c)) in self.terms.iter().rev().enumerate() {
            let num: BigInt = (c * BigRational::from_integer(den.clone())).to_integer();
            let neg = num.is_negative();
            let abs = num.abs();
            if pos == 0 {
                if neg {
                    body.push('-');
                }
            } else {
                body.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render();
            if mono.is_empty() {
                body.push_str(&format!("{abs}"));
            } else if abs.is_one() {
                body.push_str(&mono);
            } else {
                body.push_str(&format!("{abs} {mono}"));
            }
        }
        if den.is_one() {
            f.write_str(&body)
        } else if self.terms.len() == 1 {
            write!(f, "{body}/{den}")
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

impl fmt::Display for CyclePoly<QPoly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mono = m.render();
            let constant = c.degree() == Some(0);
            let coeff = if constant { fmt_ratio(&c.coeff(0)) } else { format!("({})", c.to_string_desc("q")) };
            parts.push(match (mono.is_empty(), constant && c.coeff(0).is_one()) {
                (true, _) => coeff,
                (false, true) => mono,
                (false, false) => format!("{coeff}*{mono}"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use alloc::string::ToString;

    fn d4() -> CyclePoly {
        let mut z = CyclePoly::zero();
        z.add_term(Monomial::new(vec![4]), rational(1, 8));
        z.add_term(Monomial::new(vec![2, 1]), rational(2, 8));
        z.add_term(Monomial::new(vec![0, 2]), rational(3, 8));
        z.add_term(Monomial::new(vec![0, 0, 0, 1]), rational(2, 8));
        z
    }

    #[test]
    fn prints_with_common_denominator() {
        assert_eq!(d4().to_string(), "(s1^4 + 2 s1^2 s2 + 3 s2^2 + 2 s4)/8");
        let s1: CyclePoly = CyclePoly::var(1);
        assert_eq!(s1.pow(3).to_string(), "s1^3");
        assert_eq!(CyclePoly::<BigRational>::zero().to_string(), "0");
    }

    #[test]
    fn inventory_of_square_necklaces() {
        let b = d4().inventory(&QPoly::from_ints(&[1, 1]));
        assert_eq!(b, QPoly::from_ints(&[1, 1, 2, 1, 1]));
        assert_eq!(d4().eval_all(&rational(2, 1)), rational(6, 1));
    }

    #[test]
    fn adams_and_grades() {
        let m = Monomial::new(vec![2, 1]);
        assert_eq!(m.grade(), 4);
        assert_eq!(m.adams(2), Monomial::new(vec![0, 2, 0, 1]));
        assert_eq!(m.z_factor(), BigInt::from(2 * 2));
        assert!(d4().is_homogeneous(4));
        assert_eq!(d4().coeff_sum(), rational(1, 1));
    }

    #[test]
    fn weighted_display() {
        let mut p: CyclePoly<QPoly> = CyclePoly::var(1);
        p.add_term(Monomial::var_pow(2, 1), QPoly::from_ints(&[0, 1, 1]));
        assert_eq!(p.to_string(), "s1 + (q^2 + q)*s2");
    }
}
