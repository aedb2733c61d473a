//! Uniform random generation by the recursive method: every derivation
//! step is chosen with probability proportional to the number of
//! completions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_core::RngCore;

use super::{canonical_cycle, canonical_set, CombObject, EnumError};
use crate::arith::{binomial, factorial, random_below, random_subset};
use crate::counting::count_table;
use crate::spec::{Construct, Mode, SpecExpr, Specification};

/// A uniformly random object of `class` with `n` atoms.
///
/// Unlabeled multisets, powersets, cycles and substitutions are not
/// supported.
pub fn random_object<R: RngCore + ?Sized>(
    spec: &Specification,
    class: &str,
    n: usize,
    rng: &mut R,
) -> Result<CombObject, EnumError> {
    let idx = spec.index_of(class).ok_or_else(|| EnumError::UnknownClass(class.into()))?;
    check_supported(spec)?;
    let table = count_table(spec, n)?;
    let class_counts: Vec<Vec<BigUint>> = table
        .classes
        .iter()
        .map(|(_, v)| v.iter().map(|x| x.to_biguint().expect("counts are nonnegative")).collect())
        .collect();
    if class_counts[idx][n].is_zero() {
        return Err(EnumError::Empty { class: class.into(), n });
    }
    let mut s = Sampler { spec, labeled: spec.mode() == Mode::Labeled, class_counts, memo: BTreeMap::new() };
    Ok(s.sample(&SpecExpr::class(class), n, rng))
}

fn check_supported(spec: &Specification) -> Result<(), EnumError> {
    let mut bad = None;
    for (name, rhs) in spec.equations() {
        rhs.walk(&mut |e| {
            let unsupported = match e {
                SpecExpr::Construct { op, .. } => {
                    spec.mode() == Mode::Unlabeled && !matches!(op.resolve(Mode::Unlabeled), Construct::Seq)
                }
                SpecExpr::Subst { .. } => true,
                _ => false,
            };
            if unsupported && bad.is_none() {
                bad = Some(format!("random generation of `{e}` in class `{name}` ({} mode)", spec.mode()));
            }
        });
    }
    match bad {
        Some(m) => Err(EnumError::Unsupported(m)),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Expr,
    /// product of the factors starting at this one
    Suffix,
    /// exactly `j` components
    Comps(usize),
}

struct Sampler<'s> {
    spec: &'s Specification,
    labeled: bool,
    class_counts: Vec<Vec<BigUint>>,
    memo: BTreeMap<(usize, Key, usize), BigUint>,
}

fn addr(e: &SpecExpr) -> usize {
    e as *const SpecExpr as usize
}

fn pick<R: RngCore + ?Sized>(rng: &mut R, weights: &[BigUint]) -> usize {
    let total: BigUint = weights.iter().sum();
    let mut r = random_below(rng, &total);
    for (i, w) in weights.iter().enumerate() {
        if &r < w {
            return i;
        }
        r -= w;
    }
    unreachable!("weights sum to the total")
}

impl<'s> Sampler<'s> {
    fn split_weight(&self, n: usize, k: usize) -> BigUint {
        if self.labeled {
            binomial(n, k)
        } else {
            BigUint::one()
        }
    }

    fn count(&mut self, e: &'s SpecExpr, n: usize) -> BigUint {
        let key = (addr(e), Key::Expr, n);
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let c = match e {
            SpecExpr::Epsilon | SpecExpr::Marker { .. } => BigUint::from(u8::from(n == 0)),
            SpecExpr::Atom => BigUint::from(u8::from(n == 1)),
            SpecExpr::ClassRef { name } => self.class_counts[self.spec.index_of(name).unwrap()][n].clone(),
            SpecExpr::Union { args } => args.iter().map(|a| self.count(a, n)).sum(),
            SpecExpr::Prod { args } => self.suffix(args, n),
            SpecExpr::Construct { op, arg, restriction } => {
                let mut acc = BigUint::zero();
                for j in 0..=n {
                    if restriction.allows(j) {
                        acc += self.construct_count(op.resolve(self.spec.mode()), arg, j, n);
                    }
                }
                acc
            }
            SpecExpr::Subst { .. } => unreachable!("rejected before sampling"),
        };
        self.memo.insert(key, c.clone());
        c
    }

    fn construct_count(&mut self, op: Construct, arg: &'s SpecExpr, j: usize, n: usize) -> BigUint {
        let seqs = self.comps(arg, j, n);
        match op {
            Construct::Seq => seqs,
            Construct::Cycle if j == 0 => BigUint::zero(),
            Construct::Cycle => seqs / BigUint::from(j),
            _ => seqs / factorial(j),
        }
    }

    fn suffix(&mut self, args: &'s [SpecExpr], n: usize) -> BigUint {
        let Some((first, rest)) = args.split_first() else {
            return BigUint::from(u8::from(n == 0));
        };
        if rest.is_empty() {
            return self.count(first, n);
        }
        let key = (addr(first), Key::Suffix, n);
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let mut acc = BigUint::zero();
        for k in 0..=n {
            let a = self.count(first, k);
            if a.is_zero() {
                continue;
            }
            let b = self.suffix(rest, n - k);
            if !b.is_zero() {
                acc += self.split_weight(n, k) * a * b;
            }
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    /// Sequences of exactly `j` components of total size `n`.
    fn comps(&mut self, arg: &'s SpecExpr, j: usize, n: usize) -> BigUint {
        if j == 0 {
            return BigUint::from(u8::from(n == 0));
        }
        let key = (addr(arg), Key::Comps(j), n);
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let mut acc = BigUint::zero();
        for k in 1..=n {
            let a = self.count(arg, k);
            if a.is_zero() {
                continue;
            }
            let b = self.comps(arg, j - 1, n - k);
            if !b.is_zero() {
                acc += self.split_weight(n, k) * a * b;
            }
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    fn sample<R: RngCore + ?Sized>(&mut self, e: &'s SpecExpr, n: usize, rng: &mut R) -> CombObject {
        match e {
            SpecExpr::Epsilon => CombObject::Epsilon,
            SpecExpr::Atom => {
                if self.labeled {
                    CombObject::labeled_atom(1)
                } else {
                    CombObject::atom()
                }
            }
            SpecExpr::Marker { name } => CombObject::Marker { name: name.clone() },
            SpecExpr::ClassRef { name } => {
                let idx = self.spec.index_of(name).unwrap();
                match &self.spec.equations()[idx].1 {
                    SpecExpr::Atom => CombObject::named_atom(name, self.labeled.then_some(1)),
                    rhs => self.sample(rhs, n, rng),
                }
            }
            SpecExpr::Union { args } => {
                let w: Vec<BigUint> = args.iter().map(|a| self.count(a, n)).collect();
                let i = pick(rng, &w);
                self.sample(&args[i], n, rng)
            }
            SpecExpr::Prod { args } => CombObject::Tuple { children: self.sample_product(Factors::Args(args), n, rng) },
            SpecExpr::Construct { op, arg, restriction } => {
                let op = op.resolve(self.spec.mode());
                let w: Vec<BigUint> = (0..=n)
                    .map(|j| if restriction.allows(j) { self.construct_count(op, arg, j, n) } else { BigUint::zero() })
                    .collect();
                let j = pick(rng, &w);
                let children = self.sample_product(Factors::Repeat(arg, j), n, rng);
                match op {
                    Construct::Seq => CombObject::Seq { children },
                    Construct::Cycle => canonical_cycle(children, true),
                    _ => canonical_set(children, true),
                }
            }
            SpecExpr::Subst { .. } => unreachable!("rejected before sampling"),
        }
    }

    fn factors_count(&mut self, f: Factors<'s>, n: usize) -> BigUint {
        match f {
            Factors::Args(args) => self.suffix(args, n),
            Factors::Repeat(arg, j) => self.comps(arg, j, n),
        }
    }

    /// A uniform tuple over the factors with total size `n`, labels spread
    /// over `1..=n` when labeled.
    fn sample_product<R: RngCore + ?Sized>(&mut self, f: Factors<'s>, n: usize, rng: &mut R) -> Vec<CombObject> {
        let Some((first, rest)) = f.split() else {
            return Vec::new();
        };
        let w: Vec<BigUint> = (0..=n)
            .map(|k| {
                let a = self.count(first, k);
                if a.is_zero() {
                    return a;
                }
                let b = self.factors_count(rest, n - k);
                self.split_weight(n, k) * a * b
            })
            .collect();
        let k = pick(rng, &w);
        let head = self.sample(first, k, rng);
        let tail = self.sample_product(rest, n - k, rng);
        if !self.labeled {
            let mut out = vec![head];
            out.extend(tail);
            return out;
        }
        let all: Vec<usize> = (1..=n).collect();
        let inside = random_subset(rng, &all, k);
        let outside: Vec<usize> = all.iter().copied().filter(|l| !inside.contains(l)).collect();
        let mut out = vec![head.relabel(&inside)];
        out.extend(tail.iter().map(|t| t.relabel(&outside)));
        out
    }
}

#[derive(Clone, Copy)]
enum Factors<'s> {
    Args(&'s [SpecExpr]),
    Repeat(&'s SpecExpr, usize),
}

impl<'s> Factors<'s> {
    fn split(self) -> Option<(&'s SpecExpr, Factors<'s>)> {
        match self {
            Factors::Args(args) => args.split_first().map(|(a, rest)| (a, Factors::Args(rest))),
            Factors::Repeat(_, 0) => None,
            Factors::Repeat(a, j) => Some((a, Factors::Repeat(a, j - 1))),
        }
    }
}
