//! Cycle index series, truncated at a fixed grade, with coefficients in
//! `Q[q]`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{SizeSet, SpeciesEnv, SpeciesError, SpeciesExpr};
use crate::arith::{integer_partitions, multiplicities};
use crate::cycle_poly::{CyclePoly, Monomial};
use crate::poly::QPoly;
use crate::polya::{cycle_index_closed, GroupKind};

type Grades = Vec<CyclePoly<QPoly>>;

/// Grades `0..=N` of a cycle index series.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleIndexSeries {
    grades: Grades,
}

impl CycleIndexSeries {
    pub fn n_max(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grade(&self, n: usize) -> &CyclePoly<QPoly> {
        &self.grades[n]
    }

    pub fn grades(&self) -> &[CyclePoly<QPoly>] {
        &self.grades
    }

    /// `s_1 -> z`, `s_i -> 0`: coefficients `f_n / n!`.
    pub fn egf(&self) -> Vec<QPoly> {
        self.grades.iter().enumerate().map(|(n, g)| g.coeff(&Monomial::var_pow_or_one(n))).collect()
    }

    /// `s_i -> z^i`: number of isomorphism types per size.
    pub fn isotypes(&self) -> Vec<QPoly> {
        self.grades.iter().map(CyclePoly::coeff_sum).collect()
    }

    /// Substitute a value for the weight variable.
    pub fn specialize(&self, q: &BigRational) -> Vec<CyclePoly> {
        self.grades
            .iter()
            .map(|g| {
                let mut out = CyclePoly::zero();
                for (m, c) in g.terms() {
                    out.add_term(m.clone(), c.eval(q));
                }
                out
            })
            .collect()
    }

    /// The grades with rational coefficients, if no weight occurs.
    pub fn unweighted(&self) -> Option<Vec<CyclePoly>> {
        let constant = self.grades.iter().all(|g| g.terms().all(|(_, c)| c.degree().unwrap_or(0) == 0));
        constant.then(|| self.specialize(&BigRational::zero()))
    }

    /// One string per grade.
    pub fn grade_strings(&self) -> Vec<String> {
        match self.unweighted() {
            Some(gs) => gs.iter().map(ToString::to_string).collect(),
            None => self.grades.iter().map(ToString::to_string).collect(),
        }
    }
}

fn zero_series(n: usize) -> Grades {
    vec![CyclePoly::zero(); n + 1]
}

fn lift(p: CyclePoly) -> CyclePoly<QPoly> {
    p.to_weighted()
}

fn symmetric(n: usize) -> CyclePoly {
    if n == 0 {
        CyclePoly::one()
    } else {
        cycle_index_closed(GroupKind::Symmetric, n).expect("n >= 1")
    }
}

fn predefined_grade(e: &SpeciesExpr, n: usize) -> CyclePoly {
    match e {
        SpeciesExpr::EmptySet if n == 0 => CyclePoly::one(),
        SpeciesExpr::Singleton if n == 1 => CyclePoly::var(1),
        SpeciesExpr::Set => symmetric(n),
        SpeciesExpr::Characteristic(k) if *k == n => symmetric(n),
        SpeciesExpr::LinearOrder => CyclePoly::term(Monomial::var_pow_or_one(n), BigRational::one()),
        SpeciesExpr::Cycle if n >= 1 => cycle_index_closed(GroupKind::Cyclic, n).expect("n >= 1"),
        SpeciesExpr::Permutation => {
            let mut z = CyclePoly::zero();
            for p in integer_partitions(n) {
                let exps = multiplicities(&p).iter().map(|&e| e as usize).collect::<Vec<_>>();
                z.add_term(Monomial::from_cycle_type(&exps), BigRational::one());
            }
            z
        }
        _ => CyclePoly::zero(),
    }
}

fn mul(a: &Grades, b: &Grades) -> Grades {
    let n = a.len() - 1;
    let mut out = zero_series(n);
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

/// `ψ_k`: `s_i -> s_{ik}` and `q -> q^k`.
fn adams(a: &Grades, k: usize) -> Grades {
    let n = a.len() - 1;
    let mut out = zero_series(n);
    for (g, x) in a.iter().enumerate() {
        if g * k > n {
            break;
        }
        out[g * k] = x.adams(k);
    }
    out
}

/// Plethysm `F ∘ G`: `s_i -> ψ_i(Z_G)`.
fn plethysm(f: &Grades, g: &Grades) -> Grades {
    let n = f.len() - 1;
    let mut one = zero_series(n);
    one[0] = CyclePoly::one();
    let mut powers: BTreeMap<(usize, u32), Grades> = BTreeMap::new();
    let mut out = zero_series(n);
    for grade in f {
        for (m, c) in grade.terms() {
            let mut term = one.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i + 1, e))
                    .or_insert_with(|| {
                        let base = adams(g, i + 1);
                        let mut acc = one.clone();
                        for _ in 0..e {
                            acc = mul(&acc, &base);
                        }
                        acc
                    })
                    .clone();
                term = mul(&term, &p);
            }
            for (k, t) in term.iter().enumerate() {
                if !t.is_zero() {
                    out[k] = out[k].add(&t.scale_coeff(c));
                }
            }
        }
    }
    out
}

struct Evaluator<'e> {
    env: &'e SpeciesEnv,
    n: usize,
    implicit: BTreeMap<String, Grades>,
}

impl Evaluator<'_> {
    fn eval(&self, e: &SpeciesExpr) -> Grades {
        let n = self.n;
        match e {
            SpeciesExpr::Sum(a, b) => self.eval(a).iter().zip(self.eval(b)).map(|(x, y)| x.add(&y)).collect(),
            SpeciesExpr::Product(a, b) => mul(&self.eval(a), &self.eval(b)),
            SpeciesExpr::Compose(a, b) => plethysm(&self.eval(a), &self.eval(b)),
            SpeciesExpr::Restrict(a, s) => {
                let mut x = self.eval(a);
                for (k, g) in x.iter_mut().enumerate() {
                    if !s.contains(k) {
                        *g = CyclePoly::zero();
                    }
                }
                x
            }
            SpeciesExpr::Weighted(a, k) => {
                let w = QPoly::monomial(BigRational::one(), *k as usize);
                self.eval(a).iter().map(|g| g.scale_coeff(&w)).collect()
            }
            SpeciesExpr::Implicit(name) => self.implicit.get(name).cloned().unwrap_or_else(|| zero_series(n)),
            SpeciesExpr::SetPartition => {
                let inner = SpeciesExpr::restrict(SpeciesExpr::Set, SizeSet::at_least(1));
                self.eval(&SpeciesExpr::compose(SpeciesExpr::Set, inner))
            }
            pre => (0..=n).map(|k| lift(predefined_grade(pre, k))).collect(),
        }
    }

    /// Iterate the implicit definitions from zero until nothing changes.
    fn solve(&mut self) {
        if self.env.defs.is_empty() {
            return;
        }
        let cap = (self.n + 2) * (self.env.defs.len() + 1);
        for _ in 0..cap {
            let next: BTreeMap<String, Grades> =
                self.env.defs.iter().map(|(name, body)| (name.clone(), self.eval(body))).collect();
            if next == self.implicit {
                return;
            }
            self.implicit = next;
        }
    }
}

/// Cycle index series of `f` through grade `n`, with implicit species taken
/// from `env`.
pub fn cycle_index_series(f: &SpeciesExpr, env: &SpeciesEnv, n: usize) -> Result<CycleIndexSeries, SpeciesError> {
    env.check()?;
    env.check_free(f)?;
    let mut ev = Evaluator { env, n, implicit: BTreeMap::new() };
    ev.solve();
    Ok(CycleIndexSeries { grades: ev.eval(f) })
}

pub fn egf(f: &SpeciesExpr, env: &SpeciesEnv, n: usize) -> Result<Vec<QPoly>, SpeciesError> {
    Ok(cycle_index_series(f, env, n)?.egf())
}

pub fn isotype_gf(f: &SpeciesExpr, env: &SpeciesEnv, n: usize) -> Result<Vec<QPoly>, SpeciesError> {
    Ok(cycle_index_series(f, env, n)?.isotypes())
}
