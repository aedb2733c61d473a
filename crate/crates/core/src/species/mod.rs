//! Combinatorial species: explicit structures with transport of structure,
//! cycle index series with weights in `Q[q]`, and the two specializations
//! (exponential and isomorphism-type generating series).

mod parse;
mod series;
mod structures;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use parse::parse_species;
pub use series::{cycle_index_series, egf, isotype_gf, CycleIndexSeries};
pub use structures::{structures, structures_with_cap, transport, Structure, DEFAULT_STRUCTURE_CAP};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpeciesError {
    #[error("label set of size {n} exceeds the cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("composition needs an inner species without structures on the empty set: {0}")]
    Composition(String),
    #[error("definition of `{0}` is not productive")]
    NonProductive(String),
    #[error("undefined species `{0}`")]
    Undefined(String),
    #[error("`{0}` is defined twice")]
    Duplicate(String),
    #[error("bijection does not match the structure's labels")]
    DomainMismatch,
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
}

/// Sizes `min..=max`, unbounded above when `max` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SizeSet {
    pub min: usize,
    pub max: Option<usize>,
}

impl SizeSet {
    pub fn at_least(min: usize) -> Self {
        SizeSet { min, max: None }
    }

    pub fn exactly(n: usize) -> Self {
        SizeSet { min: n, max: Some(n) }
    }

    pub fn contains(&self, n: usize) -> bool {
        n >= self.min && self.max.is_none_or(|m| n <= m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpeciesExpr {
    EmptySet,
    Singleton,
    Set,
    LinearOrder,
    Cycle,
    Permutation,
    SetPartition,
    Characteristic(usize),
    Sum(Box<SpeciesExpr>, Box<SpeciesExpr>),
    Product(Box<SpeciesExpr>, Box<SpeciesExpr>),
    Compose(Box<SpeciesExpr>, Box<SpeciesExpr>),
    Restrict(Box<SpeciesExpr>, SizeSet),
    /// Every structure weighted by an extra `q^k`.
    Weighted(Box<SpeciesExpr>, u32),
    Implicit(String),
}

impl SpeciesExpr {
    pub fn sum(a: SpeciesExpr, b: SpeciesExpr) -> Self {
        SpeciesExpr::Sum(a.into(), b.into())
    }

    pub fn product(a: SpeciesExpr, b: SpeciesExpr) -> Self {
        SpeciesExpr::Product(a.into(), b.into())
    }

    pub fn compose(outer: SpeciesExpr, inner: SpeciesExpr) -> Self {
        SpeciesExpr::Compose(outer.into(), inner.into())
    }

    pub fn restrict(a: SpeciesExpr, sizes: SizeSet) -> Self {
        SpeciesExpr::Restrict(a.into(), sizes)
    }

    pub fn weighted(a: SpeciesExpr, k: u32) -> Self {
        SpeciesExpr::Weighted(a.into(), k)
    }

    pub fn implicit(name: &str) -> Self {
        SpeciesExpr::Implicit(name.into())
    }

    /// The predefined species, by their names in the text syntax.
    pub fn predefined() -> Vec<(&'static str, SpeciesExpr)> {
        alloc::vec![
            ("EmptySet", SpeciesExpr::EmptySet),
            ("Singleton", SpeciesExpr::Singleton),
            ("Set", SpeciesExpr::Set),
            ("LinearOrder", SpeciesExpr::LinearOrder),
            ("Cycle", SpeciesExpr::Cycle),
            ("Permutation", SpeciesExpr::Permutation),
            ("SetPartition", SpeciesExpr::SetPartition),
        ]
    }
}

impl fmt::Display for SpeciesExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpeciesExpr::EmptySet => f.write_str("EmptySet"),
            SpeciesExpr::Singleton => f.write_str("Singleton"),
            SpeciesExpr::Set => f.write_str("Set"),
            SpeciesExpr::LinearOrder => f.write_str("LinearOrder"),
            SpeciesExpr::Cycle => f.write_str("Cycle"),
            SpeciesExpr::Permutation => f.write_str("Permutation"),
            SpeciesExpr::SetPartition => f.write_str("SetPartition"),
            SpeciesExpr::Characteristic(n) => write!(f, "Char({n})"),
            SpeciesExpr::Sum(a, b) => write!(f, "Sum({a}, {b})"),
            SpeciesExpr::Product(a, b) => write!(f, "Prod({a}, {b})"),
            SpeciesExpr::Compose(a, b) => write!(f, "Compose({a}, {b})"),
            SpeciesExpr::Restrict(a, s) => match s.max {
                Some(m) => write!(f, "Restrict({a}, {}, {m})", s.min),
                None => write!(f, "Restrict({a}, {})", s.min),
            },
            SpeciesExpr::Weighted(a, k) => write!(f, "Weight({a}, {k})"),
            SpeciesExpr::Implicit(name) => f.write_str(name),
        }
    }
}

/// Bindings for implicitly defined species.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpeciesEnv {
    defs: BTreeMap<String, SpeciesExpr>,
}

impl SpeciesEnv {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bind `name` to `body` and check that the definitions stay productive.
    pub fn define(&mut self, name: &str, body: SpeciesExpr) -> Result<(), SpeciesError> {
        if self.defs.contains_key(name) {
            return Err(SpeciesError::Duplicate(name.into()));
        }
        self.defs.insert(name.into(), body);
        if let Err(e) = self.check() {
            self.defs.remove(name);
            return Err(e);
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&SpeciesExpr> {
        self.defs.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    /// Least possible structure size (`None` if there are no structures),
    /// as a fixed point over the definitions.
    pub(crate) fn min_sizes(&self) -> BTreeMap<String, Option<usize>> {
        let mut m: BTreeMap<String, Option<usize>> = self.defs.keys().map(|k| (k.clone(), None)).collect();
        loop {
            let mut changed = false;
            for (name, body) in &self.defs {
                let v = min_size(body, &m);
                if v != m[name] {
                    m.insert(name.clone(), v);
                    changed = true;
                }
            }
            if !changed {
                return m;
            }
        }
    }

    /// Reject unknown names, compositions with structures on the empty set,
    /// and recursions that do not increase size.
    pub fn check(&self) -> Result<(), SpeciesError> {
        let sizes = self.min_sizes();
        for body in self.defs.values() {
            self.check_expr(body, &sizes)?;
        }
        // same-size dependency graph must be acyclic
        let deps: BTreeMap<&str, Vec<String>> =
            self.defs.iter().map(|(k, b)| (k.as_str(), same_size_refs(b, &sizes))).collect();
        let mut state: BTreeMap<&str, u8> = BTreeMap::new();
        fn visit<'a>(
            n: &'a str,
            deps: &'a BTreeMap<&str, Vec<String>>,
            state: &mut BTreeMap<&'a str, u8>,
        ) -> Result<(), SpeciesError> {
            match state.get(n) {
                Some(2) => return Ok(()),
                Some(1) => return Err(SpeciesError::NonProductive(n.into())),
                _ => {}
            }
            state.insert(n, 1);
            for d in &deps[n] {
                let key = deps.get_key_value(d.as_str()).unwrap().0;
                visit(key, deps, state)?;
            }
            state.insert(n, 2);
            Ok(())
        }
        for n in deps.keys() {
            visit(n, &deps, &mut state)?;
        }
        Ok(())
    }

    pub(crate) fn check_expr(
        &self,
        e: &SpeciesExpr,
        sizes: &BTreeMap<String, Option<usize>>,
    ) -> Result<(), SpeciesError> {
        match e {
            SpeciesExpr::Implicit(n) if !self.defs.contains_key(n) => Err(SpeciesError::Undefined(n.clone())),
            SpeciesExpr::Sum(a, b) | SpeciesExpr::Product(a, b) => {
                self.check_expr(a, sizes)?;
                self.check_expr(b, sizes)
            }
            SpeciesExpr::Compose(a, b) => {
                if min_size(b, sizes) == Some(0) {
                    return Err(SpeciesError::Composition(alloc::format!("{b}")));
                }
                self.check_expr(a, sizes)?;
                self.check_expr(b, sizes)
            }
            SpeciesExpr::Restrict(a, _) | SpeciesExpr::Weighted(a, _) => self.check_expr(a, sizes),
            _ => Ok(()),
        }
    }

    /// Check a free-standing expression against these bindings.
    pub fn check_free(&self, e: &SpeciesExpr) -> Result<(), SpeciesError> {
        self.check_expr(e, &self.min_sizes())
    }
}

fn add(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    Some(a? + b?)
}

pub(crate) fn min_size(e: &SpeciesExpr, env: &BTreeMap<String, Option<usize>>) -> Option<usize> {
    match e {
        SpeciesExpr::EmptySet | SpeciesExpr::Set | SpeciesExpr::LinearOrder => Some(0),
        SpeciesExpr::Permutation | SpeciesExpr::SetPartition => Some(0),
        SpeciesExpr::Singleton | SpeciesExpr::Cycle => Some(1),
        SpeciesExpr::Characteristic(n) => Some(*n),
        SpeciesExpr::Sum(a, b) => match (min_size(a, env), min_size(b, env)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        },
        SpeciesExpr::Product(a, b) => add(min_size(a, env), min_size(b, env)),
        SpeciesExpr::Compose(a, b) => match min_size(a, env)? {
            0 => Some(0),
            k => Some(k * min_size(b, env)?),
        },
        SpeciesExpr::Restrict(a, s) => {
            let m = min_size(a, env)?.max(s.min);
            if s.max.is_some_and(|x| x < m) {
                None
            } else {
                Some(m)
            }
        }
        SpeciesExpr::Weighted(a, _) => min_size(a, env),
        SpeciesExpr::Implicit(n) => env.get(n).copied().flatten(),
    }
}

/// Implicit names whose structures can occur at the same size as the
/// structures of `e`.
fn same_size_refs(e: &SpeciesExpr, sizes: &BTreeMap<String, Option<usize>>) -> Vec<String> {
    let mut out = Vec::new();
    fn go(e: &SpeciesExpr, sizes: &BTreeMap<String, Option<usize>>, out: &mut Vec<String>) {
        match e {
            SpeciesExpr::Implicit(n) => out.push(n.clone()),
            SpeciesExpr::Sum(a, b) => {
                go(a, sizes, out);
                go(b, sizes, out);
            }
            SpeciesExpr::Product(a, b) => {
                if min_size(b, sizes) == Some(0) {
                    go(a, sizes, out);
                }
                if min_size(a, sizes) == Some(0) {
                    go(b, sizes, out);
                }
            }
            SpeciesExpr::Compose(a, b) => {
                // a single block covers everything when the outer species has
                // structures of size one; an inner size of one keeps the
                // outer size
                if can_have_size(a, 1, sizes) {
                    go(b, sizes, out);
                }
                if min_size(b, sizes) == Some(1) {
                    go(a, sizes, out);
                }
            }
            SpeciesExpr::Restrict(a, _) | SpeciesExpr::Weighted(a, _) => go(a, sizes, out),
            _ => {}
        }
    }
    go(e, sizes, &mut out);
    out
}

/// Conservative test for structures of size exactly `n`.
fn can_have_size(e: &SpeciesExpr, n: usize, sizes: &BTreeMap<String, Option<usize>>) -> bool {
    match e {
        SpeciesExpr::EmptySet => n == 0,
        SpeciesExpr::Singleton => n == 1,
        SpeciesExpr::Characteristic(k) => n == *k,
        SpeciesExpr::Cycle => n >= 1,
        SpeciesExpr::Restrict(a, s) => s.contains(n) && can_have_size(a, n, sizes),
        _ => min_size(e, sizes).is_some_and(|m| m <= n),
    }
}

#[cfg(test)]
mod tests;
