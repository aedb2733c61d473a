//! Counting sequences, bivariate marker tables and generating-function
//! equations.

mod engine;
mod gf;
mod series;
mod weights;

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::spec::{check_well_defined, Mode, Specification, WellDefinedReport};
use engine::{Compiled, Engine};
use weights::{Marked, Plain};

pub use gf::{gf_equations, gf_solve_acyclic, GfEquation, GfExpr, PolyaOp, Solved};
pub use series::{series_coeffs, SeriesError};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CountError {
    #[error("specification is not well defined: {0}")]
    NotWellDefined(WellDefinedReport),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("classes {0:?} depend on themselves at equal size")]
    SameSizeCycle(Vec<String>),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown marker `{0}`")]
    UnknownMarker(String),
    #[error("no objects of size {0}")]
    NoObjects(usize),
}

/// Exact counts `a_0..a_N` for every class. Labeled counts are raw object
/// counts (the EGF coefficient times `n!`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub mode: Mode,
    pub n_max: usize,
    pub classes: Vec<(String, Vec<BigInt>)>,
}

impl CountTable {
    pub fn get(&self, class: &str) -> Option<&[BigInt]> {
        self.classes.iter().find(|(n, _)| n == class).map(|(_, v)| v.as_slice())
    }
}

/// `a(n, k)`: objects of size `n` carrying `k` markers, `k <= u_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateTable {
    pub marker: Option<String>,
    pub n_max: usize,
    pub u_max: usize,
    pub classes: Vec<(String, Vec<Vec<BigInt>>)>,
}

impl BivariateTable {
    pub fn get(&self, class: &str) -> Option<&[Vec<BigInt>]> {
        self.classes.iter().find(|(n, _)| n == class).map(|(_, v)| v.as_slice())
    }
}

/// Work done by a counting run: one unit per coefficient multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CountStats {
    pub ops: u64,
    pub nodes: usize,
}

fn ensure_well_defined(spec: &Specification) -> Result<(), CountError> {
    let report = check_well_defined(spec);
    if report.is_ok() {
        Ok(())
    } else {
        Err(CountError::NotWellDefined(report))
    }
}

pub fn count_table(spec: &Specification, n_max: usize) -> Result<CountTable, CountError> {
    count_table_with_stats(spec, n_max).map(|(t, _)| t)
}

pub fn count_table_with_stats(spec: &Specification, n_max: usize) -> Result<(CountTable, CountStats), CountError> {
    ensure_well_defined(spec)?;
    let compiled = Compiled::new(spec, n_max, None)?;
    let mut engine = Engine::new(&compiled, Plain, n_max);
    engine.run(n_max);
    let classes = spec
        .class_names()
        .zip(&compiled.class_nodes)
        .map(|(name, &node)| (String::from(name), engine.values[node].clone()))
        .collect();
    let stats = CountStats { ops: engine.ops, nodes: compiled.nodes.len() };
    Ok((CountTable { mode: spec.mode(), n_max, classes }, stats))
}

/// Bivariate counts tracking the first declared marker.
pub fn count_bivariate(spec: &Specification, n_max: usize, u_max: usize) -> Result<BivariateTable, CountError> {
    let marker = spec.markers().first().cloned();
    count_bivariate_for(spec, n_max, u_max, marker.as_deref())
}

/// Bivariate counts tracking `marker`; other markers only contribute
/// weight 1. With `None` every object lands in column 0.
pub fn count_bivariate_for(
    spec: &Specification,
    n_max: usize,
    u_max: usize,
    marker: Option<&str>,
) -> Result<BivariateTable, CountError> {
    ensure_well_defined(spec)?;
    if let Some(m) = marker {
        if !spec.markers().iter().any(|x| x == m) {
            return Err(CountError::UnknownMarker(m.into()));
        }
    }
    let compiled = Compiled::new(spec, n_max, marker)?;
    let mut engine = Engine::new(&compiled, Marked { cap: u_max }, n_max);
    engine.run(n_max);
    let classes = spec
        .class_names()
        .zip(&compiled.class_nodes)
        .map(|(name, &node)| (String::from(name), engine.values[node].clone()))
        .collect();
    Ok(BivariateTable { marker: marker.map(String::from), n_max, u_max, classes })
}

/// Mean number of markers over objects of size `n`: `Σ k a(n,k) / Σ a(n,k)`.
pub fn mean_marker(rows: &[Vec<BigInt>], n: usize) -> Result<BigRational, CountError> {
    let row = rows.get(n).ok_or(CountError::NoObjects(n))?;
    let total: BigInt = row.iter().sum();
    if total.is_zero() {
        return Err(CountError::NoObjects(n));
    }
    let weighted: BigInt = row.iter().enumerate().map(|(k, c)| c * BigInt::from(k)).sum();
    Ok(BigRational::new(weighted, total))
}

#[cfg(test)]
mod tests;
