//! Enumerative and analytic combinatorics.
//!
//! Specifications in a small symbolic-method language are turned into
//! counting sequences, generating-function equations, exhaustive listings
//! and uniform random objects. Alongside sit permutation groups with cycle
//! indices and Pólya inventories, combinatorial species with their
//! generating series, and first-order coefficient asymptotics for explicit
//! generating functions.
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod asymptotics;
pub mod counting;
pub mod cycle_poly;
pub mod enumerate;
pub mod numeric;
pub mod poly;
pub mod polya;
pub mod spec;
pub mod species;

pub use cycle_poly::CyclePoly;
pub use poly::QPoly;
