//! Exact, truncated computation with abelian self-similar groups of
//! automorphisms of one-rooted `m`-ary trees.
//!
//! The crate is split the same way the mathematics is:
//!
//! - [`adic`]: truncated arithmetic in `Z_m`, `Z_m[[x]]` and the quotient
//!   rings `Z_m[[x]]/(m - q x^j)` (carry normal forms, congruence exponents).
//! - [`tree`]: automorphisms given by wreath recursions with power-series
//!   exponents, evaluated lazily into a hash-consed forest of truncated
//!   portraits.
//! - [`closure`]: state-closure saturation, the level-by-level normal form,
//!   relation extraction, torsion and `zeta` computations.
//! - [`repr`]: tree representations of finitely generated abelian groups from
//!   virtual endomorphisms, transversal changes and explicit conjugators to the
//!   generalized adding machines.
//!
//! Equality of automorphisms is always equality of portraits to a stated depth.
//! Nothing in this crate claims equality of infinite objects.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adic;
pub mod closure;
pub mod error;
pub mod perm;
pub mod repr;
pub mod tree;

pub use error::{Error, Result};
pub use perm::Permutation;
