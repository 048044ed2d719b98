//! Tree automorphisms given by wreath recursions with power-series exponents.
//!
//! Words ([`AutExpr`]) over the generators of a [`System`] are evaluated
//! lazily by an [`Engine`] into depth-truncated portraits held in a
//! hash-consed [`Forest`]. Vertices are words over the 0-indexed alphabet
//! `0..m`; permutations act on the right.

mod engine;
mod expr;
mod fast;
mod forest;
mod machines;
mod portrait;
mod system;

pub use engine::{Decomposition, Engine, DEFAULT_NODE_CAP};
pub use expr::{AutExpr, Base, Factor, GenId};
pub use fast::{level_perm_fast, self_power_shape, SelfPowerShape};
pub use forest::{Forest, NodeId};
pub use machines::{adding_machine, self_power_generator};
pub use portrait::Portrait;
pub use system::{Context, GenDef, Shown, System};
