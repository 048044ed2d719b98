//! Analysis of state-closed sets: saturation, orbit restriction, the
//! level-by-level normal form over a generating set, defining relations and
//! annihilators, torsion tests and `zeta`.
//!
//! Every verdict here is "to depth `L`".

mod order;
mod peel;
mod restrict;
mod saturation;

pub use order::{group_exponent, minimal_exponent, order_to_depth, zeta, OrderResult};
pub use peel::{
    annihilator_check, extract_relations, peel, peel_node, rebuild, CoefficientVector, FirstLevelTable,
    ModulePresentation, DEFAULT_GROUP_CAP,
};
pub use restrict::{restrict_to_orbit, Restriction};
pub use saturation::{state_closure, ClosureElement, ClosureReport, DEFAULT_STATE_CAP};
