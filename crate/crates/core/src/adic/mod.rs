//! Truncated `m`-adic integers, power series over them, and the quotient
//! rings `Z_m[[x]]/(m - q x^j)`.

mod madic;
mod quotient;
mod series;
mod structure;

pub use madic::{power, MAdicInt};
pub use quotient::{reduce_mod_r, QuotientElement, Relator};
pub use series::PowerSeries;
pub use structure::{
    congruence_exponent, pro_m_generators, unit_decompose, CongruenceExponent, Modulus, UnitDecomposition,
};
