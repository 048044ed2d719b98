use alloc::vec;
use alloc::vec::Vec;

use super::expr::{AutExpr, GenId};
use super::system::System;
use crate::adic::PowerSeries;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Adds the generalized adding machine `a = (e, .., e, a^(x^(j-1))) (1 2 .. m)`.
///
/// It satisfies `a^m = a^(x^j)`, and its states are `a, a^x, .., a^(x^(j-1))`.
pub fn adding_machine(system: &mut System, name: &str, j: usize) -> Result<GenId> {
    if j == 0 {
        return Err(Error::Malformed("adding machine needs j >= 1".into()));
    }
    let ctx = *system.context();
    let m = ctx.m as usize;
    let a = system.declare(name)?;
    let mut entries = vec![AutExpr::identity(); m];
    entries[m - 1] = AutExpr::gen(a).diagonal(j - 1);
    system.define(a, Permutation::full_cycle(m), Some(entries), None)?;
    Ok(a)
}

/// Adds `a = (a^(q_1), .., a^(q_m)) root`.
pub fn self_power_generator(system: &mut System, name: &str, root: Permutation, exps: &[PowerSeries]) -> Result<GenId> {
    let a = system.declare(name)?;
    let entries: Vec<AutExpr> = exps.iter().map(|q| AutExpr::gen(a).pow_series(q)).collect();
    system.define(a, root, Some(entries), None)?;
    Ok(a)
}
