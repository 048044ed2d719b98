use alloc::vec::Vec;

use super::saturation::ClosureReport;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::{AutExpr, Context, System};

/// The state-closed system induced on the subtree over an invariant set of letters.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub system: System,
    /// The original 1-indexed letters, in the order they are relabelled `1..`.
    pub letters: Vec<u32>,
}

/// Restricts every element of a state-closed set to the subtree spanned by
/// `orbit` (1-indexed letters), relabelling the letters in increasing order.
///
/// The orbit must be invariant under every root permutation; then the states
/// at letters of the orbit are again elements, so the restricted recursion
/// closes up.
pub fn restrict_to_orbit(report: &ClosureReport, ctx: &Context, orbit: &[u32]) -> Result<Restriction> {
    let mut letters: Vec<u32> = orbit.to_vec();
    letters.sort_unstable();
    letters.dedup();
    let m = ctx.m;
    if letters.iter().any(|&y| y == 0 || y > m) {
        return Err(Error::Malformed("orbit letter outside the alphabet".into()));
    }
    if letters.len() < 2 {
        return Err(Error::Malformed("restriction needs at least two letters".into()));
    }
    let zero_based: Vec<u32> = letters.iter().map(|&y| y - 1).collect();
    let pos = |y: usize| zero_based.iter().position(|&x| x as usize == y);
    let sub = Context::new(letters.len() as u32, ctx.k, ctx.d, ctx.l)?;
    let mut sys = System::new(sub);
    let ids: Vec<_> =
        (0..report.elements.len()).map(|i| sys.declare(&ClosureReport::name(i))).collect::<Result<_>>()?;
    for (i, e) in report.elements.iter().enumerate() {
        let images = zero_based
            .iter()
            .map(|&y| pos(e.root.apply(y as usize)).map(|p| p as u32))
            .collect::<Option<Vec<u32>>>()
            .ok_or(Error::NotInvariant)?;
        let root = Permutation::from_images(images)?;
        let entries = zero_based.iter().map(|&y| AutExpr::gen(ids[e.states[y as usize]])).collect();
        sys.define(ids[i], root, Some(entries), None)?;
    }
    Ok(Restriction { system: sys, letters })
}
