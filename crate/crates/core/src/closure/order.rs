use alloc::vec::Vec;

use hashbrown::HashSet;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::{AutExpr, Engine};

/// Outcome of testing `w^n = e` on portraits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderResult {
    /// `w^n` is trivial to this depth.
    IdentityToDepth(usize),
    /// `w^n` fixes every vertex above this level and moves one on it.
    DistinctAtLevel(usize),
}

pub fn order_to_depth(engine: &mut Engine, w: &AutExpr, n: i64, depth: usize) -> Result<OrderResult> {
    let node = engine.node(w, depth)?;
    let f = engine.forest_mut();
    let p = f.pow_i(node, n);
    Ok(match f.first_nontrivial_level(p) {
        None => OrderResult::IdentityToDepth(depth),
        Some(t) => OrderResult::DistinctAtLevel(t + 1),
    })
}

/// The level `j` with `z^m` in `Stab(j)` but not in `Stab(j + 1)`.
pub fn zeta(engine: &mut Engine, z: &AutExpr, depth: usize) -> Result<usize> {
    let m = engine.context().m as i64;
    match order_to_depth(engine, z, m, depth)? {
        OrderResult::IdentityToDepth(d) => Err(Error::Unbounded { depth: d as u32 }),
        OrderResult::DistinctAtLevel(l) => Ok(l - 1),
    }
}

/// Smallest `n` in `1..=cap` with every word's `n`-th power trivial to `depth`.
pub fn minimal_exponent(engine: &mut Engine, words: &[AutExpr], depth: usize, cap: u64) -> Result<Option<u64>> {
    let nodes = words.iter().map(|w| engine.node(w, depth)).collect::<Result<Vec<_>>>()?;
    let f = engine.forest_mut();
    let mut powers = nodes.clone();
    for n in 1..=cap {
        if powers.iter_mut().all(|p| f.is_identity(*p)) {
            return Ok(Some(n));
        }
        for (p, &base) in powers.iter_mut().zip(&nodes) {
            *p = f.mul(*p, base);
        }
    }
    Ok(None)
}

/// Exponent (least common multiple of element orders) of the permutation
/// group generated by `gens`, by listing the group.
pub fn group_exponent(gens: &[Permutation], cap: usize) -> Result<u64> {
    let Some(first) = gens.first() else {
        return Ok(1);
    };
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut stack = alloc::vec![Permutation::identity(first.degree())];
    seen.insert(stack[0].clone());
    let mut exp = 1u64;
    while let Some(p) = stack.pop() {
        exp = exp.lcm(&p.order());
        for g in gens {
            let q = p.then(g);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { what: "permutation group enumeration", cap });
                }
                stack.push(q);
            }
        }
    }
    Ok(exp)
}
