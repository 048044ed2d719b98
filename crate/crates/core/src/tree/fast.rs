use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use super::expr::{AutExpr, Base, GenId};
use super::system::System;
use crate::adic::PowerSeries;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Generator `a = (a^(q_1), .., a^(q_m)) root` whose entries are powers of itself.
#[derive(Clone, Debug)]
pub struct SelfPowerShape {
    pub root: Permutation,
    pub exps: Vec<PowerSeries>,
}

/// Reads off the exponents `q_y` if every entry of `g` is `e` or a single
/// power `g^(q)`, possibly shifted or inverted.
pub fn self_power_shape(system: &System, g: GenId) -> Result<SelfPowerShape> {
    let def = system.get(g)?;
    let entries = def.entries.as_ref().ok_or(Error::DepthExceeded { requested: 1, available: 0 })?;
    let ctx = system.context();
    let exps = entries
        .iter()
        .map(|w: &AutExpr| match w.factors() {
            [] => Ok(ctx.zero()),
            [f] if f.base == Base::Gen(g) => {
                let q = f.exp.clone().unwrap_or_else(|| ctx.one()).shift_up(f.shift);
                Ok(if f.inverse { q.neg() } else { q })
            }
            _ => Err(Error::Malformed(alloc::format!("entry of {} is not a power of it", def.name))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SelfPowerShape { root: def.root.clone(), exps })
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&i| b[i as usize]).collect()
}

fn power(p: &[u32], e: &BigUint) -> Vec<u32> {
    let mut acc: Vec<u32> = (0..p.len() as u32).collect();
    for i in (0..e.bits()).rev() {
        acc = compose(&acc, &acc);
        if e.bit(i) {
            acc = compose(&acc, p);
        }
    }
    acc
}

/// Level permutations `sigma(0), .., sigma(l)` computed by the recursion
/// `sigma(n) = (sigma(n-1)^(q_1), .., sigma(n-1)^(q_m)) sigma`, where on level
/// `n - 1` the power `a^q` acts as `prod_i` of `sigma(n-1-i)^(q_i mod m^(n-1-i))`
/// applied to the suffix after the first `i` letters.
///
/// Vertices are indexed as in [`Forest::level_permutation`](super::Forest::level_permutation).
/// This never builds a portrait; it is an independent check on the forest.
pub fn level_perm_fast(shape: &SelfPowerShape, l: usize) -> Result<Vec<u32>> {
    let m = shape.root.degree();
    if shape.root.cycles().first().map(Vec::len) != Some(m) {
        return Err(Error::Malformed("root is not a full cycle".into()));
    }
    let mut sig: Vec<Vec<u32>> = vec![vec![0]];
    for n in 1..=l {
        let below = n - 1;
        let block = m.pow(below as u32);
        // permutation of a^(q_y) on level n-1, for each letter y
        let state_perms: Vec<Vec<u32>> = shape
            .exps
            .iter()
            .map(|q| {
                let mut acc: Vec<u32> = (0..block as u32).collect();
                for i in 0..below.min(q.degree_bound() + 1) {
                    let c = q.coeff(i);
                    if c.is_zero() {
                        continue;
                    }
                    let suffix_len = below - i;
                    let e = c.low_digits(suffix_len);
                    let p = power(&sig[suffix_len], &e);
                    let suffix = m.pow(suffix_len as u32);
                    let lifted: Vec<u32> = (0..block)
                        .map(|v| {
                            let (prefix, rest) = (v / suffix, v % suffix);
                            (prefix * suffix) as u32 + p[rest]
                        })
                        .collect();
                    acc = compose(&acc, &lifted);
                }
                acc
            })
            .collect();
        let images: Vec<u32> = (0..m * block)
            .map(|v| {
                let (y, rest) = (v / block, v % block);
                (shape.root.apply(y) * block) as u32 + state_perms[y][rest]
            })
            .collect();
        sig.push(images);
    }
    Ok(sig.pop().expect("level l"))
}
