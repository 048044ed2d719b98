use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::adic::{PowerSeries, Relator};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::{AutExpr, Engine, Forest, NodeId};

/// Default cap on the size of the first-level group.
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// Discrete logarithms in the abelian first-level group `P(A)`, by listing
/// every product `prod sigma_i^(r_i)` with `0 <= r_i < ord(sigma_i)`.
#[derive(Clone, Debug)]
pub struct FirstLevelTable {
    orders: Vec<u64>,
    table: HashMap<Permutation, Vec<u64>>,
}

impl FirstLevelTable {
    pub fn new(roots: &[Permutation], cap: usize) -> Result<Self> {
        let m = roots.first().map_or(0, Permutation::degree);
        let orders: Vec<u64> = roots.iter().map(Permutation::order).collect();
        let total = orders.iter().try_fold(1usize, |acc, &o| acc.checked_mul(o as usize));
        if total.is_none_or(|t| t > cap) {
            return Err(Error::CapExceeded { what: "first-level group enumeration", cap });
        }
        let mut table = HashMap::new();
        let mut exps = vec![0u64; roots.len()];
        loop {
            let p = roots.iter().zip(&exps).fold(Permutation::identity(m), |acc, (s, &r)| acc.then(&s.pow(r as i64)));
            table.entry(p).or_insert_with(|| exps.clone());
            let mut i = 0;
            while i < exps.len() {
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == exps.len() {
                break;
            }
        }
        Ok(FirstLevelTable { orders, table })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Elements of the group.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn solve(&self, p: &Permutation) -> Result<&[u64]> {
        self.table.get(p).map(Vec::as_slice).ok_or(Error::PermSolveFail)
    }

    pub fn elements(&self) -> impl Iterator<Item = &Permutation> {
        self.table.keys()
    }
}

/// Coefficients `q_1, .., q_k` with `w = prod beta_i^(q_i)`, digits in `[0, ord(sigma_i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientVector {
    pub coeffs: Vec<PowerSeries>,
}

/// Common subtree at every vertex of level `t`, if all of them agree.
fn uniform_at(f: &Forest, n: NodeId, t: usize) -> Option<NodeId> {
    if t == 0 {
        return Some(n);
    }
    let mut common = None;
    for &c in f.children(n) {
        let u = uniform_at(f, c, t - 1)?;
        if *common.get_or_insert(u) != u {
            return None;
        }
    }
    common
}

/// Integer digits of the normal form of a depth-`L` node over generator
/// nodes of depth `L`, one row per generator and one column per level.
///
/// Level by level: the residual fixes level `t`, so (the group being
/// abelian and transitive) it is `gamma^(t)` with every level-`t` subtree
/// equal to `gamma`; the root of `gamma` is solved in `P(A)` and divided out.
pub fn peel_node(
    forest: &mut Forest,
    target: NodeId,
    gens: &[NodeId],
    table: &FirstLevelTable,
) -> Result<Vec<Vec<u64>>> {
    let depth = forest.depth(target);
    let mut levels: Vec<Vec<u64>> = Vec::with_capacity(depth);
    let mut residual = target;
    for t in 0..depth {
        let gamma = uniform_at(forest, residual, t).ok_or(Error::NotAbelian)?;
        let r = table.solve(forest.perm(gamma))?.to_vec();
        levels.push(r.clone());
        if r.iter().all(|&v| v == 0) {
            continue;
        }
        let mut prod = forest.identity(depth - t);
        for (i, &ri) in r.iter().enumerate() {
            if ri > 0 {
                let g = forest.truncate(gens[i], depth - t);
                let p = forest.pow_i(g, ri as i64);
                prod = forest.mul(prod, p);
            }
        }
        let lifted = forest.diag_pow(prod, t);
        let inv = forest.inv(lifted);
        residual = forest.mul(residual, inv);
    }
    if !forest.is_identity(residual) {
        return Err(Error::NotAbelian);
    }
    Ok((0..gens.len()).map(|i| levels.iter().map(|r| r[i]).collect()).collect())
}

/// Normal form of `w` over `gens` to depth `L`.
pub fn peel(engine: &mut Engine, w: &AutExpr, gens: &[AutExpr]) -> Result<CoefficientVector> {
    let ctx = engine.context();
    let target = engine.node(w, ctx.l)?;
    let nodes = gens.iter().map(|g| engine.node(g, ctx.l)).collect::<Result<Vec<_>>>()?;
    let roots: Vec<Permutation> = nodes.iter().map(|&n| engine.forest().perm(n).clone()).collect();
    let table = FirstLevelTable::new(&roots, DEFAULT_GROUP_CAP)?;
    let digits = peel_node(engine.forest_mut(), target, &nodes, &table)?;
    Ok(CoefficientVector { coeffs: digits.iter().map(|row| digit_series(&ctx, row)).collect() })
}

fn digit_series(ctx: &crate::tree::Context, row: &[u64]) -> PowerSeries {
    let ints: Vec<i64> = row.iter().map(|&v| v as i64).collect();
    ctx.series(&ints)
}

/// `prod beta_i^(q_i)`.
pub fn rebuild(gens: &[AutExpr], q: &CoefficientVector) -> AutExpr {
    gens.iter().zip(&q.coeffs).fold(AutExpr::identity(), |acc, (g, qi)| acc.mul(&g.pow_series(qi)))
}

/// Generators with their defining relations `beta_i^(m_i) = prod beta_j^(x p_ij)`
/// and the annihilator `r = (-1)^k det(x P - diag(m_i))`.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    pub generators: Vec<AutExpr>,
    pub roots: Vec<Permutation>,
    pub orders: Vec<u64>,
    /// `p_ij`, row `i` for generator `i`.
    pub relations: Vec<Vec<PowerSeries>>,
    pub annihilator: PowerSeries,
    pub depth: usize,
}

impl ModulePresentation {
    /// The word `beta_i^(-m_i) prod beta_j^(x p_ij)`, trivial when relation `i` holds.
    pub fn relation_word(&self, i: usize) -> AutExpr {
        let lhs = self.generators[i].pow_series(&PowerSeries::from_i64s(
            self.annihilator.modulus(),
            self.annihilator.precision(),
            self.annihilator.degree_bound(),
            &[self.orders[i] as i64],
        ));
        let rhs = self
            .generators
            .iter()
            .zip(&self.relations[i])
            .fold(AutExpr::identity(), |acc, (g, p)| acc.mul(&g.pow_series(&p.shift_up(1))));
        lhs.inv().mul(&rhs)
    }

    /// The relator split as `m - q x^j`, if it has that shape.
    pub fn relator(&self) -> Result<Relator> {
        Relator::new(&self.annihilator)
    }
}

/// Reads the relations off the normal forms of `beta_i^(m_i)`.
pub fn extract_relations(engine: &mut Engine, gens: &[AutExpr]) -> Result<ModulePresentation> {
    let ctx = engine.context();
    let depth = ctx.l;
    let nodes = gens.iter().map(|g| engine.node(g, depth)).collect::<Result<Vec<_>>>()?;
    let roots: Vec<Permutation> = nodes.iter().map(|&n| engine.forest().perm(n).clone()).collect();
    let table = FirstLevelTable::new(&roots, DEFAULT_GROUP_CAP)?;
    let orders = table.orders().to_vec();
    let mut relations = Vec::with_capacity(gens.len());
    for (i, &n) in nodes.iter().enumerate() {
        let f = engine.forest_mut();
        let power = f.pow_i(n, orders[i] as i64);
        let digits = peel_node(f, power, &nodes, &table)?;
        relations.push(digits.iter().map(|row| digit_series(&ctx, row).shift_down(1)).collect::<Vec<_>>());
    }
    let k = gens.len();
    let matrix: Vec<Vec<PowerSeries>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let xp = relations[i][j].shift_up(1);
                    if i == j {
                        xp.sub(&ctx.series(&[orders[i] as i64])).expect("shared context")
                    } else {
                        xp
                    }
                })
                .collect()
        })
        .collect();
    let det = determinant(&matrix)?;
    let annihilator = if k % 2 == 1 { det.neg() } else { det };
    Ok(ModulePresentation { generators: gens.to_vec(), roots, orders, relations, annihilator, depth })
}

/// Laplace expansion along the first row.
fn determinant(a: &[Vec<PowerSeries>]) -> Result<PowerSeries> {
    let k = a.len();
    if k > 8 {
        return Err(Error::CapExceeded { what: "determinant size", cap: 8 });
    }
    match k {
        0 => Err(Error::Malformed("empty generator list".into())),
        1 => Ok(a[0][0].clone()),
        _ => {
            let mut acc = a[0][0].sub(&a[0][0])?;
            for col in 0..k {
                if a[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<PowerSeries>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = a[0][col].mul(&determinant(&minor)?)?;
                acc = if col % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            Ok(acc)
        }
    }
}

/// Whether `w^r` is trivial to depth `L`.
pub fn annihilator_check(engine: &mut Engine, w: &AutExpr, r: &PowerSeries) -> Result<bool> {
    let l = engine.context().l;
    engine.is_identity_to_depth(&w.pow_series(r), l)
}
