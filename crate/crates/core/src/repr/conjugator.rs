use alloc::vec;
use alloc::vec::Vec;

use super::machine::{SelfSimilarMachine, Transversal, VirtualEndo};
use crate::adic::PowerSeries;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::{adding_machine, self_power_shape, AutExpr, Base, Context, Engine, GenId, Portrait, System};

/// Default cap on machine states written into a system.
pub const DEFAULT_MACHINE_CAP: usize = 100_000;

/// The representations for the transversals `x_i` and `h_i x_i`, both
/// written into one system, with the conjugators between them.
#[derive(Clone, Debug)]
pub struct TransversalChange {
    pub system: System,
    /// `e_k^phi` for the standard generators `e_k` of `G`.
    pub phi: Vec<GenId>,
    /// `e_k^phi'`.
    pub phi_prime: Vec<GenId>,
    /// `gamma gamma^(1) .. gamma^(L-1)` with `gamma = ((h_i)^(f phi'))_i`.
    pub lambda: AutExpr,
    /// The same product built from `h_i^-1` and `phi`.
    pub lambda_reverse: AutExpr,
    /// `g^phi' = lambda g^phi lambda^-1` on every generator, to depth `L`.
    pub forward_holds: bool,
    /// `g^phi' = lambda_reverse^-1 g^phi lambda_reverse` on every generator.
    pub reverse_holds: bool,
}

fn gamma_product(tuple: AutExpr, depth: usize) -> AutExpr {
    (0..depth).fold(AutExpr::identity(), |acc, n| acc.mul(&tuple.diagonal(n)))
}

/// Builds both representations and the conjugator `lambda` for the change of
/// transversal `x_i -> h_i x_i`, and checks the conjugation identity in both
/// orientations on portraits.
pub fn transversal_conjugator(
    endo: &VirtualEndo,
    t: &Transversal,
    h_list: &[Vec<i64>],
    ctx: Context,
) -> Result<TransversalChange> {
    let grp = endo.group();
    if h_list.len() != endo.index() {
        return Err(Error::BadTriple(alloc::format!("{} elements h_i for index {}", h_list.len(), endo.index())));
    }
    for h in h_list {
        if !endo.contains(h)? {
            return Err(Error::BadTriple(alloc::format!("{h:?} is not in H")));
        }
    }
    let new_reps = h_list.iter().zip(t.reps()).map(|(h, x)| grp.add(h, x)).collect::<Result<Vec<_>>>()?;
    let t_prime = Transversal::new(endo, new_reps)?;
    let depth = ctx.l;
    let basis = grp.basis();
    let f_h = h_list.iter().map(|h| endo.apply(h)).collect::<Result<Vec<_>>>()?;
    let f_h_inv = h_list.iter().map(|h| endo.apply(&grp.neg(h)?)).collect::<Result<Vec<_>>>()?;

    let mut system = System::new(ctx);
    let mut phi = SelfSimilarMachine::new(endo.clone(), t.clone());
    let mut seeds = basis.clone();
    seeds.extend(f_h_inv.iter().cloned());
    let old = phi.materialize(&mut system, "u", &seeds, depth, DEFAULT_MACHINE_CAP)?;
    let mut phi_p = SelfSimilarMachine::new(endo.clone(), t_prime);
    let mut seeds = basis.clone();
    seeds.extend(f_h.iter().cloned());
    let new = phi_p.materialize(&mut system, "v", &seeds, depth, DEFAULT_MACHINE_CAP)?;

    let k = basis.len();
    let gamma = AutExpr::tuple(new.seeds[k..].iter().map(|&g| AutExpr::gen(g)).collect());
    let lambda = gamma_product(gamma, depth);
    let gamma_rev = AutExpr::tuple(old.seeds[k..].iter().map(|&g| AutExpr::gen(g)).collect());
    let lambda_reverse = gamma_product(gamma_rev, depth);

    let mut engine = Engine::new(system);
    let mut forward_holds = true;
    let mut reverse_holds = true;
    for i in 0..k {
        let (a, b) = (AutExpr::gen(old.seeds[i]), AutExpr::gen(new.seeds[i]));
        let fwd = lambda.mul(&a).mul(&lambda.inv());
        forward_holds &= engine.equal_to_depth(&fwd, &b, depth)?;
        let rev = lambda_reverse.inv().mul(&a).mul(&lambda_reverse);
        reverse_holds &= engine.equal_to_depth(&rev, &b, depth)?;
    }
    Ok(TransversalChange {
        system: engine.system().clone(),
        phi: old.seeds[..k].to_vec(),
        phi_prime: new.seeds[..k].to_vec(),
        lambda,
        lambda_reverse,
        forward_holds,
        reverse_holds,
    })
}

/// One stage of the conjugator: the rooted part, the tuple of states and the
/// exponent `Q` with the stage solving `(beta^Q)^k = alpha`.
#[derive(Clone, Debug)]
pub struct ConjugatorStage {
    pub rooted: Permutation,
    pub tuple: Vec<AutExpr>,
    pub exponent: PowerSeries,
}

/// Conjugator `h` with `h^-1 beta h` the adding machine of `D_m(j)`, as a
/// product of stages, stage `n` sitting at diagonal shift `n j`.
#[derive(Clone, Debug)]
pub struct AddingMachineConjugator {
    pub stages: Vec<ConjugatorStage>,
    pub j: usize,
}

impl AddingMachineConjugator {
    pub fn expr(&self) -> AutExpr {
        self.stages.iter().enumerate().fold(AutExpr::identity(), |acc, (n, s)| {
            let stage = AutExpr::rooted(s.rooted.clone()).mul(&AutExpr::tuple(s.tuple.clone()));
            acc.mul(&stage.diagonal(n * self.j))
        })
    }
}

/// Exponent `q` when `w` is `e`, `beta` or `beta^q`.
fn exponent_of(ctx: &Context, w: &AutExpr, beta: GenId) -> Option<PowerSeries> {
    match w.factors() {
        [] => Some(ctx.zero()),
        [f] if f.base == Base::Gen(beta) => {
            let q = f.exp.clone().unwrap_or_else(|| ctx.one()).shift_up(f.shift);
            Some(if f.inverse { q.neg() } else { q })
        }
        _ => None,
    }
}

/// `rho` with `rho^-1 tau rho = sigma = (1 2 .. m)`, for a full cycle `tau`.
fn straighten(tau: &Permutation) -> Result<Permutation> {
    let m = tau.degree();
    let mut images = vec![0u32; m];
    let mut y = 0usize;
    for k in 0..m {
        if k > 0 && y == 0 {
            return Err(Error::BadTriple("root is not a full cycle".into()));
        }
        images[y] = k as u32;
        y = tau.apply(y);
    }
    if y != 0 {
        return Err(Error::BadTriple("root is not a full cycle".into()));
    }
    Permutation::from_images(images)
}

/// Builds the conjugator from `beta = (beta^(p_1), .., beta^(p_m)) tau`
/// (`tau` a full cycle) to `alpha = (e, .., e, alpha^(x^(j-1))) sigma`.
///
/// Each stage conjugates the root of `gamma = beta^Q` to `sigma`, then uses
/// `(e, gamma_1^-1, (gamma_1 gamma_2)^-1, ..)`; the product of the states is
/// `beta^(Q' x^(j-1))` and the next stage solves for `beta^(Q')`, one
/// diagonal shift of `j` further down. Requires `p_1 + .. + p_m = q x^(j-1)`
/// with `q` invertible.
pub fn prop4_conjugator(engine: &mut Engine, beta: GenId, j: usize) -> Result<AddingMachineConjugator> {
    if j == 0 {
        return Err(Error::BadTriple("j must be at least 1".into()));
    }
    let ctx = engine.context();
    let shape = self_power_shape(engine.system(), beta)?;
    straighten(&shape.root)?;
    let sum = shape.exps.iter().try_fold(ctx.zero(), |acc, p| acc.add(p))?;
    if (0..j - 1).any(|i| !sum.coeff(i).is_zero()) || !sum.coeff(j - 1).is_unit() {
        return Err(Error::NonUnitSum);
    }
    let q = sum.shift_down(j - 1);
    if !engine.abelian_normalization() && !engine.enable_abelian_normalization()? {
        return Err(Error::NotAbelian);
    }
    let mut stages = Vec::new();
    let mut exponent = ctx.one();
    let mut n = 0;
    while n * j < ctx.l {
        let gamma = AutExpr::gen_pow(beta, exponent.clone());
        let (tau, states) = engine.decompose(&gamma)?;
        let rho = straighten(&tau)?;
        let rho_inv = rho.inverse();
        let moved: Vec<AutExpr> = (0..ctx.m as usize).map(|y| states[rho_inv.apply(y)].clone()).collect();
        let mut tuple = Vec::with_capacity(moved.len());
        let mut prefix = AutExpr::identity();
        for s in &moved {
            tuple.push(engine.normalize(&prefix.inv()));
            prefix = engine.normalize(&prefix.mul(s));
        }
        let formal = moved
            .iter()
            .map(|s| exponent_of(&ctx, s, beta))
            .try_fold(ctx.zero(), |acc, p| p.map(|p| acc.add(&p).expect("shared context")));
        let next = match formal {
            Some(s) if (0..j - 1).all(|i| s.coeff(i).is_zero()) && s.coeff(j - 1).is_unit() => s.shift_down(j - 1),
            _ => exponent.mul(&q)?,
        };
        stages.push(ConjugatorStage { rooted: rho, tuple, exponent });
        exponent = next;
        n += 1;
    }
    Ok(AddingMachineConjugator { stages, j })
}

/// Whether `h^-1 beta h` equals the adding machine of `D_m(j)` to depth `L`.
pub fn conjugates_to_adding_machine(engine: &mut Engine, beta: GenId, h: &AutExpr, j: usize) -> Result<bool> {
    let ctx = engine.context();
    let conj = h.inv().mul(&AutExpr::gen(beta)).mul(h);
    let lhs = engine.portrait(&conj, ctx.l)?;
    Ok(lhs == adding_machine_portrait(ctx, j)?)
}

pub fn adding_machine_portrait(ctx: Context, j: usize) -> Result<Portrait> {
    let mut sys = System::new(ctx);
    let a = adding_machine(&mut sys, "alpha", j)?;
    Engine::new(sys).portrait(&AutExpr::gen(a), ctx.l)
}

/// `c_0 = 1, c_1 = q, c_n = 2 c_(n-2) + c_(n-1)` and
/// `c'_0 = 0, c'_n = c_(n-1) + c'_(n-1)`, for `n <= n_max`.
pub fn example3_sequences(q: &PowerSeries, n_max: usize) -> Result<(Vec<PowerSeries>, Vec<PowerSeries>)> {
    let one = PowerSeries::from_i64s(q.modulus(), q.precision(), q.degree_bound(), &[1]);
    let mut c = vec![one, q.clone()];
    while c.len() <= n_max {
        let n = c.len();
        let next = c[n - 2].scale_i64(2).add(&c[n - 1])?;
        c.push(next);
    }
    c.truncate(n_max + 1);
    let mut cp = vec![q.sub(q)?];
    for n in 1..=n_max {
        cp.push(c[n - 1].add(&cp[n - 1])?);
    }
    Ok((c, cp))
}

/// `prod_n (e, beta^(-c'_n))^(n)` for `n < depth`.
pub fn example3_closed_form(beta: GenId, q: &PowerSeries, depth: usize) -> Result<AutExpr> {
    let (_, cp) = example3_sequences(q, depth.saturating_sub(1))?;
    Ok(cp.iter().take(depth).enumerate().fold(AutExpr::identity(), |acc, (n, c)| {
        let t = AutExpr::tuple(vec![AutExpr::identity(), AutExpr::gen_pow(beta, c.neg())]);
        acc.mul(&t.diagonal(n))
    }))
}
