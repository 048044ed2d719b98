//! Built-in verification suites behind `verify <suite>`.
//!
//! Each suite rebuilds a worked example or a property from scratch with its
//! own context and reports one check per identity.

use selfsim_core::adic::{pro_m_generators, PowerSeries, Relator};
use selfsim_core::closure::{
    extract_relations, group_exponent, minimal_exponent, peel, rebuild, restrict_to_orbit, state_closure, zeta,
    ClosureReport, DEFAULT_STATE_CAP,
};
use selfsim_core::repr::{
    adding_machine_portrait, conjugates_to_adding_machine, example3_closed_form, phi_rep, prop4_conjugator,
    transversal_conjugator, FgAbelianGroup, Transversal, VirtualEndo,
};
use selfsim_core::tree::{adding_machine, self_power_generator, AutExpr, Context, Engine, Forest, Portrait, System};
use selfsim_core::{Error, Permutation, Result};
use serde::Serialize;

/// Names accepted by [`run_suite`], besides `all`.
pub const SUITES: [&str; 10] = [
    "example1",
    "example2",
    "example3",
    "adding",
    "quotient",
    "transversal-change",
    "uniform-gap",
    "self-power",
    "exponent-law",
    "portrait-oracle",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug)]
pub enum SuiteError {
    Unknown(String),
    Core(Error),
}

impl From<Error> for SuiteError {
    fn from(e: Error) -> Self {
        SuiteError::Core(e)
    }
}

pub fn run_suite(name: &str) -> std::result::Result<Vec<Check>, SuiteError> {
    Ok(match name {
        "all" => {
            let mut all = Vec::new();
            for s in SUITES {
                all.extend(run_suite(s)?.into_iter().map(|c| Check { name: format!("{s}/{}", c.name), ..c }));
            }
            all
        }
        "example1" => example1()?,
        "example2" => example2()?,
        "example3" => example3()?,
        "adding" => adding()?,
        "quotient" => quotient()?,
        "transversal-change" => transversal_change()?,
        "uniform-gap" => uniform_gap()?,
        "self-power" => self_power()?,
        "exponent-law" => exponent_law()?,
        "portrait-oracle" => portrait_oracle()?,
        other => return Err(SuiteError::Unknown(other.into())),
    })
}

fn halving() -> Result<VirtualEndo> {
    VirtualEndo::new(FgAbelianGroup::new(1, vec![])?, vec![vec![2]], vec![vec![1]])
}

/// `alpha = (alpha^(k-l), alpha^(-k+l+1)) sigma` for the transversal `{2k, 2l+1}` of `2Z` in `Z`.
fn example1() -> Result<Vec<Check>> {
    let depth = 8;
    let endo = halving()?;
    let mut out = Vec::new();
    for k in 0..3i64 {
        for l in 0..3i64 {
            let t = Transversal::new(&endo, vec![vec![2 * k], vec![2 * l + 1]])?;
            let mut forest = Forest::new(2);
            let node = phi_rep(&endo, &t).node(&mut forest, &[1], depth)?;
            let got = Portrait::from_node(&forest, node);
            let ctx = Context::uniform(2, depth)?;
            let mut sys = System::new(ctx);
            let a = sys.declare("alpha")?;
            let entries =
                vec![AutExpr::gen_pow(a, ctx.series(&[k - l])), AutExpr::gen_pow(a, ctx.series(&[l - k + 1]))];
            sys.define(a, Permutation::full_cycle(2), Some(entries), None)?;
            let want = Engine::new(sys).portrait(&AutExpr::gen(a), depth)?;
            out.push(Check::new(format!("k={k} l={l}"), got == want, format!("depth {depth}")));
        }
    }
    Ok(out)
}

fn example2() -> Result<Vec<Check>> {
    let ctx = Context::uniform(4, 10)?;
    let l = ctx.l;
    let mut sys = System::new(ctx);
    let zero = ctx.zero();
    let a = self_power_generator(
        &mut sys,
        "alpha",
        Permutation::full_cycle(4),
        &[zero.clone(), zero.clone(), zero.clone(), ctx.series(&[2])],
    )?;
    // alpha' = (e, e, alpha'^2, e) sigma is the same recursion read with sigma first.
    let b = self_power_generator(
        &mut sys,
        "alpha'",
        Permutation::full_cycle(4),
        &[zero.clone(), zero.clone(), ctx.series(&[2]), zero],
    )?;
    let mut eng = Engine::new(sys);
    let (alpha, alpha2) = (AutExpr::gen(a), AutExpr::gen_pow(a, ctx.series(&[2])));
    let blocks = Permutation::from_cycles(4, &[vec![1, 3], vec![2, 4]])?;
    let e = AutExpr::identity();
    let mut out = Vec::new();

    let standard = AutExpr::tuple(vec![e.clone(), e.clone(), alpha2.clone(), alpha2.clone()])
        .mul(&AutExpr::rooted(blocks.clone()));
    out.push(Check::new(
        "alpha^2 = (e, e, alpha^2, alpha^2)(1 3)(2 4)",
        eng.equal_to_depth(&alpha2, &standard, l)?,
        "",
    ));
    let b2 = AutExpr::gen_pow(b, ctx.series(&[2]));
    // Read sigma first, the printed form is the rooted permutation followed by the tuple.
    let printed = AutExpr::rooted(blocks).mul(&AutExpr::tuple(vec![b2.clone(), e.clone(), e.clone(), b2.clone()]));
    out.push(Check::new(
        "alpha'^2 = (1 3)(2 4) (alpha'^2, e, e, alpha'^2)",
        eng.equal_to_depth(&b2, &printed, l)?,
        "sigma-first reading",
    ));

    let four = alpha.pow_series(&ctx.series(&[4]));
    out.push(Check::new(
        "alpha^4 = alpha^(2x)",
        eng.equal_to_depth(&four, &alpha.pow_series(&ctx.series(&[0, 2])), l)?,
        "",
    ));

    let kappa = alpha.pow_series(&ctx.series(&[2, -1]));
    out.push(Check::new("kappa^2 = e", eng.is_identity_to_depth(&kappa.mul(&kappa), l)?, "kappa = alpha^(2 - x)"));
    out.push(Check::new("kappa != e", !eng.is_identity_to_depth(&kappa, l)?, ""));

    // alpha^(x^i) = alpha^(2^i) kappa^(x^(i-1)): the diagonal closure is generated by alpha and K.
    for i in 1..=4usize {
        let lhs = alpha.pow_series(&ctx.x_pow(i));
        let rhs = alpha.pow_series(&ctx.series(&[1 << i])).mul(&kappa.pow_series(&ctx.x_pow(i - 1)));
        out.push(Check::new(format!("alpha^(x^{i}) in <alpha, K>"), eng.equal_to_depth(&lhs, &rhs, l)?, ""));
    }

    eng.enable_abelian_normalization()?;
    let report = state_closure(&mut eng, std::slice::from_ref(&alpha2), DEFAULT_STATE_CAP)?;
    let restricted = restrict_to_orbit(&report, &ctx, &[1, 3])?;
    let mut sub = Engine::new(restricted.system);
    let input = sub.system().lookup(&ClosureReport::name(report.inputs[0]))?;
    let sub_ctx = sub.context();
    let on_block = sub.portrait(&AutExpr::gen(input), l)?;
    out.push(Check::new(
        "alpha^2 on {1, 3} is the binary adding machine",
        on_block == adding_machine_portrait(sub_ctx, 1)?,
        "",
    ));
    Ok(out)
}

fn example3() -> Result<Vec<Check>> {
    let ctx = Context::uniform(2, 10)?;
    let mut sys = System::new(ctx);
    let q = ctx.series(&[1, 1]);
    let b = self_power_generator(&mut sys, "beta", Permutation::full_cycle(2), &[ctx.zero(), q.clone()])?;
    let mut eng = Engine::new(sys);
    let staged = prop4_conjugator(&mut eng, b, 1)?.expr();
    let closed = example3_closed_form(b, &q, ctx.l)?;
    Ok(vec![
        Check::new("staged conjugator", conjugates_to_adding_machine(&mut eng, b, &staged, 1)?, "depth 10"),
        Check::new("closed-form conjugator", conjugates_to_adding_machine(&mut eng, b, &closed, 1)?, "depth 10"),
        Check::new("conjugators agree", eng.equal_to_depth(&staged, &closed, ctx.l)?, ""),
    ])
}

/// `D_m(j)`: the relation, the closure size, the presentation and the pro-`m` generators.
fn adding() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in 2..=5u32 {
        for j in 1..=3usize {
            let ctx = Context::uniform(m, 12)?;
            let mut sys = System::new(ctx);
            let a = adding_machine(&mut sys, "alpha", j)?;
            let mut eng = Engine::new(sys);
            let alpha = AutExpr::gen(a);
            let mut r = vec![0i64; j + 1];
            r[0] = m as i64;
            r[j] = -1;
            let r = ctx.series(&r);
            let name = format!("m={m} j={j}");
            out.push(Check::new(
                format!("{name} annihilator"),
                eng.is_identity_to_depth(&alpha.pow_series(&r), ctx.l)?,
                "",
            ));
            eng.enable_abelian_normalization()?;
            let report = state_closure(&mut eng, std::slice::from_ref(&alpha), DEFAULT_STATE_CAP)?;
            let gens: Vec<AutExpr> = report.generators().iter().map(|&i| report.elements[i].expr.clone()).collect();
            out.push(Check::new(format!("{name} closure size"), gens.len() == j, format!("{} generators", gens.len())));
            let p = extract_relations(&mut eng, &gens)?;
            let sign_free = p.annihilator == r || p.annihilator == r.neg();
            out.push(Check::new(format!("{name} relator"), sign_free, p.annihilator.to_string()));
            let (l, _) = pro_m_generators(&r)?;
            out.push(Check::new(format!("{name} pro-m generators"), l == j, format!("{l}")));
        }
    }
    Ok(out)
}

fn quotient() -> Result<Vec<Check>> {
    let r = PowerSeries::from_i64s(2, 12, 9, &[2, -1]);
    let rel = Relator::new(&r)?;
    let binary = (0..256i64).all(|n| {
        let digits = rel.reduce_i64s(&[n]).digits().to_vec();
        digits.iter().enumerate().all(|(i, &d)| i64::from(d) == (n >> i) & 1)
    });
    let r3 = PowerSeries::from_i64s(3, 10, 8, &[3, -1, -1]);
    let rel3 = Relator::new(&r3)?;
    let samples = [vec![7i64, -4, 11], vec![-100, 3], vec![26, 0, 0, 5], vec![1, 1, 1, 1, 1, 1]];
    let idempotent = samples.iter().all(|s| {
        let once = rel3.reduce_i64s(s);
        rel3.reduce_integers(&once.to_bigints()) == once
    });
    Ok(vec![
        Check::new("r = 2 - x gives binary expansions of 0..255", binary, ""),
        Check::new("reduction is idempotent for r = 3 - x - x^2", idempotent, ""),
    ])
}

fn transversal_change() -> Result<Vec<Check>> {
    let endo = halving()?;
    let ctx = Context::uniform(2, 8)?;
    let mut out = Vec::new();
    for (k, l) in [(0, 0), (1, 0), (0, 2), (2, 1)] {
        let t = Transversal::new(&endo, vec![vec![2 * k], vec![2 * l + 1]])?;
        for h in [[0i64, 0], [1, -1], [2, 1]] {
            let ch = transversal_conjugator(&endo, &t, &[vec![2 * h[0]], vec![2 * h[1]]], ctx)?;
            out.push(Check::new(
                format!("k={k} l={l} h=({}, {})", 2 * h[0], 2 * h[1]),
                ch.forward_holds,
                "g^phi' = lambda g^phi lambda^-1",
            ));
        }
    }
    Ok(out)
}

fn uniform_gap() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in 2..=3u32 {
        for j in 1..=2usize {
            let ctx = Context::uniform(m, 10)?;
            let mut sys = System::new(ctx);
            let a = adding_machine(&mut sys, "beta", j)?;
            let mut eng = Engine::new(sys);
            let beta = AutExpr::gen(a);
            let mut ok = zeta(&mut eng, &beta, ctx.l)? == j;
            // Elements of Stab(1): beta^(m c) and diagonal powers beta^(x p).
            for z in [ctx.series(&[m as i64]), ctx.series(&[0, 1]), ctx.series(&[m as i64, 2]), ctx.series(&[0, 1, -1])]
            {
                let zb = beta.pow_series(&z).mul(&beta);
                ok &= zeta(&mut eng, &zb, ctx.l)? == j;
            }
            out.push(Check::new(format!("m={m} j={j}"), ok, format!("zeta = {j}")));
        }
    }
    Ok(out)
}

/// Fixed sample of `alpha = (alpha^(q_1), .., alpha^(q_m)) sigma`.
fn self_power_cases() -> Vec<(u32, Vec<Vec<i64>>)> {
    vec![
        (2, vec![vec![0], vec![1, 1]]),
        (2, vec![vec![1, -1], vec![2, 0, 1]]),
        (3, vec![vec![1], vec![0, 2], vec![-1]]),
        (3, vec![vec![0], vec![0], vec![1, 0, 1]]),
        (4, vec![vec![0], vec![1], vec![0], vec![1, 1]]),
        (4, vec![vec![2], vec![-1, 1], vec![0], vec![0, 0, 1]]),
    ]
}

fn self_power() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (m, qs) in self_power_cases() {
        let ctx = Context::uniform(m, 8)?;
        let mut sys = System::new(ctx);
        let exps: Vec<PowerSeries> = qs.iter().map(|q| ctx.series(q)).collect();
        let a = self_power_generator(&mut sys, "alpha", Permutation::full_cycle(m as usize), &exps)?;
        let mut eng = Engine::new(sys);
        let alpha = AutExpr::gen(a);
        let name = format!("m={m} q={qs:?}");
        eng.enable_abelian_normalization()?;
        let report = state_closure(&mut eng, std::slice::from_ref(&alpha), DEFAULT_STATE_CAP)?;
        out.push(Check::new(format!("{name} closure abelian"), report.abelian, ""));
        let sum = exps.iter().try_fold(ctx.zero(), |acc, q| acc.add(q))?;
        let r = ctx.series(&[m as i64]).sub(&sum.shift_up(1))?;
        out.push(Check::new(
            format!("{name} annihilator"),
            eng.is_identity_to_depth(&alpha.pow_series(&r), ctx.l)?,
            r.to_string(),
        ));
        let target = alpha.pow_series(&ctx.series(&[5, -3, 2]));
        let q = peel(&mut eng, &target, std::slice::from_ref(&alpha))?;
        let back = rebuild(std::slice::from_ref(&alpha), &q);
        out.push(Check::new(format!("{name} peel round trip"), eng.equal_to_depth(&back, &target, ctx.l)?, ""));
    }
    Ok(out)
}

fn portrait_oracle() -> Result<Vec<Check>> {
    use selfsim_core::tree::{level_perm_fast, self_power_shape};
    let mut out = Vec::new();
    for (m, qs) in self_power_cases() {
        let ctx = Context::uniform(m, 6)?;
        let mut sys = System::new(ctx);
        let exps: Vec<PowerSeries> = qs.iter().map(|q| ctx.series(q)).collect();
        let a = self_power_generator(&mut sys, "alpha", Permutation::full_cycle(m as usize), &exps)?;
        let shape = self_power_shape(&sys, a)?;
        let mut eng = Engine::new(sys);
        let mut ok = true;
        for l in 0..=6 {
            ok &= level_perm_fast(&shape, l)? == eng.level_permutation(&AutExpr::gen(a), l)?;
        }
        out.push(Check::new(format!("m={m} q={qs:?}"), ok, "levels 0..=6"));
    }
    Ok(out)
}

/// Rooted generators on disjoint cycles: `P(A) = Z/m1 + Z/m2`, exponent `lcm(m1, m2)`.
fn exponent_law() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (m1, m2) in [(2u32, 3u32), (2, 4), (3, 3), (2, 2)] {
        let m = m1 + m2;
        let ctx = Context::uniform(m, 8)?;
        let first: Vec<u32> = (1..=m1).collect();
        let second: Vec<u32> = (m1 + 1..=m).collect();
        let s1 = Permutation::from_cycles(m as usize, &[first])?;
        let s2 = Permutation::from_cycles(m as usize, &[second])?;
        let mut eng = Engine::new(System::new(ctx));
        let words = [AutExpr::rooted(s1.clone()), AutExpr::rooted(s2.clone())];
        let found = minimal_exponent(&mut eng, &words, ctx.l, 1000)?;
        let lcm = u64::from(m1 * m2 / gcd(m1, m2));
        let perm_exp = group_exponent(&[s1, s2], 10_000)?;
        out.push(Check::new(format!("m1={m1} m2={m2}"), found == Some(lcm) && perm_exp == lcm, format!("{found:?}")));
    }
    Ok(out)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
