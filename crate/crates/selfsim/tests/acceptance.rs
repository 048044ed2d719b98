//! One PASS/FAIL line per acceptance criterion.
//!
//! Every identity is checked twice: on portraits by the library, and on
//! sampled vertices by integer recursions written out below. Each criterion
//! must also finish within `TIME_BUDGET_SECS`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfsim_core::adic::{congruence_exponent, pro_m_generators, PowerSeries, Relator};
use selfsim_core::closure::{
    extract_relations, group_exponent, minimal_exponent, peel, rebuild, restrict_to_orbit, state_closure, zeta,
    ClosureReport, DEFAULT_STATE_CAP,
};
use selfsim_core::repr::{phi_rep, prop4_conjugator, transversal_conjugator, FgAbelianGroup, Transversal, VirtualEndo};
use selfsim_core::tree::{
    adding_machine, level_perm_fast, self_power_generator, self_power_shape, AutExpr, Context, Engine, Forest, GenId,
    Portrait, System,
};
use selfsim_core::Permutation;

const TIME_BUDGET_SECS: f64 = 10.0;
const SEED: u64 = 0x5e1f_5141;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type TransversalCase = (Transversal, Vec<Vec<i64>>, Option<(i64, i64)>);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

trait OrFail<T> {
    fn or_fail(self, what: &str) -> Result<T, String>;
}

impl<T> OrFail<T> for selfsim_core::Result<T> {
    fn or_fail(self, what: &str) -> Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

// ---- oracles ----

/// Vertex action of `alpha = (alpha^(q_0), .., alpha^(q_(m-1))) sigma`, with
/// `sigma: y -> y + 1 mod m`, by integer recursion on polynomial exponents.
///
/// For `c = m s + r` with `0 <= r < m`, `alpha^c` sends `y` to `y + r` and has
/// state `alpha^(s Q + q_y + .. + q_(y+r-1))` at `y`, where `Q` is the sum of
/// the `q_i`. A polynomial exponent `c + x P` acts as `P` on the suffix first.
struct PowerOracle {
    m: i128,
    q: Vec<Vec<i128>>,
    total: Vec<i128>,
}

fn poly_add(a: &[i128], b: &[i128]) -> Vec<i128> {
    (0..a.len().max(b.len())).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect()
}

fn poly_scale(a: &[i128], c: i128) -> Vec<i128> {
    a.iter().map(|v| v * c).collect()
}

fn poly_mul(a: &[i128], b: &[i128], len: usize) -> Vec<i128> {
    let mut out = vec![0; len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl PowerOracle {
    fn new(m: u32, q: &[Vec<i64>]) -> Self {
        let q: Vec<Vec<i128>> = q.iter().map(|p| p.iter().map(|&c| c as i128).collect()).collect();
        let total = q.iter().fold(Vec::new(), |acc, p| poly_add(&acc, p));
        PowerOracle { m: m as i128, q, total }
    }

    fn adding(m: u32, j: usize) -> Self {
        let mut q = vec![vec![0i64]; m as usize];
        q[m as usize - 1] = [vec![0; j - 1], vec![1]].concat();
        Self::new(m, &q)
    }

    fn image(&self, p: &[i128], w: &[u32]) -> Vec<u32> {
        let Some((&y, rest)) = w.split_first() else {
            return Vec::new();
        };
        let p = &p[..p.len().min(w.len())];
        let c0 = p.first().copied().unwrap_or(0);
        let below = if p.len() > 1 { self.image(&p[1..], rest) } else { rest.to_vec() };
        let (s, r) = (c0.div_euclid(self.m), c0.rem_euclid(self.m));
        let mut state = poly_scale(&self.total, s);
        for t in 0..r {
            state = poly_add(&state, &self.q[((y as i128 + t) % self.m) as usize]);
        }
        state.truncate(rest.len());
        let mut out = vec![((y as i128 + r) % self.m) as u32];
        out.extend(self.image(&state, &below));
        out
    }
}

fn ints(p: &[i64]) -> Vec<i128> {
    p.iter().map(|&c| c as i128).collect()
}

/// The odometer: add one to the word read as base-`m` digits, least significant first.
fn odometer(m: u32, w: &[u32]) -> Vec<u32> {
    let mut out = w.to_vec();
    for d in out.iter_mut() {
        *d = (*d + 1) % m;
        if *d != 0 {
            break;
        }
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng, m: u32, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.gen_range(0..m)).collect()
}

fn all_words(m: u32, len: usize) -> Vec<Vec<u32>> {
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words.iter().flat_map(|w| (0..m).map(move |y| [w.clone(), vec![y]].concat())).collect();
    }
    words
}

/// Portrait of `alpha^n` for `alpha = (alpha^a, alpha^b) sigma` with `a + b = 1`:
/// `alpha^(2s) = (alpha^s, alpha^s)` and `alpha^(2s+1) = (alpha^(s+a), alpha^(s+b)) sigma`.
fn binary_closed_form_swaps(a: i64, b: i64, n: i64, depth: usize, out: &mut Vec<Vec<bool>>, level: usize) {
    if level == depth {
        return;
    }
    if out.len() <= level {
        out.push(Vec::new());
    }
    let (s, odd) = (n.div_euclid(2), n.rem_euclid(2) == 1);
    out[level].push(odd);
    let children = if odd { [s + a, s + b] } else { [s, s] };
    for c in children {
        binary_closed_form_swaps(a, b, c, depth, out, level + 1);
    }
}

fn swaps_of(p: &Portrait) -> Vec<bool> {
    p.labels().iter().map(|s| !s.is_identity()).collect()
}

fn series_i64(ctx: &Context, p: &[i128]) -> PowerSeries {
    let v: Vec<i64> = p.iter().map(|&c| i64::try_from(c).expect("small coefficient")).collect();
    ctx.series(&v)
}

// ---- criteria ----

fn halving_machine_portrait(k: i64, l: i64, depth: usize) -> Result<Portrait, String> {
    let endo = VirtualEndo::new(FgAbelianGroup::new(1, vec![]).or_fail("group")?, vec![vec![2]], vec![vec![1]])
        .or_fail("triple")?;
    let t = Transversal::new(&endo, vec![vec![2 * k], vec![2 * l + 1]]).or_fail("transversal")?;
    let mut forest = Forest::new(2);
    let n = phi_rep(&endo, &t).node(&mut forest, &[1], depth).or_fail("portrait")?;
    Ok(Portrait::from_node(&forest, n))
}

fn halving_oracle(k: i64, l: i64, depth: usize) -> Vec<bool> {
    let mut levels = Vec::new();
    binary_closed_form_swaps(k - l, -k + l + 1, 1, depth, &mut levels, 0);
    levels.concat()
}

fn criterion1() -> Outcome {
    for k in 0..3 {
        for l in 0..3 {
            let p = halving_machine_portrait(k, l, 8)?;
            ensure(swaps_of(&p) == halving_oracle(k, l, 8), || format!("k={k} l={l}"))?;
        }
    }
    Ok("9 transversals, depth 8".into())
}

fn criterion2() -> Outcome {
    let ctx = Context::uniform(4, 10).or_fail("context")?;
    let l = ctx.l;
    let mut sys = System::new(ctx);
    let z = ctx.zero();
    let a = self_power_generator(
        &mut sys,
        "alpha",
        Permutation::full_cycle(4),
        &[z.clone(), z.clone(), z.clone(), ctx.series(&[2])],
    )
    .or_fail("alpha")?;
    let b = self_power_generator(
        &mut sys,
        "alpha'",
        Permutation::full_cycle(4),
        &[z.clone(), z.clone(), ctx.series(&[2]), z],
    )
    .or_fail("alpha'")?;
    let mut eng = Engine::new(sys);
    let oracle = PowerOracle::new(4, &[vec![0], vec![0], vec![0], vec![2]]);
    let oracle_b = PowerOracle::new(4, &[vec![0], vec![0], vec![2], vec![0]]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let samples: Vec<Vec<u32>> = (0..300).map(|_| random_word(&mut rng, 4, l)).collect();
    let alpha = AutExpr::gen(a);
    let pow = |q: &[i64]| alpha.pow_series(&ctx.series(q));
    let e = AutExpr::identity();
    let blocks = Permutation::from_cycles(4, &[vec![1, 3], vec![2, 4]]).or_fail("perm")?;

    // alpha^2 = (e, e, alpha^2, alpha^2)(1 3)(2 4)
    let a2 = pow(&[2]);
    let rhs = AutExpr::tuple(vec![e.clone(), e.clone(), a2.clone(), a2.clone()]).mul(&AutExpr::rooted(blocks.clone()));
    ensure(eng.equal_to_depth(&a2, &rhs, l).or_fail("alpha^2")?, || "alpha^2 first level".into())?;
    for w in &samples {
        let states = [0, 0, 2, 2];
        let mut want = vec![(w[0] + 2) % 4];
        want.extend(oracle.image(&[states[w[0] as usize]], &w[1..]));
        ensure(oracle.image(&[2], w) == want, || format!("oracle alpha^2 at {w:?}"))?;
    }

    // The printed form (alpha^2, e, e, alpha^2)(1 3)(2 4) holds for the sigma-first reading.
    let b2 = AutExpr::gen_pow(b, ctx.series(&[2]));
    let printed =
        AutExpr::rooted(blocks.clone()).mul(&AutExpr::tuple(vec![b2.clone(), e.clone(), e.clone(), b2.clone()]));
    ensure(eng.equal_to_depth(&b2, &printed, l).or_fail("alpha'^2")?, || "sigma-first reading".into())?;
    for w in &samples {
        let y = blocks.apply(w[0] as usize) as u32;
        let mut want = vec![y];
        want.extend(oracle_b.image(&[[2, 0, 0, 2][y as usize]], &w[1..]));
        ensure(oracle_b.image(&[2], w) == want, || format!("oracle alpha'^2 at {w:?}"))?;
    }

    // alpha^4 = alpha^(2x); kappa = alpha^(2 - x) has order 2.
    ensure(eng.equal_to_depth(&pow(&[4]), &pow(&[0, 2]), l).or_fail("alpha^4")?, || "alpha^4".into())?;
    let kappa = pow(&[2, -1]);
    ensure(eng.is_identity_to_depth(&kappa.mul(&kappa), l).or_fail("kappa^2")?, || "kappa^2 = e".into())?;
    ensure(!eng.is_identity_to_depth(&kappa, l).or_fail("kappa")?, || "kappa != e".into())?;
    for w in &samples {
        ensure(oracle.image(&[4], w) == oracle.image(&[0, 2], w), || format!("oracle alpha^4 at {w:?}"))?;
        ensure(oracle.image(&[4, -2], w) == *w, || format!("oracle kappa^2 at {w:?}"))?;
    }
    ensure(samples.iter().any(|w| oracle.image(&[2, -1], w) != *w), || "oracle kappa = e".into())?;

    // Restriction to the block {1, 3} is the binary adding machine.
    eng.enable_abelian_normalization().or_fail("normalization")?;
    let report = state_closure(&mut eng, std::slice::from_ref(&a2), DEFAULT_STATE_CAP).or_fail("closure")?;
    let restricted = restrict_to_orbit(&report, &ctx, &[1, 3]).or_fail("restriction")?;
    let mut sub = Engine::new(restricted.system);
    let g = sub.system().lookup(&ClosureReport::name(report.inputs[0])).or_fail("lookup")?;
    let p = sub.portrait(&AutExpr::gen(g), l).or_fail("restricted portrait")?;
    for w in all_words(2, l) {
        ensure(p.image(&w) == odometer(2, &w), || format!("restriction at {w:?}"))?;
        let lifted: Vec<u32> = w.iter().map(|&y| 2 * y).collect();
        let image: Vec<u32> = odometer(2, &w).iter().map(|&y| 2 * y).collect();
        ensure(oracle.image(&[2], &lifted) == image, || format!("oracle block action at {w:?}"))?;
    }

    // Membership: alpha^(x^i) = alpha^(2^i) kappa^(x^(i-1)), so the diagonal closure is <alpha, K>,
    // and every kappa^(x^i) is an involution.
    for i in 1..l {
        let lhs = alpha.pow_series(&ctx.x_pow(i));
        let k_i = kappa.pow_series(&ctx.x_pow(i - 1));
        let rhs = alpha.pow_series(&ctx.series(&[1 << i])).mul(&k_i);
        ensure(eng.equal_to_depth(&lhs, &rhs, l).or_fail("membership")?, || format!("alpha^(x^{i})"))?;
        ensure(eng.is_identity_to_depth(&k_i.mul(&k_i), l).or_fail("torsion")?, || format!("kappa^(x^{})", i - 1))?;
        let mut lhs_p = vec![0i128; i + 1];
        lhs_p[i] = 1;
        let mut rhs_p = vec![0i128; i + 1];
        rhs_p[0] = 1 << i;
        rhs_p[i - 1] += 2;
        rhs_p[i] -= 1;
        for w in samples.iter().take(40) {
            ensure(oracle.image(&lhs_p, w) == oracle.image(&rhs_p, w), || format!("oracle membership x^{i}"))?;
        }
    }
    Ok("depth 10, 300 sampled vertices".into())
}

/// `c_0 = 1, c_1 = 1 + x, c_n = 2 c_(n-2) + c_(n-1)`; `c'_0 = 0, c'_n = c_(n-1) + c'_(n-1)`.
fn primed_sequence(n_max: usize, len: usize) -> Vec<Vec<i128>> {
    let mut c: Vec<Vec<i128>> = vec![vec![1], vec![1, 1]];
    while c.len() < n_max {
        let n = c.len();
        c.push(poly_add(&poly_scale(&c[n - 2], 2), &c[n - 1]));
    }
    let mut cp = vec![vec![0i128]];
    for n in 1..n_max {
        let mut next = poly_add(&c[n - 1], &cp[n - 1]);
        next.truncate(len);
        cp.push(next);
    }
    cp
}

fn criterion3() -> Outcome {
    let ctx = Context::uniform(2, 10).or_fail("context")?;
    let l = ctx.l;
    let mut sys = System::new(ctx);
    let b = self_power_generator(&mut sys, "beta", Permutation::full_cycle(2), &[ctx.zero(), ctx.series(&[1, 1])])
        .or_fail("beta")?;
    let mut eng = Engine::new(sys);
    let beta = AutExpr::gen(b);
    let staged = prop4_conjugator(&mut eng, b, 1).or_fail("staged conjugator")?.expr();
    let closed = primed_sequence(l, l).iter().enumerate().fold(AutExpr::identity(), |acc, (n, c)| {
        let t = AutExpr::tuple(vec![AutExpr::identity(), AutExpr::gen_pow(b, series_i64(&ctx, c).neg())]);
        acc.mul(&t.diagonal(n))
    });
    let all = all_words(2, l);
    for (name, h) in [("staged", &staged), ("closed form", &closed)] {
        let conj = h.inv().mul(&beta).mul(h);
        let p = eng.portrait(&conj, l).or_fail(name)?;
        for w in &all {
            ensure(p.image(w) == odometer(2, w), || format!("{name} conjugator at {w:?}"))?;
        }
    }
    ensure(eng.equal_to_depth(&staged, &closed, l).or_fail("agreement")?, || "conjugators differ".into())?;
    Ok("depth 10, all 1024 vertices".into())
}

fn criterion4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    for m in 2..=5u32 {
        for j in 1..=3usize {
            let ctx = Context::uniform(m, 12).or_fail("context")?;
            let mut sys = System::new(ctx);
            let a = adding_machine(&mut sys, "alpha", j).or_fail("machine")?;
            let mut eng = Engine::new(sys);
            let alpha = AutExpr::gen(a);
            let mut r = vec![0i64; j + 1];
            r[0] = m as i64;
            r[j] = -1;
            let rs = ctx.series(&r);
            let tag = format!("m={m} j={j}");
            ensure(eng.is_identity_to_depth(&alpha.pow_series(&rs), 12).or_fail(&tag)?, || {
                format!("{tag} annihilator")
            })?;
            let oracle = PowerOracle::adding(m, j);
            for _ in 0..100 {
                let w = random_word(&mut rng, m, 12);
                ensure(oracle.image(&ints(&r), &w) == w, || format!("{tag} oracle annihilator"))?;
            }
            eng.enable_abelian_normalization().or_fail("normalization")?;
            let report = state_closure(&mut eng, std::slice::from_ref(&alpha), DEFAULT_STATE_CAP).or_fail("closure")?;
            let gens: Vec<AutExpr> = report.generators().iter().map(|&i| report.elements[i].expr.clone()).collect();
            ensure(gens.len() == j, || format!("{tag} closure has {} generators", gens.len()))?;
            let pres = extract_relations(&mut eng, &gens).or_fail("relations")?;
            ensure(pres.annihilator == rs, || format!("{tag} relator {}", pres.annihilator))?;
            let (lt, topo) = pro_m_generators(&rs).or_fail("pro-m")?;
            ensure(lt == j && topo.len() == j, || format!("{tag} {lt} pro-m generators"))?;
            for (i, g) in topo.iter().enumerate() {
                let unit: Vec<u32> = (0..g.digits().len()).map(|t| u32::from(t == i)).collect();
                ensure(g.digits() == unit.as_slice(), || format!("{tag} generator x^{i}"))?;
            }
        }
    }
    Ok("m in 2..=5, j in 1..=3, depth 12".into())
}

/// `(m, q_1, .., q_m)` with small coefficients and degree at most 3.
fn self_power_cases(n: usize) -> Vec<(u32, Vec<Vec<i64>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    (0..n)
        .map(|_| {
            let m = rng.gen_range(2..=4u32);
            let q = (0..m).map(|_| (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(-2..=2i64)).collect()).collect();
            (m, q)
        })
        .collect()
}

fn build(m: u32, q: &[Vec<i64>], depth: usize) -> Result<(Engine, GenId, Context), String> {
    let ctx = Context::uniform(m, depth).or_fail("context")?;
    let mut sys = System::new(ctx);
    let exps: Vec<PowerSeries> = q.iter().map(|p| ctx.series(p)).collect();
    let a = self_power_generator(&mut sys, "alpha", Permutation::full_cycle(m as usize), &exps).or_fail("generator")?;
    Ok((Engine::new(sys), a, ctx))
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    for (m, q) in self_power_cases(50) {
        let tag = format!("m={m} q={q:?}");
        let (mut eng, a, _) = build(m, &q, 6)?;
        eng.enable_abelian_normalization().or_fail(&tag)?;
        let report = state_closure(&mut eng, &[AutExpr::gen(a)], DEFAULT_STATE_CAP).or_fail(&tag)?;
        ensure(report.abelian, || format!("{tag} closure not abelian"))?;

        let (mut eng, a, ctx) = build(m, &q, 8)?;
        let alpha = AutExpr::gen(a);
        let oracle = PowerOracle::new(m, &q);
        let r = poly_add(&[m as i128], &[vec![0], poly_scale(&oracle.total, -1)].concat());
        let rs = series_i64(&ctx, &r);
        ensure(eng.is_identity_to_depth(&alpha.pow_series(&rs), 8).or_fail(&tag)?, || format!("{tag} annihilator"))?;
        let target: Vec<i64> = (0..3).map(|_| rng.gen_range(-20..=20)).collect();
        let w = alpha.pow_series(&ctx.series(&target));
        let nf = peel(&mut eng, &w, std::slice::from_ref(&alpha)).or_fail(&tag)?;
        let back = rebuild(std::slice::from_ref(&alpha), &nf);
        ensure(eng.equal_to_depth(&back, &w, 8).or_fail(&tag)?, || format!("{tag} peel round trip"))?;
        let digits: Vec<i128> = nf.coeffs[0].coeffs().iter().map(|c| c.lift().try_into().expect("digit")).collect();
        ensure(digits.iter().all(|&d| (0..m as i128).contains(&d)), || format!("{tag} digits {digits:?}"))?;
        for _ in 0..20 {
            let v = random_word(&mut rng, m, 8);
            ensure(oracle.image(&r, &v) == v, || format!("{tag} oracle annihilator at {v:?}"))?;
            ensure(oracle.image(&digits, &v) == oracle.image(&ints(&target), &v), || {
                format!("{tag} oracle peel at {v:?}")
            })?;
        }
    }
    Ok("50 seeded generators".into())
}

fn criterion6() -> Outcome {
    for (m, q) in self_power_cases(50) {
        let tag = format!("m={m} q={q:?}");
        let (mut eng, a, _) = build(m, &q, 6)?;
        let shape = self_power_shape(eng.system(), a).or_fail(&tag)?;
        for l in 0..=6 {
            let fast = level_perm_fast(&shape, l).or_fail(&tag)?;
            let slow = eng.level_permutation(&AutExpr::gen(a), l).or_fail(&tag)?;
            ensure(fast == slow, || format!("{tag} level {l}"))?;
        }
    }
    Ok("50 seeded generators, levels 0..=6".into())
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let d = 8;
    for case in 0..100 {
        let m = [2u32, 3, 4, 5, 6][rng.gen_range(0..5)];
        let j = rng.gen_range(1..=2usize);
        let q: Vec<i64> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(-3..=3)).collect();
        let rel = Relator::from_parts(&PowerSeries::from_i64s(m, 10, d, &q), j).or_fail("relator")?;
        let a: Vec<i64> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(-500..=500)).collect();
        let b: Vec<i64> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(-500..=500)).collect();
        let (ra, rb) = (rel.reduce_i64s(&a), rel.reduce_i64s(&b));
        ensure(rel.reduce_integers(&ra.to_bigints()) == ra, || format!("case {case} not idempotent"))?;
        let da: Vec<i128> = ra.digits().iter().map(|&x| x as i128).collect();
        let db: Vec<i128> = rb.digits().iter().map(|&x| x as i128).collect();
        let big = |p: Vec<i128>| p.into_iter().map(num_bigint::BigInt::from).collect::<Vec<_>>();
        let sum_raw = big(poly_add(&ints(&a), &ints(&b)));
        let sum_nf = big(poly_add(&da, &db));
        ensure(rel.reduce_integers(&sum_raw) == rel.reduce_integers(&sum_nf), || format!("case {case} sum"))?;
        let prod_raw = big(poly_mul(&ints(&a), &ints(&b), d + 1));
        let prod_nf = big(poly_mul(&da, &db, d + 1));
        ensure(rel.reduce_integers(&prod_raw) == rel.reduce_integers(&prod_nf), || format!("case {case} product"))?;
    }
    let rel = Relator::new(&PowerSeries::from_i64s(2, 12, 9, &[2, -1])).or_fail("2 - x")?;
    for n in 0..256i64 {
        let got: Vec<u32> = rel.reduce_i64s(&[n]).digits().to_vec();
        let want: Vec<u32> = (0..got.len()).map(|i| ((n >> i) & 1) as u32).collect();
        ensure(got == want, || format!("binary expansion of {n}"))?;
    }
    Ok("100 seeded pairs, 0..=255".into())
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let (k, d) = (10, 8);
    let mut divisible_cases = 0;
    for case in 0..20 {
        let (p, e) = [(2u32, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)][rng.gen_range(0..6)];
        let m = p.pow(e);
        let j = rng.gen_range(1..=2usize);
        let mut q: Vec<i64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(-6..=6)).collect();
        if case % 4 == 3 {
            q.iter_mut().for_each(|c| *c *= p as i64);
        }
        let all_divisible = q.iter().all(|c| c % p as i64 == 0);
        let mut r = vec![0i64; j + q.len()];
        r[0] = m as i64;
        for (i, c) in q.iter().enumerate() {
            r[j + i] -= c;
        }
        let rs = PowerSeries::from_i64s(m, k, d, &r);
        match congruence_exponent(&rs, p, e) {
            Ok(ce) => {
                ensure(!all_divisible, || format!("case {case}: witness despite q = 0 mod p"))?;
                let rel = Relator::new(&rs).or_fail("relator")?;
                let mut lhs = vec![num_bigint::BigInt::from(0); d + 1];
                if ce.l_total <= d {
                    lhs[ce.l_total] += 1;
                }
                for (i, c) in ce.witness.lifts().iter().enumerate() {
                    lhs[i] -= num_bigint::BigInt::from(p) * c;
                }
                ensure(rel.reduce_integers(&lhs).is_zero(), || format!("case {case}: witness identity"))?;
            }
            Err(selfsim_core::Error::AllDivisible) => {
                ensure(all_divisible, || format!("case {case}: AllDivisible with a unit coefficient"))?;
                divisible_cases += 1;
            }
            Err(err) => return Err(format!("case {case}: {err}")),
        }
    }
    Ok(format!("20 seeded relators, {divisible_cases} divisible"))
}

fn criterion9() -> Outcome {
    let endo = VirtualEndo::new(FgAbelianGroup::new(1, vec![]).or_fail("group")?, vec![vec![2]], vec![vec![1]])
        .or_fail("triple")?;
    let ctx = Context::uniform(2, 8).or_fail("context")?;
    let base = Transversal::new(&endo, vec![vec![0], vec![1]]).or_fail("transversal")?;
    let mut cases: Vec<TransversalCase> = Vec::new();
    for k in 0..3 {
        for l in 0..3 {
            cases.push((base.clone(), vec![vec![2 * k], vec![2 * l]], Some((k, l))));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    for _ in 0..10 {
        let (k, l) = (rng.gen_range(-3..=3i64), rng.gen_range(-3..=3i64));
        let t = Transversal::new(&endo, vec![vec![2 * k], vec![2 * l + 1]]).or_fail("transversal")?;
        let h = vec![vec![2 * rng.gen_range(-4..=4i64)], vec![2 * rng.gen_range(-4..=4i64)]];
        cases.push((t, h, None));
    }
    for (t, h, example) in cases {
        let ch = transversal_conjugator(&endo, &t, &h, ctx).or_fail("conjugator")?;
        let mut eng = Engine::new(ch.system.clone());
        let (u, v) = (AutExpr::gen(ch.phi[0]), AutExpr::gen(ch.phi_prime[0]));
        let conj = ch.lambda.mul(&u).mul(&ch.lambda.inv());
        ensure(eng.equal_to_depth(&conj, &v, 8).or_fail("identity")?, || format!("h={h:?}: lambda g lambda^-1"))?;
        if let Some((k, l)) = example {
            let p = eng.portrait(&v, 8).or_fail("phi'")?;
            ensure(swaps_of(&p) == halving_oracle(k, l, 8), || format!("phi' for k={k} l={l}"))?;
        }
    }
    Ok("9 halving transversals and 10 seeded h-tuples, depth 8".into())
}

fn criterion10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    for m in 2..=3u32 {
        for j in 1..=2usize {
            let tag = format!("m={m} j={j}");
            let ctx = Context::uniform(m, 10).or_fail("context")?;
            let mut sys = System::new(ctx);
            let a = adding_machine(&mut sys, "beta", j).or_fail("machine")?;
            let mut eng = Engine::new(sys);
            let beta = AutExpr::gen(a);
            ensure(zeta(&mut eng, &beta, 10).or_fail(&tag)? == j, || format!("{tag} zeta(beta)"))?;
            eng.enable_abelian_normalization().or_fail("normalization")?;
            let report = state_closure(&mut eng, std::slice::from_ref(&beta), DEFAULT_STATE_CAP).or_fail("closure")?;
            let gens: Vec<AutExpr> = report.generators().iter().map(|&i| report.elements[i].expr.clone()).collect();
            // The closure generators are beta^(x^i), i < j; sampled z is beta^P with P = sum e_i x^i.
            let oracle = PowerOracle::adding(m, j);
            let mut found = 0;
            while found < 20 {
                let e: Vec<i64> = gens.iter().map(|_| rng.gen_range(-6..=6)).collect();
                let z = gens
                    .iter()
                    .zip(&e)
                    .fold(AutExpr::identity(), |acc, (g, &c)| acc.mul(&g.pow_series(&ctx.series(&[c]))));
                if !eng.level_permutation(&z, 1).or_fail("level")?.iter().enumerate().all(|(i, &v)| i as u32 == v) {
                    continue;
                }
                found += 1;
                let zb = z.mul(&beta);
                ensure(zeta(&mut eng, &zb, 10).or_fail(&tag)? == j, || format!("{tag} zeta(z beta) for {e:?}"))?;
                let mut p: Vec<i128> = e.iter().map(|&c| c as i128).collect();
                p[0] += 1;
                let pm = poly_scale(&p, m as i128);
                let fixed = all_words(m, j).iter().all(|w| oracle.image(&pm, w) == *w);
                let moved = all_words(m, j + 1).iter().any(|w| oracle.image(&pm, w) != *w);
                ensure(fixed && moved, || format!("{tag} oracle gap for {e:?}"))?;
            }
        }
    }
    Ok("m in 2..=3, j in 1..=2, 20 seeded z each".into())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion11() -> Outcome {
    for (m1, m2) in [(2u32, 3u32), (2, 4), (3, 3), (3, 4), (2, 5), (4, 2)] {
        let m = m1 + m2;
        let ctx = Context::uniform(m, 8).or_fail("context")?;
        let s1 = Permutation::from_cycles(m as usize, &[(1..=m1).collect()]).or_fail("perm")?;
        let s2 = Permutation::from_cycles(m as usize, &[(m1 + 1..=m).collect()]).or_fail("perm")?;
        let mut eng = Engine::new(System::new(ctx));
        let words = [AutExpr::rooted(s1.clone()), AutExpr::rooted(s2.clone())];
        let lcm = u64::from(m1) * u64::from(m2) / gcd(m1.into(), m2.into());
        let found = minimal_exponent(&mut eng, &words, 8, 1000).or_fail("exponent")?;
        ensure(found == Some(lcm), || format!("m1={m1} m2={m2}: found {found:?}, want {lcm}"))?;
        let p_exp = group_exponent(&[s1, s2], 10_000).or_fail("P(A)")?;
        ensure(p_exp == lcm, || format!("m1={m1} m2={m2}: exponent of P(A) {p_exp}"))?;
    }
    Ok("6 pairs (m1, m2), depth 8".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("halving machine transversals", criterion1),
        ("quaternary identities", criterion2),
        ("odometer conjugators", criterion3),
        ("adding machines D_m(j)", criterion4),
        ("self-power generator properties", criterion5),
        ("fast level permutations", criterion6),
        ("quotient ring normal form", criterion7),
        ("congruence exponent witness", criterion8),
        ("transversal change conjugation", criterion9),
        ("uniform gap", criterion10),
        ("exponent law", criterion11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let result = result.and_then(|d| if secs > TIME_BUDGET_SECS { Err(format!("took {secs:.2}s")) } else { Ok(d) });
        match result {
            Ok(detail) => println!("PASS {} {name} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({why}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
