use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::expr::{AutExpr, Base, Factor, GenId};
use super::fast::self_power_shape;
use super::forest::{Forest, NodeId};
use super::portrait::Portrait;
use super::system::{Context, System};
use crate::adic::{power, MAdicInt, PowerSeries};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on interned portrait nodes.
pub const DEFAULT_NODE_CAP: usize = 4_000_000;

/// Constant exponents are applied as ordinary integer powers only below
/// this many bits (and below the square root of `m^K`).
const SMALL_EXPONENT_BITS: u64 = 24;

/// Repetitions used when unfolding a constant power into first-level states.
const UNFOLD_CAP: i64 = 64;

/// `a = (a^(q_y)) root` with `root^m = e`, and the exponents `A_y` of the
/// states of `a^m`.
#[derive(Clone, Debug)]
struct PowerShape {
    root: Permutation,
    q: Vec<PowerSeries>,
    a: Vec<PowerSeries>,
}

/// First-level decomposition: root permutation and the `m` states.
pub type Decomposition = (Permutation, Vec<AutExpr>);

/// Evaluates words over a [`System`] into truncated portraits and expands
/// them symbolically into states.
///
/// Portrait nodes are hash-consed in a [`Forest`]; generator portraits,
/// constant powers and factors are memoized by depth. Memo entries stay valid
/// because a generator definition never changes once given.
pub struct Engine {
    system: System,
    forest: Forest,
    gen_memo: HashMap<(GenId, usize), NodeId>,
    pow_memo: HashMap<(NodeId, MAdicInt), NodeId>,
    factor_memo: HashMap<(Factor, usize), NodeId>,
    power_shapes: HashMap<GenId, Option<PowerShape>>,
    abelian: bool,
    node_cap: usize,
    m_to_k: BigUint,
}

impl Engine {
    pub fn new(system: System) -> Self {
        let ctx = *system.context();
        Engine {
            forest: Forest::new(ctx.m as usize),
            system,
            gen_memo: HashMap::new(),
            pow_memo: HashMap::new(),
            factor_memo: HashMap::new(),
            power_shapes: HashMap::new(),
            abelian: false,
            node_cap: DEFAULT_NODE_CAP,
            m_to_k: power(ctx.m, ctx.k),
        }
    }

    pub fn set_node_cap(&mut self, cap: usize) {
        self.node_cap = cap;
    }

    pub fn context(&self) -> Context {
        *self.system.context()
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    /// Mutable access for adding generators. Existing definitions are final,
    /// so memoized portraits stay valid; abelian word normalization is
    /// switched off until re-enabled.
    pub fn system_mut(&mut self) -> &mut System {
        self.abelian = false;
        &mut self.system
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn forest_mut(&mut self) -> &mut Forest {
        &mut self.forest
    }

    fn check_depth(&self, depth: usize) -> Result<()> {
        let l = self.context().l;
        if depth > l {
            return Err(Error::DepthExceeded { requested: depth as u32, available: l as u32 });
        }
        Ok(())
    }

    fn check_cap(&self) -> Result<()> {
        if self.forest.len() > self.node_cap {
            return Err(Error::CapExceeded { what: "interned portrait nodes", cap: self.node_cap });
        }
        Ok(())
    }

    /// Portrait node of `w` truncated to `depth` (at most `L`).
    pub fn node(&mut self, w: &AutExpr, depth: usize) -> Result<NodeId> {
        self.check_depth(depth)?;
        self.system.check_expr(w)?;
        let n = self.eval(w, depth)?;
        self.check_cap()?;
        Ok(n)
    }

    pub fn portrait(&mut self, w: &AutExpr, depth: usize) -> Result<Portrait> {
        let n = self.node(w, depth)?;
        Ok(Portrait::from_node(&self.forest, n))
    }

    pub fn equal_to_depth(&mut self, a: &AutExpr, b: &AutExpr, depth: usize) -> Result<bool> {
        Ok(self.node(a, depth)? == self.node(b, depth)?)
    }

    pub fn is_identity_to_depth(&mut self, w: &AutExpr, depth: usize) -> Result<bool> {
        let n = self.node(w, depth)?;
        Ok(self.forest.is_identity(n))
    }

    /// Permutation of level `l` as an image table (see [`Forest::level_permutation`]).
    pub fn level_permutation(&mut self, w: &AutExpr, l: usize) -> Result<Vec<u32>> {
        let n = self.node(w, l)?;
        Ok(self.forest.level_permutation(n, l))
    }

    fn eval(&mut self, w: &AutExpr, depth: usize) -> Result<NodeId> {
        let mut acc = self.forest.identity(depth);
        if depth == 0 {
            return Ok(acc);
        }
        for f in w.factors() {
            let n = self.eval_factor(f, depth)?;
            acc = self.forest.mul(acc, n);
        }
        Ok(acc)
    }

    fn eval_factor(&mut self, f: &Factor, depth: usize) -> Result<NodeId> {
        if f.shift >= depth {
            return Ok(self.forest.identity(depth));
        }
        let key = (f.clone(), depth);
        if let Some(&n) = self.factor_memo.get(&key) {
            return Ok(n);
        }
        let inner = self.eval_power(&f.base, f.exp.as_ref(), depth - f.shift)?;
        let mut n = self.forest.diag_pow(inner, f.shift);
        if f.inverse {
            n = self.forest.inv(n);
        }
        self.factor_memo.insert(key, n);
        Ok(n)
    }

    /// `B^q = B^(q_0) (B^(q_1))^(1) (B^(q_2))^(2) ..`, cut at `depth`.
    fn eval_power(&mut self, base: &Base, exp: Option<&PowerSeries>, depth: usize) -> Result<NodeId> {
        let Some(q) = exp else {
            return self.eval_base(base, depth);
        };
        let mut acc = self.forest.identity(depth);
        for i in 0..depth.min(q.degree_bound() + 1) {
            let c = q.coeff(i);
            if c.is_zero() {
                continue;
            }
            let b = self.eval_base(base, depth - i)?;
            let p = self.pow_const(b, c)?;
            let shifted = self.forest.diag_pow(p, i);
            acc = self.forest.mul(acc, shifted);
        }
        Ok(acc)
    }

    fn eval_base(&mut self, base: &Base, depth: usize) -> Result<NodeId> {
        if depth == 0 {
            return Ok(self.forest.identity(0));
        }
        match base {
            Base::Gen(g) => self.gen_node(*g, depth),
            Base::Rooted(p) => Ok(self.forest.rooted(p, depth)),
            Base::Tuple(v) => {
                let children = v.iter().map(|w| self.eval(w, depth - 1)).collect::<Result<Vec<_>>>()?;
                let id = Permutation::identity(self.context().m as usize);
                Ok(self.forest.intern(&id, children))
            }
            Base::Word(w) => self.eval(w, depth),
        }
    }

    fn gen_node(&mut self, g: GenId, depth: usize) -> Result<NodeId> {
        if depth == 0 {
            return Ok(self.forest.identity(0));
        }
        if let Some(&n) = self.gen_memo.get(&(g, depth)) {
            return Ok(n);
        }
        let def = self.system.get(g)?;
        if let Some(v) = def.valid_depth {
            if depth > v {
                return Err(Error::DepthExceeded { requested: depth as u32, available: v as u32 });
            }
        }
        let root = def.root.clone();
        let entries = def.entries.clone().ok_or(Error::DepthExceeded { requested: depth as u32, available: 0 })?;
        let children = entries.iter().map(|w| self.eval(w, depth - 1)).collect::<Result<Vec<_>>>()?;
        let n = self.forest.intern(&root, children);
        self.gen_memo.insert((g, depth), n);
        Ok(n)
    }

    /// `a^c` for a constant `c` of `Z_m`.
    ///
    /// Integers that are small next to `m^K` are applied directly. Otherwise `c` is only known
    /// modulo `m^K`, which determines `a^c` exactly when `a^(m^K)` is trivial
    /// at this depth; if it is not, the `m`-adic power does not converge and
    /// the error says so.
    pub fn pow_const(&mut self, a: NodeId, c: &MAdicInt) -> Result<NodeId> {
        if c.is_zero() {
            let d = self.forest.depth(a);
            return Ok(self.forest.identity(d));
        }
        if c.is_one() {
            return Ok(a);
        }
        let key = (a, c.clone());
        if let Some(&n) = self.pow_memo.get(&key) {
            return Ok(n);
        }
        let v = c.lift();
        let small = v.bits() <= SMALL_EXPONENT_BITS && 2 * v.bits() <= self.m_to_k.bits();
        let n = if small {
            self.forest.pow_i(a, v.to_i64().expect("small exponent"))
        } else {
            let m_to_k = self.m_to_k.clone();
            let big = self.forest.pow_u(a, &m_to_k);
            if !self.forest.is_identity(big) {
                return Err(Error::ExponentNotStabilized { depth: self.forest.depth(a) as u32 });
            }
            self.forest.pow_u(a, &c.value())
        };
        self.pow_memo.insert(key, n);
        Ok(n)
    }

    // ---- symbolic expansion ----

    /// First-level decomposition `w = (w_1, .., w_m) root` by the product rule
    /// `(ab)_y = a_y b_(y^root(a))`. States are normalized.
    pub fn decompose(&mut self, w: &AutExpr) -> Result<Decomposition> {
        self.system.check_expr(w)?;
        if let Some(d) = self.decompose_self_power(w)? {
            return Ok(d);
        }
        let (root, states) = self.decompose_raw(w)?;
        let states = states.iter().map(|s| self.normalize(s)).collect();
        Ok((root, states))
    }

    /// States of `a^P` for a generator whose entries are powers of itself,
    /// read off arithmetically when normalization is on: with `P(0) = m s + r`,
    /// `a^P` has root `root^r` and state `a^(s A_y + q_y + .. + q_(root^(r-1)(y)) + P/x)`.
    fn decompose_self_power(&mut self, w: &AutExpr) -> Result<Option<Decomposition>> {
        if !self.abelian {
            return Ok(None);
        }
        let Some(flat) = self.flatten(w) else {
            return Ok(None);
        };
        let mut flat = flat.into_iter().filter(|(_, q)| !q.is_zero());
        let (Some((g, p)), None) = (flat.next(), flat.next()) else {
            return Ok(None);
        };
        let Some(shape) = self.power_shape(g)? else {
            return Ok(None);
        };
        let m = self.context().m as usize;
        let c = p.coeff(0);
        let r = c.low_digits(1).to_usize().expect("digit");
        let s = c.shift_down(1);
        let tail = p.shift_down(1);
        let mut states = Vec::with_capacity(m);
        for y in 0..m {
            let mut e = shape.a[y].scale(&s)?.add(&tail)?;
            let mut z = y;
            for _ in 0..r {
                e = e.add(&shape.q[z])?;
                z = shape.root.apply(z);
            }
            states.push(self.normalize(&AutExpr::gen_pow(g, e)));
        }
        Ok(Some((shape.root.pow(r as i64), states)))
    }

    fn power_shape(&mut self, g: GenId) -> Result<Option<PowerShape>> {
        if let Some(s) = self.power_shapes.get(&g) {
            return Ok(s.clone());
        }
        let m = self.context().m as usize;
        let shape = match self_power_shape(&self.system, g) {
            Ok(sh) if sh.root.pow(m as i64).is_identity() => {
                let mut a = Vec::with_capacity(m);
                for y in 0..m {
                    let mut e = self.context().zero();
                    let mut z = y;
                    for _ in 0..m {
                        e = e.add(&sh.exps[z])?;
                        z = sh.root.apply(z);
                    }
                    a.push(e);
                }
                Some(PowerShape { root: sh.root, q: sh.exps, a })
            }
            _ => None,
        };
        self.power_shapes.insert(g, shape.clone());
        Ok(shape)
    }

    fn trivial(&self) -> Decomposition {
        let m = self.context().m as usize;
        (Permutation::identity(m), vec![AutExpr::identity(); m])
    }

    fn combine(a: &Decomposition, b: &Decomposition) -> Decomposition {
        let root = a.0.then(&b.0);
        let states = (0..a.1.len()).map(|y| a.1[y].mul(&b.1[a.0.apply(y)])).collect();
        (root, states)
    }

    fn invert(d: &Decomposition) -> Decomposition {
        let tinv = d.0.inverse();
        let states = (0..d.1.len()).map(|y| d.1[tinv.apply(y)].inv()).collect();
        (tinv, states)
    }

    /// Product of two decompositions, merging state words when abelian
    /// normalization is on.
    fn combine_norm(&self, a: &Decomposition, b: &Decomposition) -> Decomposition {
        let (root, states) = Self::combine(a, b);
        if !self.abelian {
            return (root, states);
        }
        (root, states.iter().map(|s| self.normalize(s)).collect())
    }

    /// `d^n` by repeated squaring.
    fn repeat(&self, d: &Decomposition, n: u64) -> Decomposition {
        let mut acc = self.trivial();
        let mut base = d.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.combine_norm(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.combine_norm(&base, &base);
            }
        }
        acc
    }

    fn decompose_raw(&mut self, w: &AutExpr) -> Result<Decomposition> {
        let mut acc = self.trivial();
        for f in w.factors() {
            let d = self.decompose_factor(f)?;
            acc = self.combine_norm(&acc, &d);
        }
        Ok(acc)
    }

    fn decompose_factor(&mut self, f: &Factor) -> Result<Decomposition> {
        if f.inverse {
            let plain = Factor { inverse: false, ..f.clone() };
            return Ok(Self::invert(&self.decompose_factor(&plain)?));
        }
        let m = self.context().m as usize;
        if f.shift > 0 {
            let below = AutExpr::factor(Factor { shift: f.shift - 1, ..f.clone() });
            return Ok((Permutation::identity(m), vec![below; m]));
        }
        let Some(q) = &f.exp else {
            return self.decompose_base(&f.base);
        };
        let (root, mut states) = self.decompose_const_pow(&f.base, q.coeff(0))?;
        let rest = q.shift_down(1);
        if !rest.is_zero() {
            let tail = AutExpr::factor(Factor { base: f.base.clone(), exp: Some(rest), shift: 0, inverse: false });
            for s in states.iter_mut() {
                *s = s.mul(&tail);
            }
        }
        Ok((root, states))
    }

    fn decompose_base(&mut self, base: &Base) -> Result<Decomposition> {
        let m = self.context().m as usize;
        match base {
            Base::Gen(g) => {
                let def = self.system.get(*g)?;
                let entries = def.entries.clone().ok_or(Error::DepthExceeded { requested: 1, available: 0 })?;
                Ok((def.root.clone(), entries))
            }
            Base::Rooted(p) => Ok((p.clone(), vec![AutExpr::identity(); m])),
            Base::Tuple(v) => Ok((Permutation::identity(m), v.clone())),
            Base::Word(w) => self.decompose_raw(w),
        }
    }

    /// States of `B^c` for a constant `c`.
    ///
    /// A large `c` is split as `c_lo + m^t c_hi` where the root of `B` has order
    /// dividing `m^t`; `B^(m^t)` fixes the first level, so its part of the
    /// states is `(B^(m^t))_y^(c_hi)`.
    fn decompose_const_pow(&mut self, base: &Base, c: &MAdicInt) -> Result<Decomposition> {
        if c.is_zero() {
            return Ok(self.trivial());
        }
        let d = self.decompose_base(base)?;
        if c.is_one() {
            return Ok(d);
        }
        let ctx = self.context();
        if d.0.is_identity() {
            let cs = PowerSeries::constant(c.clone(), ctx.d);
            let states = d.1.iter().map(|s| s.pow_series(&cs)).collect();
            return Ok((d.0, states));
        }
        let v = c.lift();
        if let Some(v) = v.to_i64().filter(|v| v.abs() <= UNFOLD_CAP) {
            let r = self.repeat(&d, v.unsigned_abs());
            return Ok(if v < 0 { Self::invert(&r) } else { r });
        }
        let order = d.0.order();
        let mut t = 0u32;
        let mut mt = 1u64;
        while order > 1 && !mt.is_multiple_of(order) {
            t += 1;
            mt = mt.saturating_mul(ctx.m as u64);
            if mt > 4096 {
                return Err(Error::ExponentNotStabilized { depth: 1 });
            }
        }
        if !mt.is_multiple_of(order) {
            return Err(Error::ExponentNotStabilized { depth: 1 });
        }
        let c_lo = c.low_digits(t as usize).to_u64().expect("below m^t");
        let c_hi = PowerSeries::constant(c.shift_down(t as usize), ctx.d);
        let lo = self.repeat(&d, c_lo);
        let hi = self.repeat(&d, mt);
        let states = (0..d.1.len())
            .map(|y| {
                let w = &hi.1[lo.0.apply(y)];
                lo.1[y].mul(&w.pow_series(&c_hi))
            })
            .collect();
        Ok((lo.0, states))
    }

    /// Image of the vertex `u` (0-indexed letters) and the state at `u`.
    pub fn act(&mut self, w: &AutExpr, u: &[u32]) -> Result<(Vec<u32>, AutExpr)> {
        self.check_depth(u.len())?;
        let m = self.context().m;
        if u.iter().any(|&y| y >= m) {
            return Err(Error::Malformed("letter outside the alphabet".into()));
        }
        let mut current = self.normalize(w);
        let mut image = Vec::with_capacity(u.len());
        for &y in u {
            let (root, states) = self.decompose(&current)?;
            image.push(root.apply(y as usize) as u32);
            current = states[y as usize].clone();
        }
        Ok((image, current))
    }

    /// The state `w_u`.
    pub fn state(&mut self, w: &AutExpr, u: &[u32]) -> Result<AutExpr> {
        Ok(self.act(w, u)?.1)
    }

    // ---- abelian normal form ----

    pub fn abelian_normalization(&self) -> bool {
        self.abelian
    }

    /// Checks that every generator is fully defined, that all pairs commute
    /// to depth `L`, and that `g^(m^K)` is trivial to depth `L`, so that
    /// series exponents of different factors may be merged. Turns on merging
    /// when all checks pass.
    pub fn enable_abelian_normalization(&mut self) -> Result<bool> {
        let l = self.context().l;
        let ids: Vec<GenId> = self.system.ids().collect();
        let mut nodes = Vec::with_capacity(ids.len());
        for &g in &ids {
            let def = self.system.get(g)?;
            if def.entries.is_none() || def.valid_depth.is_some() {
                self.abelian = false;
                return Ok(false);
            }
            nodes.push(self.gen_node(g, l)?);
        }
        let m_to_k = self.m_to_k.clone();
        let mut ok = true;
        for (i, &a) in nodes.iter().enumerate() {
            let big = self.forest.pow_u(a, &m_to_k);
            ok &= self.forest.is_identity(big);
            for &b in &nodes[..i] {
                ok &= self.forest.mul(a, b) == self.forest.mul(b, a);
            }
        }
        self.check_cap()?;
        self.abelian = ok;
        Ok(ok)
    }

    /// Merges a word into `prod g^(q_g)` (generators in index order) when
    /// abelian normalization is on and the word only involves generators.
    /// Otherwise only drops factors with zero exponent.
    pub fn normalize(&self, w: &AutExpr) -> AutExpr {
        if self.abelian {
            if let Some(map) = self.flatten(w) {
                let factors = map
                    .into_iter()
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(g, q)| {
                        let exp = if q.is_one() { None } else { Some(q) };
                        Factor { base: Base::Gen(g), exp, shift: 0, inverse: false }
                    })
                    .collect();
                return AutExpr::from_factors(factors);
            }
        }
        let factors =
            w.factors().iter().filter(|f| !f.exp.as_ref().is_some_and(PowerSeries::is_zero)).cloned().collect();
        AutExpr::from_factors(factors)
    }

    /// Whether `w` is a word in generators already known to commute, so it
    /// commutes with every other such word to depth `L`.
    pub fn is_commuting_word(&self, w: &AutExpr) -> bool {
        self.abelian && self.flatten(w).is_some()
    }

    fn flatten(&self, w: &AutExpr) -> Option<BTreeMap<GenId, PowerSeries>> {
        let ctx = self.context();
        let mut acc: BTreeMap<GenId, PowerSeries> = BTreeMap::new();
        for f in w.factors() {
            let scale = f.exp.clone().unwrap_or_else(|| ctx.one()).shift_up(f.shift);
            let scale = if f.inverse { scale.neg() } else { scale };
            let inner = match &f.base {
                Base::Gen(g) => {
                    let entry = acc.entry(*g).or_insert_with(|| ctx.zero());
                    *entry = entry.add(&scale).ok()?;
                    continue;
                }
                Base::Word(v) => self.flatten(v)?,
                Base::Rooted(_) | Base::Tuple(_) => return None,
            };
            for (g, q) in inner {
                let term = q.mul(&scale).ok()?;
                let entry = acc.entry(g).or_insert_with(|| ctx.zero());
                *entry = entry.add(&term).ok()?;
            }
        }
        Some(acc)
    }
}
