use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use super::expr::{AutExpr, Base, Factor, GenId};
use crate::adic::{MAdicInt, PowerSeries};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Truncation context: tree degree `m`, digit precision `K`, series degree
/// bound `D` and portrait depth `L`.
///
/// `K >= L` and `D >= L` are required: the level-`l` action of a recursion
/// with series exponents only sees coefficients modulo `m^(l-1)` in degrees
/// below `l`, so these bounds make depth-`L` portraits exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    pub m: u32,
    pub k: usize,
    pub d: usize,
    pub l: usize,
}

impl Context {
    pub fn new(m: u32, k: usize, d: usize, l: usize) -> Result<Self> {
        if !(2..=256).contains(&m) {
            return Err(Error::InvalidContext(alloc::format!("tree degree {m} outside 2..=256")));
        }
        if l == 0 {
            return Err(Error::InvalidContext("depth L must be at least 1".into()));
        }
        if k < l {
            return Err(Error::InvalidContext(alloc::format!("K = {k} is below L = {l}")));
        }
        if d < l {
            return Err(Error::InvalidContext(alloc::format!("D = {d} is below L = {l}")));
        }
        Ok(Context { m, k, d, l })
    }

    /// Same precisions with all three set to `n`.
    pub fn uniform(m: u32, n: usize) -> Result<Self> {
        Self::new(m, n, n, n)
    }

    pub fn scalar(&self, v: i64) -> MAdicInt {
        MAdicInt::from_i64(self.m, self.k, v)
    }

    pub fn series(&self, coeffs: &[i64]) -> PowerSeries {
        PowerSeries::from_i64s(self.m, self.k, self.d, coeffs)
    }

    pub fn zero(&self) -> PowerSeries {
        PowerSeries::zero(self.m, self.k, self.d)
    }

    pub fn one(&self) -> PowerSeries {
        PowerSeries::one(self.m, self.k, self.d)
    }

    /// `x^n` (zero once `n > D`).
    pub fn x_pow(&self, n: usize) -> PowerSeries {
        PowerSeries::monomial(self.m, self.k, self.d, 1, n)
    }

    pub fn check_series(&self, q: &PowerSeries) -> Result<()> {
        if q.modulus() != self.m || q.precision() != self.k || q.degree_bound() != self.d {
            return Err(Error::ContextMismatch { what: "series truncation" });
        }
        Ok(())
    }
}

/// A generator `g = (w_1, .., w_m) root`.
///
/// Generators produced by a depth-bounded expansion carry `valid_depth`:
/// their portraits are only determined to that depth, and the ones at the
/// frontier have no entries at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenDef {
    pub name: String,
    pub root: Permutation,
    pub entries: Option<Vec<AutExpr>>,
    pub valid_depth: Option<usize>,
}

#[derive(Clone, Debug)]
struct Slot {
    name: String,
    def: Option<GenDef>,
}

/// Named generators defined by wreath recursions over a shared context.
///
/// Names are declared before they are defined so that recursions may refer to
/// themselves and to each other. A definition is final once given.
#[derive(Clone, Debug)]
pub struct System {
    ctx: Context,
    slots: Vec<Slot>,
    by_name: HashMap<String, GenId>,
}

impl System {
    pub fn new(ctx: Context) -> Self {
        System { ctx, slots: Vec::new(), by_name: HashMap::new() }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.slots.len() as u32).map(GenId)
    }

    pub fn declare(&mut self, name: &str) -> Result<GenId> {
        if self.by_name.contains_key(name) {
            return Err(Error::Malformed(alloc::format!("generator {name} declared twice")));
        }
        let id = GenId(self.slots.len() as u32);
        self.slots.push(Slot { name: name.into(), def: None });
        self.by_name.insert(name.into(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Result<GenId> {
        self.by_name.get(name).copied().ok_or_else(|| Error::Unknown(name.into()))
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.slots[g.0 as usize].name
    }

    pub fn get(&self, g: GenId) -> Result<&GenDef> {
        let slot = self.slots.get(g.0 as usize).ok_or_else(|| Error::Unknown(alloc::format!("#{}", g.0)))?;
        slot.def.as_ref().ok_or_else(|| Error::Malformed(alloc::format!("generator {} is not defined", slot.name)))
    }

    pub fn is_defined(&self, g: GenId) -> bool {
        self.slots.get(g.0 as usize).is_some_and(|s| s.def.is_some())
    }

    /// Gives a declared generator its recursion.
    pub fn define(
        &mut self,
        g: GenId,
        root: Permutation,
        entries: Option<Vec<AutExpr>>,
        valid_depth: Option<usize>,
    ) -> Result<()> {
        let m = self.ctx.m as usize;
        let name = self.slots.get(g.0 as usize).ok_or_else(|| Error::Unknown(alloc::format!("#{}", g.0)))?.name.clone();
        if self.slots[g.0 as usize].def.is_some() {
            return Err(Error::Malformed(alloc::format!("generator {name} defined twice")));
        }
        if root.degree() != m {
            return Err(Error::Malformed(alloc::format!("root of {name} acts on {} points, not {m}", root.degree())));
        }
        if let Some(entries) = &entries {
            if entries.len() != m {
                return Err(Error::Malformed(alloc::format!("{name} has {} entries, expected {m}", entries.len())));
            }
            for w in entries {
                self.check_expr(w)?;
            }
        } else if valid_depth.is_none_or(|v| v > 0) {
            return Err(Error::Malformed(alloc::format!("{name} has no entries but claims depth")));
        }
        self.slots[g.0 as usize].def = Some(GenDef { name, root, entries, valid_depth });
        Ok(())
    }

    /// Declares and defines in one step.
    pub fn add(&mut self, name: &str, root: Permutation, entries: Vec<AutExpr>) -> Result<GenId> {
        let g = self.declare(name)?;
        self.define(g, root, Some(entries), None)?;
        Ok(g)
    }

    /// Validates generator references, permutation degrees and exponent truncation.
    pub fn check_expr(&self, w: &AutExpr) -> Result<()> {
        for f in w.factors() {
            if let Some(q) = &f.exp {
                self.ctx.check_series(q)?;
            }
            match &f.base {
                Base::Gen(g) => {
                    if g.0 as usize >= self.slots.len() {
                        return Err(Error::Unknown(alloc::format!("#{}", g.0)));
                    }
                }
                Base::Rooted(p) => {
                    if p.degree() != self.ctx.m as usize {
                        return Err(Error::Malformed("rooted permutation of wrong degree".into()));
                    }
                }
                Base::Tuple(v) => {
                    if v.len() != self.ctx.m as usize {
                        return Err(Error::Malformed(alloc::format!("tuple of arity {}", v.len())));
                    }
                    v.iter().try_for_each(|e| self.check_expr(e))?;
                }
                Base::Word(e) => self.check_expr(e)?,
            }
        }
        Ok(())
    }

    /// Text form of a word in the expression syntax.
    pub fn show<'a>(&'a self, w: &'a AutExpr) -> Shown<'a> {
        Shown { system: self, expr: w }
    }

    /// Text form of a generator definition: `(w_1, .., w_m) root`.
    pub fn show_def(&self, g: GenId) -> Result<String> {
        let def = self.get(g)?;
        let entries = def.entries.as_ref().ok_or(Error::DepthExceeded { requested: 1, available: 0 })?;
        let parts: Vec<String> = entries.iter().map(|w| alloc::format!("{}", self.show(w))).collect();
        Ok(alloc::format!("({}) {}", parts.join(", "), def.root))
    }
}

/// Display adapter resolving generator names.
pub struct Shown<'a> {
    system: &'a System,
    expr: &'a AutExpr,
}

impl Shown<'_> {
    fn factor(&self, f: &Factor, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &f.base {
            Base::Gen(g) => out.write_str(self.system.name(*g))?,
            Base::Rooted(p) => write!(out, "perm{p}")?,
            Base::Tuple(v) => {
                out.write_str("(")?;
                for (i, w) in v.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    write!(out, "{}", self.system.show(w))?;
                }
                out.write_str(")")?;
            }
            Base::Word(w) => write!(out, "({})", self.system.show(w))?,
        }
        if let Some(q) = &f.exp {
            write!(out, "^{{{q}}}")?;
        }
        if f.shift > 0 {
            write!(out, "@{}", f.shift)?;
        }
        if f.inverse {
            out.write_str("^-1")?;
        }
        Ok(())
    }
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.is_empty() {
            return f.write_str("e");
        }
        for (i, factor) in self.expr.factors().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            self.factor(factor, f)?;
        }
        Ok(())
    }
}
