use alloc::vec;
use alloc::vec::Vec;

use crate::adic::PowerSeries;
use crate::perm::Permutation;

/// Index of a generator inside a [`System`](super::System).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub u32);

/// What a factor raises to a power.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    /// A named generator of the system.
    Gen(GenId),
    /// The permutation at the root and identity everywhere below.
    Rooted(Permutation),
    /// `(w_1, .., w_m)` with identity root.
    Tuple(Vec<AutExpr>),
    /// A bracketed word.
    Word(AutExpr),
}

/// `((B^q)^(shift))^(-1 if inverse)`, where `^(s)` is the diagonal map applied `s` times.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub base: Base,
    /// `None` means the exponent 1.
    pub exp: Option<PowerSeries>,
    pub shift: usize,
    pub inverse: bool,
}

impl Factor {
    pub fn plain(base: Base) -> Self {
        Factor { base, exp: None, shift: 0, inverse: false }
    }
}

/// A formal product of factors, read left to right. The empty word is `e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AutExpr {
    factors: Vec<Factor>,
}

impl AutExpr {
    pub fn identity() -> Self {
        AutExpr::default()
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        AutExpr { factors }
    }

    pub fn factor(f: Factor) -> Self {
        AutExpr { factors: vec![f] }
    }

    pub fn gen(g: GenId) -> Self {
        Self::factor(Factor::plain(Base::Gen(g)))
    }

    /// `g^q`.
    pub fn gen_pow(g: GenId, q: PowerSeries) -> Self {
        Self::factor(Factor { base: Base::Gen(g), exp: Some(q), shift: 0, inverse: false })
    }

    pub fn rooted(p: Permutation) -> Self {
        if p.is_identity() {
            return Self::identity();
        }
        Self::factor(Factor::plain(Base::Rooted(p)))
    }

    pub fn tuple(entries: Vec<AutExpr>) -> Self {
        if entries.iter().all(AutExpr::is_empty) {
            return Self::identity();
        }
        Self::factor(Factor::plain(Base::Tuple(entries)))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// True for the empty word (the syntactic identity).
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &AutExpr) -> AutExpr {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        AutExpr { factors }
    }

    pub fn inv(&self) -> AutExpr {
        let factors = self.factors.iter().rev().map(|f| Factor { inverse: !f.inverse, ..f.clone() }).collect();
        AutExpr { factors }
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, other: &AutExpr) -> AutExpr {
        self.inv().mul(&other.inv()).mul(self).mul(other)
    }

    /// The diagonal image `self^(i)`, i.e. `self^(x^i)`.
    pub fn diagonal(&self, i: usize) -> AutExpr {
        if i == 0 {
            return self.clone();
        }
        let factors = self.factors.iter().map(|f| Factor { shift: f.shift + i, ..f.clone() }).collect();
        AutExpr { factors }
    }

    /// `self^q`. A single plain factor takes the exponent directly; anything
    /// else is bracketed first.
    pub fn pow_series(&self, q: &PowerSeries) -> AutExpr {
        if self.is_empty() || q.is_zero() {
            return Self::identity();
        }
        if q.is_one() {
            return self.clone();
        }
        if let [f] = self.factors.as_slice() {
            if f.exp.is_none() && !f.inverse {
                return Self::factor(Factor { exp: Some(q.clone()), ..f.clone() });
            }
        }
        Self::factor(Factor { base: Base::Word(self.clone()), exp: Some(q.clone()), shift: 0, inverse: false })
    }

    /// Generators mentioned anywhere in the word.
    pub fn generators(&self, out: &mut Vec<GenId>) {
        for f in &self.factors {
            match &f.base {
                Base::Gen(g) => out.push(*g),
                Base::Rooted(_) => {}
                Base::Tuple(v) => v.iter().for_each(|w| w.generators(out)),
                Base::Word(w) => w.generators(out),
            }
        }
    }
}
