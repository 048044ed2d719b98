use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::madic::{check_base, MAdicInt};
use super::quotient::{QuotientElement, Relator};
use super::series::PowerSeries;
use crate::error::{Error, Result};

/// The base `m` with its prime factorization and a digit precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    m: u32,
    factors: Vec<(u32, u32)>,
    k: usize,
}

impl Modulus {
    pub fn new(m: u32, k: usize) -> Result<Self> {
        check_base(m)?;
        if k == 0 {
            return Err(Error::InvalidContext("precision K must be at least 1".into()));
        }
        let mut factors = Vec::new();
        let mut rest = m;
        let mut p = 2;
        while p * p <= rest {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
            p += 1;
        }
        if rest > 1 {
            factors.push((rest, 1));
        }
        Ok(Modulus { m, factors, k })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn precision(&self) -> usize {
        self.k
    }

    /// `(p, k)` pairs with `p` strictly increasing.
    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    /// `Some((p, k))` when `m = p^k`.
    pub fn prime_power(&self) -> Option<(u32, u32)> {
        match self.factors.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }

    /// Orthogonal idempotents, one per prime: `e_i = 1` modulo `p_i^(k_i K)` and
    /// `0` modulo the complementary factor of `m^K`.
    pub fn idempotents(&self) -> Vec<MAdicInt> {
        let k = self.k as u32;
        self.factors
            .iter()
            .map(|&(p, e)| {
                let part = BigInt::from(p).pow(e * k);
                let rest = BigInt::from(self.m / p.pow(e)).pow(k);
                let g = rest.extended_gcd(&part);
                debug_assert!(g.gcd.is_one());
                let eps = (&rest * g.x.mod_floor(&part)).mod_floor(&(&rest * &part));
                MAdicInt::from_bigint(self.m, self.k, &eps)
            })
            .collect()
    }
}

/// Splitting `q = x^l u + p t` with `u` invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub l: usize,
    pub u: PowerSeries,
    pub t: PowerSeries,
}

/// Separates the coefficients of `q` whose last digit is prime to `p` (the
/// unit part `s = x^l u`) from those divisible by `p` (giving `p t`).
pub fn unit_decompose(q: &PowerSeries, p: u32) -> Result<UnitDecomposition> {
    let m = q.modulus();
    let k = q.precision();
    let d = q.degree_bound();
    if !m.is_multiple_of(p) {
        return Err(Error::InvalidContext(alloc::format!("{p} does not divide {m}")));
    }
    let bp = BigInt::from(p);
    let mut s = Vec::with_capacity(d + 1);
    let mut t = Vec::with_capacity(d + 1);
    for c in q.coeffs() {
        let v = c.lift();
        if v.is_multiple_of(&bp) {
            s.push(BigInt::zero());
            t.push(v / &bp);
        } else {
            s.push(v);
            t.push(BigInt::zero());
        }
    }
    let s = PowerSeries::from_bigints(m, k, d, &s);
    let l = s.valuation().ok_or(Error::AllDivisible)?;
    Ok(UnitDecomposition { l, u: s.shift_down(l), t: PowerSeries::from_bigints(m, k, d, &t) })
}

/// Result of the constructive congruence step: `x^l_total = p w` modulo `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceExponent {
    pub l_total: usize,
    pub witness: PowerSeries,
}

/// For `m = p^k` and `r = p^k - q x^j`, produces `w = (p^(k-1) - t x^j) u^(-1)`
/// with `x^(j+l) = p w` in `Z_m[[x]]/(r)`, and checks it by reduction.
///
/// The witness is computed at a digit precision above `D`, so that the error
/// of truncating `m`-adic coefficients is pushed past degree `D` by the carries.
pub fn congruence_exponent(r: &PowerSeries, p: u32, k: u32) -> Result<CongruenceExponent> {
    let m = r.modulus();
    if p.checked_pow(k) != Some(m) {
        return Err(Error::InvalidContext(alloc::format!("{m} is not {p}^{k}")));
    }
    let d = r.degree_bound();
    let kw = r.precision().max(d + 2);
    let rw = r.with_precision(kw);
    let rel = Relator::new(&rw)?;
    let j = rel.j();
    let dec = unit_decompose(rel.q(), p)?;
    let pk1 = PowerSeries::monomial(m, kw, d, (p as i64).pow(k - 1), 0);
    let w = pk1.sub(&dec.t.shift_up(j))?.mul(&dec.u.invert()?)?;
    let l_total = j + dec.l;
    let lhs = PowerSeries::monomial(m, kw, d, 1, l_total).sub(&w.scale_i64(p as i64))?;
    if !rel.reduce(&lhs)?.is_zero() {
        return Err(Error::BadRelator("congruence witness failed to reduce to zero".into()));
    }
    Ok(CongruenceExponent { l_total, witness: w.with_precision(r.precision()) })
}

/// Topological generators `1, x, .., x^(l-1)` of `Z_m[[x]]/(r)` as a pro-`m`
/// group, with `l` the largest congruence exponent over the prime components.
pub fn pro_m_generators(r: &PowerSeries) -> Result<(usize, Vec<QuotientElement>)> {
    let m = r.modulus();
    let k = r.precision();
    let d = r.degree_bound();
    let rel = Relator::new(r)?;
    let modulus = Modulus::new(m, k)?;
    let mut l = 0;
    for &(p, e) in modulus.factors() {
        let pe = p.pow(e);
        let component = if pe == m {
            r.clone()
        } else {
            // Coordinates in Z_{p^e}: the value modulo p^(eK) divides m^K.
            let coeffs: Vec<MAdicInt> = r.coeffs().iter().map(|c| MAdicInt::from_bigint(pe, k, &c.lift())).collect();
            let projected = PowerSeries::from_coeffs(coeffs)?;
            let cofactor = MAdicInt::from_i64(pe, k, (m / pe) as i64).invert()?;
            projected.scale(&cofactor)?
        };
        l = l.max(congruence_exponent(&component, p, e)?.l_total);
    }
    let gens = (0..l).map(|i| rel.reduce(&PowerSeries::monomial(m, k, d, 1, i))).collect::<Result<Vec<_>>>()?;
    Ok((l, gens))
}
