use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::madic::MAdicInt;
use super::series::PowerSeries;
use crate::error::{Error, Result};

/// A relator `r = m - q x^j` with `j >= 1`, split into its parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relator {
    r: PowerSeries,
    j: usize,
    q: PowerSeries,
}

impl Relator {
    /// Checks the shape `r(0) = m`, `r_1 = .. = r_(j-1) = 0` and splits off `q`.
    ///
    /// When every higher coefficient vanishes (`r = m`), `q = 0` and `j = 1`.
    pub fn new(r: &PowerSeries) -> Result<Self> {
        let m = r.modulus();
        let k = r.precision();
        if r.constant_term() != &MAdicInt::from_i64(m, k, m as i64) {
            return Err(Error::BadRelator(alloc::format!("constant term {} is not {m}", r.constant_term())));
        }
        let j = (1..=r.degree_bound()).find(|&i| !r.coeff(i).is_zero()).unwrap_or(1);
        let q = r.shift_down(j).neg();
        Ok(Relator { r: r.clone(), j, q })
    }

    /// Builds `m - q x^j` from its parts.
    pub fn from_parts(q: &PowerSeries, j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::BadRelator("j must be at least 1".into()));
        }
        let m = q.modulus();
        let k = q.precision();
        let mconst = PowerSeries::constant(MAdicInt::from_i64(m, k, m as i64), q.degree_bound());
        let r = mconst.sub(&q.shift_up(j))?;
        Ok(Relator { r, j, q: q.clone() })
    }

    pub fn series(&self) -> &PowerSeries {
        &self.r
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn q(&self) -> &PowerSeries {
        &self.q
    }

    pub fn modulus(&self) -> u32 {
        self.r.modulus()
    }

    pub fn degree_bound(&self) -> usize {
        self.r.degree_bound()
    }

    /// Carry normal form of an integer coefficient sequence.
    ///
    /// Degrees are processed in ascending order. An overflow `c` at degree
    /// `t` leaves `c mod m` and adds `floor(c / m) * q` from degree `t + j` on,
    /// using `m = q x^j` in the quotient. Carries past `D` are dropped.
    pub fn reduce_integers(&self, coeffs: &[BigInt]) -> QuotientElement {
        let d = self.degree_bound();
        let m = BigInt::from(self.modulus());
        let q: Vec<BigInt> = self.q.lifts();
        let mut c: Vec<BigInt> = (0..=d).map(|i| coeffs.get(i).cloned().unwrap_or_default()).collect();
        let mut digits = Vec::with_capacity(d + 1);
        for t in 0..=d {
            let (carry, rem) = c[t].div_mod_floor(&m);
            digits.push(rem.to_u32().expect("remainder below m"));
            if !carry.is_zero() {
                for (s, qs) in q.iter().enumerate() {
                    let at = t + self.j + s;
                    if at > d {
                        break;
                    }
                    if !qs.is_zero() {
                        c[at] += &carry * qs;
                    }
                }
            }
        }
        QuotientElement { relator: self.r.clone(), digits }
    }

    /// Normal form of a series, reducing its signed coefficient lifts.
    pub fn reduce(&self, s: &PowerSeries) -> Result<QuotientElement> {
        if s.modulus() != self.modulus() {
            return Err(Error::ContextMismatch { what: "modulus" });
        }
        Ok(self.reduce_integers(&s.lifts()))
    }

    pub fn reduce_i64s(&self, coeffs: &[i64]) -> QuotientElement {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        self.reduce_integers(&big)
    }
}

/// Canonical representative in `Z_m[[x]]/(r)`: digits in `[0, m)` for degrees `0..=D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientElement {
    relator: PowerSeries,
    digits: Vec<u32>,
}

impl QuotientElement {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn relator(&self) -> &PowerSeries {
        &self.relator
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Digits as a series at the relator's precision.
    pub fn to_series(&self) -> PowerSeries {
        let m = self.relator.modulus();
        let k = self.relator.precision();
        let d = self.relator.degree_bound();
        let ints: Vec<i64> = self.digits.iter().map(|&v| v as i64).collect();
        PowerSeries::from_i64s(m, k, d, &ints)
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.digits.iter().map(|&v| BigInt::from(v)).collect()
    }
}

impl fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_series())
    }
}

/// Convenience wrapper: parse the relator and reduce in one step.
pub fn reduce_mod_r(s: &PowerSeries, r: &PowerSeries) -> Result<QuotientElement> {
    Relator::new(r)?.reduce(s)
}
