use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use super::madic::MAdicInt;
use crate::error::{Error, Result};

/// A power series over `Z_m` truncated after degree `D`.
///
/// Every coefficient shares the modulus and digit precision, and there are
/// always exactly `D + 1` of them.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerSeries {
    coeffs: Vec<MAdicInt>,
}

impl PowerSeries {
    pub fn zero(m: u32, k: usize, d: usize) -> Self {
        PowerSeries { coeffs: alloc::vec![MAdicInt::zero(m, k); d + 1] }
    }

    pub fn one(m: u32, k: usize, d: usize) -> Self {
        Self::constant(MAdicInt::one(m, k), d)
    }

    pub fn constant(c: MAdicInt, d: usize) -> Self {
        let mut s = Self::zero(c.modulus(), c.precision(), d);
        s.coeffs[0] = c;
        s
    }

    /// `c x^n`, or zero when `n > D`.
    pub fn monomial(m: u32, k: usize, d: usize, c: i64, n: usize) -> Self {
        let mut s = Self::zero(m, k, d);
        if n <= d {
            s.coeffs[n] = MAdicInt::from_i64(m, k, c);
        }
        s
    }

    /// Series with the given integer coefficients (extra ones beyond `D` dropped).
    pub fn from_i64s(m: u32, k: usize, d: usize, coeffs: &[i64]) -> Self {
        let mut s = Self::zero(m, k, d);
        for (i, &c) in coeffs.iter().enumerate().take(d + 1) {
            s.coeffs[i] = MAdicInt::from_i64(m, k, c);
        }
        s
    }

    pub fn from_bigints(m: u32, k: usize, d: usize, coeffs: &[BigInt]) -> Self {
        let mut s = Self::zero(m, k, d);
        for (i, c) in coeffs.iter().enumerate().take(d + 1) {
            s.coeffs[i] = MAdicInt::from_bigint(m, k, c);
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<MAdicInt>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| Error::Malformed("empty series".into()))?;
        let (m, k) = (first.modulus(), first.precision());
        if coeffs.iter().any(|c| c.modulus() != m || c.precision() != k) {
            return Err(Error::ContextMismatch { what: "series coefficients" });
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn modulus(&self) -> u32 {
        self.coeffs[0].modulus()
    }

    pub fn precision(&self) -> usize {
        self.coeffs[0].precision()
    }

    /// The degree bound `D`.
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[MAdicInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &MAdicInt {
        &self.coeffs[i]
    }

    pub fn constant_term(&self) -> &MAdicInt {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MAdicInt::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(MAdicInt::is_zero)
    }

    /// Index of the first non-zero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Highest index with a non-zero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Signed integer lifts of the coefficients.
    pub fn lifts(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(MAdicInt::lift).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ContextMismatch { what: "modulus" });
        }
        if self.precision() != other.precision() {
            return Err(Error::ContextMismatch { what: "digit precision" });
        }
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::ContextMismatch { what: "degree bound" });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add_unchecked(b)).collect();
        Ok(PowerSeries { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(MAdicInt::neg).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.degree_bound();
        let mut out = Self::zero(self.modulus(), self.precision(), d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=d - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = out.coeffs[i + j].add_unchecked(&a.mul_unchecked(b));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &MAdicInt) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect::<Result<_>>()?;
        Ok(PowerSeries { coeffs })
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a.mul_i64(c)).collect() }
    }

    /// Inverse, solving for one coefficient at a time.
    pub fn invert(&self) -> Result<Self> {
        let u0 = self.coeffs[0].invert()?;
        let d = self.degree_bound();
        let mut inv = Self::zero(self.modulus(), self.precision(), d);
        inv.coeffs[0] = u0.clone();
        for n in 1..=d {
            let mut acc = MAdicInt::zero(self.modulus(), self.precision());
            for i in 1..=n {
                acc = acc.add_unchecked(&self.coeffs[i].mul_unchecked(&inv.coeffs[n - i]));
            }
            inv.coeffs[n] = acc.neg().mul_unchecked(&u0);
        }
        Ok(inv)
    }

    /// Multiplication by `x^n`, truncated.
    pub fn shift_up(&self, n: usize) -> Self {
        let d = self.degree_bound();
        let zero = MAdicInt::zero(self.modulus(), self.precision());
        let coeffs = (0..=d).map(|i| if i >= n { self.coeffs[i - n].clone() } else { zero.clone() }).collect();
        PowerSeries { coeffs }
    }

    /// `(self - (terms below x^n)) / x^n`; the vacated top coefficients are zero.
    pub fn shift_down(&self, n: usize) -> Self {
        let d = self.degree_bound();
        let zero = MAdicInt::zero(self.modulus(), self.precision());
        let coeffs = (0..=d).map(|i| self.coeffs.get(i + n).cloned().unwrap_or_else(|| zero.clone())).collect();
        PowerSeries { coeffs }
    }

    /// Re-expresses the coefficients at digit precision `k` through their signed lifts.
    pub fn with_precision(&self, k: usize) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| c.with_precision(k)).collect() }
    }

    /// Truncates or zero-pads to degree bound `d`.
    pub fn with_degree_bound(&self, d: usize) -> Self {
        let zero = MAdicInt::zero(self.modulus(), self.precision());
        let coeffs = (0..=d).map(|i| self.coeffs.get(i).cloned().unwrap_or_else(|| zero.clone())).collect();
        PowerSeries { coeffs }
    }
}

impl fmt::Display for PowerSeries {
    /// Integer-literal form such as `2 - x + 3*x^2`, using signed lifts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = c.lift();
            if v == BigInt::from(0) {
                continue;
            }
            let neg = v < BigInt::from(0);
            let mag = if neg { -v } else { v };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag == BigInt::from(1);
            match (i, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]_{}", self.modulus())
    }
}
