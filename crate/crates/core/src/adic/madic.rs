use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of `Z_m` known modulo `m^K`, stored as `K` little-endian base-`m`
/// digits.
///
/// Integers beyond the stored digits are read with sign extension: a top
/// digit of `m - 1` continues with `m - 1` forever, anything else with zeros.
/// This makes every integer of absolute value below roughly `m^K / 2` exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MAdicInt {
    m: u32,
    digits: Vec<u32>,
}

pub(crate) fn check_base(m: u32) -> Result<()> {
    if !(2..=65536).contains(&m) {
        return Err(Error::InvalidContext(alloc::format!("modulus {m} outside 2..=65536")));
    }
    Ok(())
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

impl MAdicInt {
    pub fn zero(m: u32, k: usize) -> Self {
        assert!(k >= 1, "precision must be at least one digit");
        MAdicInt { m, digits: vec![0; k] }
    }

    pub fn one(m: u32, k: usize) -> Self {
        let mut z = Self::zero(m, k);
        z.digits[0] = 1;
        z
    }

    pub fn from_i64(m: u32, k: usize, v: i64) -> Self {
        Self::from_bigint(m, k, &BigInt::from(v))
    }

    /// Reduces an arbitrary integer modulo `m^K`.
    pub fn from_bigint(m: u32, k: usize, v: &BigInt) -> Self {
        let modk = BigInt::from(m).pow(k as u32);
        let mut r = v.mod_floor(&modk).to_biguint().expect("non-negative after mod_floor");
        let mut digits = vec![0u32; k];
        let bm = BigUint::from(m);
        for d in digits.iter_mut() {
            if r.is_zero() {
                break;
            }
            let (q, rem) = r.div_rem(&bm);
            *d = rem.to_u32().expect("digit fits");
            r = q;
        }
        MAdicInt { m, digits }
    }

    pub fn from_digits(m: u32, digits: Vec<u32>) -> Result<Self> {
        check_base(m)?;
        if digits.is_empty() || digits.iter().any(|&d| d >= m) {
            return Err(Error::Malformed("digits must be non-empty and below m".into()));
        }
        Ok(MAdicInt { m, digits })
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn digit(&self, i: usize) -> u32 {
        self.digits.get(i).copied().unwrap_or_else(|| self.extension_digit())
    }

    /// The digit assumed beyond the stored precision.
    pub fn extension_digit(&self) -> u32 {
        if *self.digits.last().unwrap() == self.m - 1 {
            self.m - 1
        } else {
            0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn is_one(&self) -> bool {
        self.digits[0] == 1 && self.digits[1..].iter().all(|&d| d == 0)
    }

    /// Units of `Z_m` are exactly the elements whose last digit is prime to `m`.
    pub fn is_unit(&self) -> bool {
        (self.digits[0] as u64).gcd(&(self.m as u64)) == 1
    }

    /// Value in `[0, m^K)`.
    pub fn value(&self) -> BigUint {
        let bm = BigUint::from(self.m);
        let mut v = BigUint::zero();
        for &d in self.digits.iter().rev() {
            v = v * &bm + BigUint::from(d);
        }
        v
    }

    /// Signed integer representative under the sign-extension convention.
    pub fn lift(&self) -> BigInt {
        let v = BigInt::from_biguint(Sign::Plus, self.value());
        if self.extension_digit() == 0 {
            v
        } else {
            v - BigInt::from(self.m).pow(self.precision() as u32)
        }
    }

    /// The lift as a machine integer, when it fits.
    pub fn to_i64(&self) -> Option<i64> {
        self.lift().to_i64()
    }

    /// Same element re-expressed at another precision through the signed lift.
    pub fn with_precision(&self, k: usize) -> Self {
        if k == self.precision() {
            return self.clone();
        }
        Self::from_bigint(self.m, k, &self.lift())
    }

    /// Value modulo `m^t` as a small integer (`t` digits, sign-extended).
    pub fn low_digits(&self, t: usize) -> BigUint {
        let bm = BigUint::from(self.m);
        let mut v = BigUint::zero();
        for i in (0..t).rev() {
            v = v * &bm + BigUint::from(self.digit(i));
        }
        v
    }

    /// `(self - (self mod m^t)) / m^t`, filling vacated top digits by sign extension.
    pub fn shift_down(&self, t: usize) -> Self {
        let ext = self.extension_digit();
        let digits = (0..self.precision()).map(|i| self.digits.get(i + t).copied().unwrap_or(ext)).collect();
        MAdicInt { m: self.m, digits }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::ContextMismatch { what: "modulus" });
        }
        if self.digits.len() != other.digits.len() {
            return Err(Error::ContextMismatch { what: "digit precision" });
        }
        Ok(())
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let m = self.m as u64;
        let mut carry = 0u64;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| {
                let s = a as u64 + b as u64 + carry;
                carry = s / m;
                (s % m) as u32
            })
            .collect();
        MAdicInt { m: self.m, digits }
    }

    pub(crate) fn neg_unchecked(&self) -> Self {
        let comp = MAdicInt { m: self.m, digits: self.digits.iter().map(|&d| self.m - 1 - d).collect() };
        comp.add_unchecked(&Self::one(self.m, self.precision()))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let k = self.precision();
        let m = self.m as u128;
        let mut acc = vec![0u128; k];
        for (i, &a) in self.digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.digits[..k - i].iter().enumerate() {
                acc[i + j] += a as u128 * b as u128;
            }
        }
        let mut carry = 0u128;
        let digits = acc
            .into_iter()
            .map(|v| {
                let s = v + carry;
                carry = s / m;
                (s % m) as u32
            })
            .collect();
        MAdicInt { m: self.m, digits }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg_unchecked()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn neg(&self) -> Self {
        self.neg_unchecked()
    }

    pub fn mul_i64(&self, c: i64) -> Self {
        self.mul_unchecked(&Self::from_i64(self.m, self.precision(), c))
    }

    /// Inverse by lifting one digit at a time: after step `t` the partial
    /// inverse is correct modulo `m^(t+1)`.
    pub fn invert(&self) -> Result<Self> {
        let m = self.m as u64;
        let inv0 = inverse_mod(self.digits[0] as u64, m).ok_or(Error::NonUnit)?;
        let k = self.precision();
        let one = Self::one(self.m, k);
        let mut u = Self::zero(self.m, k);
        for t in 0..k {
            let residual = one.add_unchecked(&self.mul_unchecked(&u).neg_unchecked());
            let e = residual.digits[t] as u64;
            u.digits[t] = ((e * inv0) % m) as u32;
        }
        debug_assert!(self.mul_unchecked(&u).is_one());
        Ok(u)
    }
}

impl fmt::Debug for MAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.lift(), self.m)
    }
}

impl fmt::Display for MAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lift())
    }
}

/// `m^k` as a big integer.
pub fn power(m: u32, k: usize) -> BigUint {
    BigUint::from(m).pow(k as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_carry() {
        let one = MAdicInt::one(2, 4);
        assert_eq!(one.add(&one).unwrap().digits(), &[0, 1, 0, 0]);
    }

    #[test]
    fn decimal_product() {
        let a = MAdicInt::from_i64(10, 3, 7);
        let b = MAdicInt::from_i64(10, 3, 8);
        assert_eq!(a.mul(&b).unwrap().digits(), &[6, 5, 0]);
    }

    #[test]
    fn minus_one_is_all_top_digits() {
        // m^K - 1 written in base m
        let v = MAdicInt::one(6, 4).neg();
        assert_eq!(v.digits(), &[5, 5, 5, 5]);
        assert_eq!(v.value(), power(6, 4) - 1u32);
        assert_eq!(v.lift(), BigInt::from(-1));
    }

    #[test]
    fn invert_three_mod_32() {
        let three = MAdicInt::from_i64(2, 5, 3);
        let u = three.invert().unwrap();
        assert_eq!(u.value(), BigUint::from(11u32));
    }

    #[test]
    fn invert_one_and_zero_divisor() {
        assert!(MAdicInt::one(5, 3).invert().unwrap().is_one());
        assert_eq!(MAdicInt::from_i64(4, 3, 2).invert(), Err(Error::NonUnit));
    }

    #[test]
    fn mismatch_is_error() {
        let a = MAdicInt::one(3, 4);
        assert!(a.add(&MAdicInt::one(3, 5)).is_err());
        assert!(a.mul(&MAdicInt::one(5, 4)).is_err());
    }

    #[test]
    fn shift_down_integers() {
        let v = MAdicInt::from_i64(2, 8, 5);
        assert_eq!(v.shift_down(1).lift(), BigInt::from(2));
        let n = MAdicInt::from_i64(3, 6, -7);
        // -7 = 2 + 3 * (-3)
        assert_eq!(n.digit(0), 2);
        assert_eq!(n.shift_down(1).lift(), BigInt::from(-3));
    }
}
