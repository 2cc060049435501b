//! Exact coefficient fields.
//!
//! Everything above this module is generic over [`Field`]. Rational numbers
//! are arbitrary-precision ([`num_rational::BigRational`]); prime fields carry
//! their modulus in every element so that values stay self-describing and
//! arithmetic needs no ambient context.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Runtime description of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefField {
    Rationals,
    PrimeField(u32),
}

impl CoefField {
    pub fn prime(p: u64) -> Result<Self> {
        PrimeField::new(p).map(|f| CoefField::PrimeField(f.modulus()))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefField::Rationals => 0,
            CoefField::PrimeField(p) => *p as u64,
        }
    }
}

impl Display for CoefField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefField::Rationals => write!(f, "Q"),
            CoefField::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field whose elements know enough about themselves to be combined
/// with the std operators. Constants need the field context (`Ctx`).
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    type Ctx: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    fn from_bigint(ctx: &Self::Ctx, n: &BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn describe(ctx: &Self::Ctx) -> CoefField;
    /// Sign-magnitude rendering used by the polynomial printer.
    fn signed_parts(&self) -> (bool, String);

    fn characteristic(ctx: &Self::Ctx) -> u64 {
        Self::describe(ctx).characteristic()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    fn pow(&self, mut e: u64) -> Self
    where
        Self: Sized,
    {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }

    /// Zero of the same field as `self`.
    fn zero_like(&self) -> Self {
        self.clone() - self
    }

    /// One of the same field as `self`.
    fn one_like(&self) -> Self;

    /// A finite list containing every root in the field of the univariate
    /// polynomial with coefficients `coeffs` (constant term first, leading
    /// coefficient nonzero), or `None` when no such search is affordable.
    fn root_candidates(coeffs: &[Self]) -> Option<Vec<Self>>;
}

const ROOT_SEARCH_LIMIT: u64 = 1 << 16;

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return Some(vec![BigInt::one()]);
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if d > ROOT_SEARCH_LIMIT {
            return None;
        }
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Unit context for the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RationalField;

pub type Rational = BigRational;

impl Field for BigRational {
    type Ctx = RationalField;

    fn zero(_: &RationalField) -> Self {
        Zero::zero()
    }
    fn one(_: &RationalField) -> Self {
        One::one()
    }
    fn from_i64(_: &RationalField, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(_: &RationalField, n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn describe(_: &RationalField) -> CoefField {
        CoefField::Rationals
    }
    fn signed_parts(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
    fn one_like(&self) -> Self {
        One::one()
    }
    fn root_candidates(coeffs: &[Self]) -> Option<Vec<Self>> {
        // rational root theorem on the primitive integer multiple
        let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let low = ints.iter().position(|c| !c.is_zero())?;
        let mut out = Vec::new();
        if low > 0 {
            out.push(<BigRational as Zero>::zero());
        }
        let nums = small_divisors(&ints[low])?;
        let dens = small_divisors(ints.last()?)?;
        for a in &nums {
            for b in &dens {
                let r = BigRational::new(a.clone(), b.clone());
                if !out.contains(&r) {
                    out.push(r.clone());
                    out.push(-r);
                }
            }
        }
        Some(out)
    }
}

/// Context for `F_p`; the modulus is checked prime at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1u64 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn element(&self, v: i64) -> Fp {
        Fp::from_i64(self, v)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of a prime field, stored with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u32,
    p: u32,
}

impl Fp {
    pub fn value(&self) -> u32 {
        self.v
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    fn check(&self, other: &Fp) {
        debug_assert_eq!(self.p, other.p, "mixing prime fields");
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.p)
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, mag) = self.signed_parts();
        if neg {
            write!(f, "-{mag}")
        } else {
            write!(f, "{mag}")
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        let s = self.v as u64 + rhs.v as u64;
        Fp { v: (s % self.p as u64) as u32, p: self.p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        let s = self.v as u64 + self.p as u64 - rhs.v as u64;
        Fp { v: (s % self.p as u64) as u32, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        let s = self.v as u64 * rhs.v as u64;
        Fp { v: (s % self.p as u64) as u32, p: self.p }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
}

impl<'a> Add<&'a Fp> for Fp {
    type Output = Fp;
    fn add(self, rhs: &'a Fp) -> Fp {
        self + *rhs
    }
}

impl<'a> Sub<&'a Fp> for Fp {
    type Output = Fp;
    fn sub(self, rhs: &'a Fp) -> Fp {
        self - *rhs
    }
}

impl<'a> Mul<&'a Fp> for Fp {
    type Output = Fp;
    fn mul(self, rhs: &'a Fp) -> Fp {
        self * *rhs
    }
}

impl Field for Fp {
    type Ctx = PrimeField;

    fn zero(ctx: &PrimeField) -> Self {
        Fp { v: 0, p: ctx.p }
    }
    fn one(ctx: &PrimeField) -> Self {
        Fp { v: 1 % ctx.p, p: ctx.p }
    }
    fn from_i64(ctx: &PrimeField, n: i64) -> Self {
        Fp { v: n.rem_euclid(ctx.p as i64) as u32, p: ctx.p }
    }
    fn from_bigint(ctx: &PrimeField, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(ctx.p));
        Fp { v: r.to_u32().expect("reduced residue fits"), p: ctx.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn is_one(&self) -> bool {
        self.v == 1
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        // extended Euclid on (v, p)
        let (mut r0, mut r1) = (self.p as i64, self.v as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(Fp { v: s0.rem_euclid(self.p as i64) as u32, p: self.p })
    }
    fn describe(ctx: &PrimeField) -> CoefField {
        CoefField::PrimeField(ctx.p)
    }
    fn signed_parts(&self) -> (bool, String) {
        if self.v > self.p / 2 {
            (true, (self.p - self.v).to_string())
        } else {
            (false, self.v.to_string())
        }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1 % self.p, p: self.p }
    }
    fn root_candidates(coeffs: &[Self]) -> Option<Vec<Self>> {
        let p = coeffs.first()?.p;
        if p as u64 > ROOT_SEARCH_LIMIT {
            return None;
        }
        Some((0..p).map(|v| Fp { v, p }).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(PrimeField::new(7).is_ok());
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(1 << 31).is_err());
    }

    #[test]
    fn fp_inverse_and_pow() {
        let f = PrimeField::new(7).unwrap();
        for v in 1..7 {
            let a = f.element(v);
            assert!((a * a.inv().unwrap()).is_one());
        }
        assert_eq!(f.element(3).pow(6), f.element(1));
        assert_eq!(f.element(-1).to_string(), "-1");
        let big = PrimeField::new(2_147_483_647).unwrap();
        let a = big.element(2_147_483_646);
        assert!((a * a).is_one());
    }

    #[test]
    fn rational_basics() {
        let c = RationalField;
        let half = Rational::from_i64(&c, 1).div(&Rational::from_i64(&c, 2)).unwrap();
        assert_eq!(half.to_string(), "1/2");
        assert!(<Rational as Field>::zero(&c).inv().is_none());
        assert_eq!(half.pow(3), Rational::new(1.into(), 8.into()));
    }
}
