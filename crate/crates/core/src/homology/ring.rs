//! Coefficient rings for exact elimination.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A commutative ring with a notion of admissible pivots.
///
/// Elimination only ever divides by elements for which [`Ring::is_unit`] holds,
/// so over the integers it performs unimodular operations only.
pub trait Ring: Sync + Send {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_int(&self, v: &BigInt) -> Self::E;
    fn from_i64(&self, v: i64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn is_unit(&self, a: &Self::E) -> bool;
    /// Inverse of a unit.
    fn inv(&self, a: &Self::E) -> Self::E;
}

/// The prime field `F_p` with `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p >= 1 << 32 || !is_prime(p) {
            return Err(Error::domain(format!("{p} is not a prime below 2^32")));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_int(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn inv(&self, a: &u64) -> u64 {
        self.pow(*a, self.p - 2)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_unit(&self, a: &BigRational) -> bool {
        !a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// The integers; only `±1` are admissible pivots.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        v.into()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn inv(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
}

/// Coefficients selectable from the outside.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Coefficients {
    Integers,
    Rationals,
    Prime(u64),
}

impl Coefficients {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "z" | "Z" => Ok(Coefficients::Integers),
            "q" | "Q" => Ok(Coefficients::Rationals),
            "f2" | "F2" => Ok(Coefficients::Prime(2)),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| {
                        Error::malformed(format!(
                            "unknown coefficients {s:?}; use z, q, f2 or fp:<p>"
                        ))
                    })?;
                PrimeField::new(p)?;
                Ok(Coefficients::Prime(p))
            }
        }
    }
}

impl std::fmt::Display for Coefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "z"),
            Coefficients::Rationals => write!(f, "q"),
            Coefficients::Prime(2) => write!(f, "f2"),
            Coefficients::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl From<Coefficients> for String {
    fn from(c: Coefficients) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Coefficients {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Coefficients::parse(&s)
    }
}
