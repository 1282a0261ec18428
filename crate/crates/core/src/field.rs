//! Exact scalar fields.
//!
//! A [`Field`] is a context object: prime fields carry their modulus at run
//! time, so arithmetic goes through the field rather than through operator
//! traits on the elements. [`RationalField`] is generic over any
//! `num-integer` integer type and is the characteristic-zero stand-in.

use std::fmt::Debug;
use std::hash::Hash;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
}

pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Ord + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;

    /// Whether a nonzero element lies in the distinguished "positive" half used
    /// to pick one of `{a, -a}`.
    fn is_positive(&self, a: &Self::Elem) -> bool;

    /// `p=<p>` or `Q`.
    fn descriptor(&self) -> String;
    fn modulus(&self) -> Option<u64>;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn parse_elem(&self, text: &str) -> Result<Self::Elem, FieldError>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Fields whose elements can be listed and sampled.
pub trait FiniteField: Field {
    fn order(&self) -> u64;
    fn element(&self, index: u64) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let a = self.random(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }

    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }
}

/// The prime field F_p for an odd prime `p < 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField, FieldError> {
        if p < 3 || p.is_multiple_of(2) || p >= 1 << 32 || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        let order = self.p - 1;
        let factors = prime_factors(order);
        (2..self.p)
            .find(|&g| factors.iter().all(|&q| self.pow(&g, order / q) != 1))
            .expect("multiplicative group of a prime field is cyclic")
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
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

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (g, x, _) = extended_gcd(*a as i64, self.p as i64);
        debug_assert_eq!(g, 1);
        Some(x.rem_euclid(self.p as i64) as u64)
    }

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits u64")
    }

    fn is_positive(&self, a: &u64) -> bool {
        *a >= 1 && *a <= (self.p - 1) / 2
    }

    fn descriptor(&self) -> String {
        format!("p={}", self.p)
    }

    fn modulus(&self) -> Option<u64> {
        Some(self.p)
    }

    fn elem_to_json(&self, a: &u64) -> Value {
        Value::from(*a)
    }

    fn parse_elem(&self, text: &str) -> Result<u64, FieldError> {
        let v: i64 = text.trim().parse().map_err(|_| FieldError::BadScalar(text.to_string()))?;
        Ok(self.from_i64(v))
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u64 {
        self.p
    }

    fn element(&self, index: u64) -> u64 {
        index % self.p
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Integer types usable as numerators/denominators of [`RationalField`].
pub trait ExactInteger:
    Integer + Signed + Clone + Debug + Hash + Send + Sync + FromPrimitive + ToPrimitive + std::str::FromStr + std::fmt::Display
{
    fn from_big(v: &BigInt) -> Self;
}

impl ExactInteger for BigInt {
    fn from_big(v: &BigInt) -> BigInt {
        v.clone()
    }
}

impl ExactInteger for i64 {
    fn from_big(v: &BigInt) -> i64 {
        v.to_i64().expect("integer coefficient overflows i64")
    }
}

impl ExactInteger for i128 {
    fn from_big(v: &BigInt) -> i128 {
        v.to_i128().expect("integer coefficient overflows i128")
    }
}

/// The rationals with numerators and denominators of type `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RationalField<T> {
    _int: PhantomData<T>,
}

impl<T> RationalField<T> {
    pub fn new() -> Self {
        RationalField { _int: PhantomData }
    }
}

impl<T: ExactInteger> Field for RationalField<T> {
    type Elem = Ratio<T>;

    fn zero(&self) -> Ratio<T> {
        Ratio::zero()
    }

    fn one(&self) -> Ratio<T> {
        Ratio::one()
    }

    fn add(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a + b
    }

    fn sub(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a - b
    }

    fn mul(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a * b
    }

    fn neg(&self, a: &Ratio<T>) -> Ratio<T> {
        -a.clone()
    }

    fn inv(&self, a: &Ratio<T>) -> Option<Ratio<T>> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn from_i64(&self, v: i64) -> Ratio<T> {
        Ratio::from_integer(T::from_i64(v).expect("i64 fits integer type"))
    }

    fn from_bigint(&self, v: &BigInt) -> Ratio<T> {
        Ratio::from_integer(T::from_big(v))
    }

    fn is_positive(&self, a: &Ratio<T>) -> bool {
        a.is_positive()
    }

    fn descriptor(&self) -> String {
        "Q".to_string()
    }

    fn modulus(&self) -> Option<u64> {
        None
    }

    fn elem_to_json(&self, a: &Ratio<T>) -> Value {
        if a.is_integer() {
            if let Some(v) = a.numer().to_i64() {
                return Value::from(v);
            }
        }
        Value::from(a.to_string())
    }

    fn parse_elem(&self, text: &str) -> Result<Ratio<T>, FieldError> {
        let bad = || FieldError::BadScalar(text.to_string());
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: T = num.parse().map_err(|_| bad())?;
        let den: T = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Ratio::new(num, den))
    }
}
