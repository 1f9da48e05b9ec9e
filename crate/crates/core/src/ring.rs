//! Coefficient rings for series and polynomials.
//!
//! Series are generic over a [`CoeffRing`], a small context object that
//! knows how to combine elements. Two families are provided: residues
//! modulo `p^K` ([`ModRing`]) and the integers over any num-traits signed
//! scalar ([`Integers`]).

use std::fmt::{self, Debug};
use std::marker::PhantomData;

use num_traits::{Num, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait CoeffRing: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse, if `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
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

/// `Z/p^K` with residues stored canonically in `0..p^K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModRing {
    p: u64,
    k: u32,
    modulus: u64,
}

impl ModRing {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::Precondition("precision K must be positive".into()));
        }
        let modulus = p.checked_pow(k).ok_or(Error::ModulusOverflow { p, k })?;
        Ok(ModRing { p, k, modulus })
    }

    /// The prime field `F_p`.
    pub fn field(p: u64) -> Result<Self> {
        ModRing::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }

    /// Largest `e <= K` with `p^e | a`; `K` for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        let mut a = a % self.modulus;
        if a == 0 {
            return self.k;
        }
        let mut e = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            e += 1;
        }
        e
    }

    /// Symmetric representative in `(-p^K/2, p^K/2]`.
    pub fn signed(&self, a: u64) -> i64 {
        let a = a % self.modulus;
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.modulus;
        a %= self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &a);
            }
            a = self.mul(&a, &a);
            e >>= 1;
        }
        r
    }
}

impl fmt::Display for ModRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.k)
    }
}

impl CoeffRing for ModRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.modulus
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.reduce(v as i128)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.modulus as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        // extended Euclid on (a, p^K)
        let (mut r0, mut r1) = (self.modulus as i128, (*a % self.modulus) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce(t0))
    }
}

/// The integers, carried by any signed num-traits scalar (`i64`, `i128`, `BigInt`).
pub struct Integers<T>(PhantomData<T>);

impl<T> Integers<T> {
    pub fn new() -> Self {
        Integers(PhantomData)
    }
}

impl<T> Default for Integers<T> {
    fn default() -> Self {
        Integers::new()
    }
}

impl<T> Clone for Integers<T> {
    fn clone(&self) -> Self {
        Integers::new()
    }
}

impl<T> PartialEq for Integers<T> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl<T> Debug for Integers<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Integers<{}>", std::any::type_name::<T>())
    }
}

impl<T> CoeffRing for Integers<T>
where
    T: Num + Signed + Clone + Debug + From<i64> + ToPrimitive + Send + Sync,
{
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }

    fn one(&self) -> T {
        T::one()
    }

    fn from_i64(&self, v: i64) -> T {
        T::from(v)
    }

    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }

    fn neg(&self, a: &T) -> T {
        -a.clone()
    }

    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }

    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }

    fn inv(&self, a: &T) -> Option<T> {
        if a.is_one() || (-a.clone()).is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
}
