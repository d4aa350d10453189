use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Runtime description of a base field, as it appears in JSON files and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Prime { p: u64 },
    Rational,
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

/// An exact field. Elements carry no context; every operation goes through the
/// field value so that the modulus of a prime field lives in one place.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Parses a decimal scalar string such as `"3"` or `"-1/6"`.
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    /// Characteristic of the field; 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// A uniformly random element for prime fields; a small random integer for the rationals.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn from_ratio(&self, num: i64, den: i64) -> Result<Self::Elem> {
        self.div(&self.from_i64(num), &self.from_i64(den))
    }

    /// `acc += b * c`
    fn add_mul_assign(&self, acc: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        let prod = self.mul(b, c);
        *acc = self.add(acc, &prod);
    }
}

/// Multiplicative inverse; errors on zero.
pub fn scalar_inv<F: Field>(field: &F, a: &F::Elem) -> Result<F::Elem> {
    field.inv(a)
}

/// The prime field F_p with p >= 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 {
            return Err(Error::InvalidField(format!("characteristic {p} must be a prime >= 5")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("characteristic {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// All elements 0, 1, ..., p-1.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }

    fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
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

/// Extended Euclid: returns (g, s) with s*a = g (mod m).
fn ext_gcd(a: i128, m: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a % self.p == 0 {
            return Err(Error::DivisionByZero);
        }
        let (g, s) = ext_gcd(*a as i128, self.p as i128);
        debug_assert_eq!(g, 1);
        Ok(self.reduce_i128(s))
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid scalar {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                let n = bigint_mod(&n, self.p);
                let d = bigint_mod(&d, self.p);
                self.div(&n, &d)
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(bigint_mod(&n, self.p))
            }
        }
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    #[inline]
    fn add_mul_assign(&self, acc: &mut u64, b: &u64, c: &u64) {
        *acc = (*acc + b * c) % self.p;
    }
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    r.try_into().expect("residue fits in u64")
}

/// The field of rational numbers with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
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
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let r = BigRational::from_str(s).map_err(|_| Error::Parse(format!("invalid scalar {s:?}")))?;
        Ok(r)
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-9..=9))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent inverse by brute-force search.
    fn brute_inverse(a: u64, p: u64) -> Option<u64> {
        (1..p).find(|x| (a % p) * x % p == 1)
    }

    #[test]
    fn inverse_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.inv(&f5.from_i64(6)).unwrap(), 1);
        assert_eq!(brute_inverse(6, 5), Some(1));
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.inv(&f7.from_i64(6)).unwrap(), 6);
        assert_eq!(brute_inverse(6, 7), Some(6));
        assert_eq!(f7.inv(&1).unwrap(), 1);
        assert_eq!(Rationals.inv(&Rationals.one()).unwrap(), Rationals.one());
    }

    #[test]
    fn inverse_matches_brute_force() {
        for p in [5u64, 7, 11, 13, 101] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!(Some(f.inv(&a).unwrap()), brute_inverse(a, p));
            }
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = PrimeField::new(5).unwrap();
        assert!(matches!(f.inv(&0), Err(Error::DivisionByZero)));
        assert!(matches!(Rationals.inv(&Rationals.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn small_or_composite_characteristic_rejected() {
        for p in [0, 1, 2, 3, 4, 9, 25] {
            assert!(PrimeField::new(p).is_err(), "{p}");
        }
        assert!(PrimeField::new(5).is_ok());
    }

    #[test]
    fn scalar_strings() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.parse("-1/6").unwrap(), 4);
        assert_eq!(f.parse("7").unwrap(), 2);
        assert!(f.parse("1/5").is_err());
        let q = Rationals;
        let x = q.parse("-2/12").unwrap();
        assert_eq!(q.format(&x), "-1/6");
        assert_eq!(q.format(&q.from_i64(3)), "3");
        assert!(q.parse("abc").is_err());
    }

    #[test]
    fn rational_exactness() {
        let q = Rationals;
        let a = q.from_ratio(7, 3).unwrap();
        let b = q.from_ratio(-5, 11).unwrap();
        assert_eq!(q.mul(&q.div(&a, &b).unwrap(), &b), a);
    }

    #[test]
    fn residues_agree_with_integer_arithmetic() {
        let f = PrimeField::new(13).unwrap();
        for a in -30i64..30 {
            for b in -30i64..30 {
                let (x, y) = (f.from_i64(a), f.from_i64(b));
                assert_eq!(f.add(&x, &y), f.from_i64(a + b));
                assert_eq!(f.sub(&x, &y), f.from_i64(a - b));
                assert_eq!(f.mul(&x, &y), f.from_i64(a * b));
            }
        }
    }
}
