use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Which exact field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u32),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "gf{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim().to_ascii_lowercase();
        if t == "rational" || t == "q" {
            return Ok(FieldSpec::Rational);
        }
        let digits = t
            .strip_prefix("gf")
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}` (expected rational or gfP)")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime in field `{s}`")))?;
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not a prime below 2^31")));
        }
        Ok(FieldSpec::Prime(p as u32))
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field. Elements are plain values; the field object carries any
/// parameters (the characteristic for GF(p)).
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// `acc -= a * b`
    fn sub_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem);
    /// `acc += a * b`
    fn add_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem);
    fn parse(&self, s: &str) -> Result<Self::Elem, Error>;
    fn format(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut out = self.one();
        for _ in 0..e.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
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
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn sub_mul_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if a.is_integer() && b.is_integer() && acc.is_integer() {
            let v = acc.numer() - a.numer() * b.numer();
            *acc = BigRational::from_integer(v);
        } else {
            *acc -= a * b;
        }
    }
    fn add_mul_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if a.is_integer() && b.is_integer() && acc.is_integer() {
            let v = acc.numer() + a.numer() * b.numer();
            *acc = BigRational::from_integer(v);
        } else {
            *acc += a * b;
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational, Error> {
        let t = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not a rational of the form p or p/q"));
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(BigRational::new(n, d))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            let sign = if a.is_negative() { "-" } else { "" };
            format!("{sign}{}/{}", a.numer().abs(), a.denom())
        }
    }
}

/// GF(p) with p < 2^31, residues kept in 0..p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, Error> {
        if !is_prime(p as u64) || p >= 1 << 31 {
            return Err(Error::Parse(format!("{p} is not a prime below 2^31")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(*a as u64 + *b as u64)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(*a as u64 + (self.p - *b) as u64)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(*a as u64 * *b as u64)
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = *a as u64;
        let mut e = self.p as u64 - 2;
        let mut out = 1u64;
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                out = out * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Some(out as u32)
    }
    fn sub_mul_assign(&self, acc: &mut u32, a: &u32, b: &u32) {
        let prod = self.mul(a, b);
        *acc = self.sub(acc, &prod);
    }
    fn add_mul_assign(&self, acc: &mut u32, a: &u32, b: &u32) {
        let prod = self.mul(a, b);
        *acc = self.add(acc, &prod);
    }
    fn parse(&self, s: &str) -> Result<u32, Error> {
        let q = Rationals.parse(s)?;
        let n = big_mod(q.numer(), self.p);
        let d = big_mod(q.denom(), self.p);
        let dinv = self
            .inv(&d)
            .ok_or_else(|| Error::Parse(format!("denominator of `{s}` vanishes mod {}", self.p)))?;
        Ok(self.mul(&n, &dinv))
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
}

fn big_mod(v: &BigInt, p: u32) -> u32 {
    let r = v % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    u32::try_from(r).expect("residue below p")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_round_trip() {
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("gf5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert_eq!(FieldSpec::Prime(7).to_string(), "gf7");
        assert!("gf6".parse::<FieldSpec>().is_err());
        assert!("gf1".parse::<FieldSpec>().is_err());
        assert!("reals".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn prime_field_inverses_exhaustive() {
        for p in [2u32, 3, 5, 7, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
            assert_eq!(f.inv(&0), None);
        }
    }

    #[test]
    fn parse_and_format() {
        let q = Rationals;
        let x = q.parse("-6/4").unwrap();
        assert_eq!(q.format(&x), "-3/2");
        assert_eq!(q.format(&q.parse("7").unwrap()), "7");
        assert!(q.parse("1/0").is_err());
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), 3);
        assert_eq!(f.parse("-1").unwrap(), 4);
        assert!(f.parse("1/5").is_err());
    }

    #[test]
    fn pow_with_negative_exponent() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.pow(&2, -1), Some(3));
        assert_eq!(f.pow(&2, 4), Some(1));
        assert_eq!(Rationals.pow(&Rationals.from_i64(2), -2), Some(Rationals.parse("1/4").unwrap()));
    }
}
