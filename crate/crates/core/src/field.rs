//! Exact base fields.
//!
//! Two backends share the [`Field`] interface: [`PrimeField`] (odd primes
//! below 2^32, elements stored as reduced `u64`) and [`Rationals`]
//! (arbitrary-precision fractions kept in lowest terms). Every algorithm in
//! the crate is generic over `F: Field`; a field value is a small context
//! object that is passed alongside the elements it operates on.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};

/// Default prime: 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Half-width of the integer box random rationals are drawn from.
pub const RATIONAL_SAMPLE_BOUND: i64 = 1000;

/// Serialized field identity: `"Q"` or `"Fp:<p>"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rationals,
    Prime(u64),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(FieldTag::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("unknown field tag {s:?}")))?;
        Ok(FieldTag::Prime(p))
    }
}

impl Serialize for FieldTag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldTag {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field together with its element representation.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn tag(&self) -> FieldTag;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// A square root when one exists in the field.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Uniform draw from the field's sample space (all of 𝔽_p, or a box of
    /// small integers for ℚ).
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Size of the sample space used by [`Field::sample`].
    fn sample_space_size(&self) -> u64;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// Reduce `m` to reduced row echelon form in place and return the pivot
    /// columns. Backends may override the elimination strategy.
    fn echelonize(&self, m: &mut Matrix<Self>) -> Vec<usize> {
        matrix::gauss_jordan(self, m)
    }

    /// Rescale a nonzero vector to a convenient representative of its
    /// projective class (primitive integers over ℚ, unchanged over 𝔽_p).
    fn primitive(&self, v: &[Self::Elem]) -> Vec<Self::Elem> {
        v.to_vec()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let inv = self.inv(b).expect("division by zero field element");
        self.mul(a, &inv)
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

    /// `acc + a * b`.
    fn mul_add(&self, acc: &Self::Elem, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(acc, &self.mul(a, b))
    }

    fn from_u64(&self, v: u64) -> Self::Elem {
        match i64::try_from(v) {
            Ok(v) => self.from_i64(v),
            Err(_) => {
                let hi = self.from_i64((v >> 32) as i64);
                let shift = self.from_i64(1i64 << 32);
                self.add(&self.mul(&hi, &shift), &self.from_i64((v & 0xffff_ffff) as i64))
            }
        }
    }
}

/// 𝔽_p for an odd prime p < 2^32.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..(1u64 << 32)).contains(&p) || !is_prime(p) {
            return Err(Error::Config(format!("{p} is not an odd prime below 2^32")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    fn legendre(&self, a: u64) -> u64 {
        self.pow(&a, (self.p - 1) / 2)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn tag(&self) -> FieldTag {
        FieldTag::Prime(self.p)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
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
        self.reduce(a * b)
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on signed values
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u64)
    }

    fn sqrt(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return Some(0);
        }
        if self.legendre(*a) != 1 {
            return None;
        }
        // Tonelli-Shanks
        let p = self.p;
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2u64;
        while self.legendre(z) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(&z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let b = self.pow(&c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn sample_space_size(&self) -> u64 {
        self.p
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64> {
        let v: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad 𝔽_p element {s:?}")))?;
        if v >= self.p {
            return Err(Error::Parse(format!("{v} is not reduced mod {}", self.p)));
        }
        Ok(v)
    }

    fn echelonize(&self, m: &mut Matrix<Self>) -> Vec<usize> {
        matrix::gauss_jordan_fp(self, m)
    }
}

/// The field ℚ with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> FieldTag {
        FieldTag::Rationals
    }

    fn characteristic(&self) -> u64 {
        0
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

    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let num = a.numer().sqrt();
        let den = a.denom().sqrt();
        if &(&num * &num) == a.numer() && &(&den * &den) == a.denom() {
            Some(BigRational::new(num, den))
        } else {
            None
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
    }

    fn sample_space_size(&self) -> u64 {
        (2 * RATIONAL_SAMPLE_BOUND + 1) as u64
    }

    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let bad = || Error::Parse(format!("bad rational {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
            Some((n, d)) => {
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
        }
    }

    fn echelonize(&self, m: &mut Matrix<Self>) -> Vec<usize> {
        bareiss_rref(m)
    }

    fn primitive(&self, v: &[BigRational]) -> Vec<BigRational> {
        let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if gcd.is_zero() {
            return v.to_vec();
        }
        ints.into_iter().map(|x| BigRational::from_integer(x / &gcd)).collect()
    }
}

/// Fraction-free elimination: rows are scaled to integers, reduced to echelon
/// form with Bareiss' exact-division recurrence, and only the final
/// back-substitution touches fractions.
fn bareiss_rref(m: &mut Matrix<Rationals>) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in (c + 1)..cols {
                let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        r += 1;
    }

    // back-substitution over ℚ on the rank rows only
    let mut red: Vec<Vec<BigRational>> = a[..r]
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    for (i, &pc) in pivots.iter().enumerate().rev() {
        let inv = red[i][pc].recip();
        for x in red[i].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = red[i].clone();
        for row in red[..i].iter_mut() {
            let factor = row[pc].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &factor * y;
                }
            }
        }
    }
    for i in 0..rows {
        for j in 0..cols {
            let v = if i < r { red[i][j].clone() } else { BigRational::zero() };
            m.set(i, j, v);
        }
    }
    pivots
}

/// Reduce a rational to 𝔽_p when its denominator is invertible.
pub fn reduce_rational(fp: &PrimeField, a: &BigRational) -> Option<u64> {
    let p = BigInt::from(fp.modulus());
    let n = a.numer().mod_floor(&p).to_u64()?;
    let d = a.denom().mod_floor(&p).to_u64()?;
    fp.inv(&d).map(|di| fp.mul(&n, &di))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(1 << 33).is_err());
        assert!(PrimeField::new(101).is_ok());
    }

    #[test]
    fn fp_inverse_and_sqrt() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = f.sample(&mut rng);
            if a == 0 {
                continue;
            }
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), 1);
            let sq = f.mul(&a, &a);
            let r = f.sqrt(&sq).unwrap();
            assert!(r == a || r == f.neg(&a));
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn fp_sqrt_small_prime_two_adic() {
        // 97 - 1 = 2^5 * 3 exercises the Tonelli-Shanks loop
        let f = PrimeField::new(97).unwrap();
        for a in 1..97u64 {
            match f.sqrt(&a) {
                Some(r) => assert_eq!(f.mul(&r, &r), a),
                None => assert_eq!(f.legendre(a), 96),
            }
        }
    }

    #[test]
    fn rationals_lowest_terms_and_parse() {
        let q = Rationals;
        let a = q.parse("6/-4").unwrap();
        assert_eq!(q.format(&a), "-3/2");
        assert_eq!(a.denom(), &BigInt::from(2));
        assert_eq!(q.format(&q.parse("10/5").unwrap()), "2");
        assert!(q.parse("1/0").is_err());
        assert_eq!(q.sqrt(&q.parse("9/4").unwrap()), Some(q.parse("3/2").unwrap()));
        assert_eq!(q.sqrt(&q.parse("2").unwrap()), None);
    }

    #[test]
    fn tag_round_trip() {
        for tag in [FieldTag::Rationals, FieldTag::Prime(DEFAULT_PRIME)] {
            assert_eq!(tag.to_string().parse::<FieldTag>().unwrap(), tag);
        }
        assert!("Fp:x".parse::<FieldTag>().is_err());
    }

    #[test]
    fn reduce_rational_matches_fp_arithmetic() {
        let fp = PrimeField::new(101).unwrap();
        let a = Rationals.parse("7/3").unwrap();
        let r = reduce_rational(&fp, &a).unwrap();
        assert_eq!(fp.mul(&r, &3), 7);
    }
}
