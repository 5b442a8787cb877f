//! Dense univariate polynomials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;

/// Coefficients low to high, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly<F: Field> {
    coeffs: Vec<F::Elem>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    /// x - a
    pub fn linear_root(field: &F, a: &F::Elem) -> Self {
        UniPoly { coeffs: vec![field.neg(a), field.one()] }
    }

    pub fn from_roots(field: &F, roots: &[F::Elem]) -> Self {
        roots.iter().fold(Self::one(field), |acc, r| acc.mul(field, &Self::linear_root(field, r)))
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, field: &F, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn lead(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| field.add(&self.coeff(field, i), &other.coeff(field, i))).collect();
        Self::new(field, v)
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| field.sub(&self.coeff(field, i), &other.coeff(field, i))).collect();
        Self::new(field, v)
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        Self::new(field, self.coeffs.iter().map(|x| field.mul(x, c)).collect())
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = field.mul_add(&v[i + j], a, b);
            }
        }
        Self::new(field, v)
    }

    pub fn pow(&self, field: &F, e: u32) -> Self {
        (0..e).fold(Self::one(field), |acc, _| acc.mul(field, self))
    }

    pub fn eval(&self, field: &F, x: &F::Elem) -> F::Elem {
        self.coeffs.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
    }

    pub fn derivative(&self, field: &F) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| field.mul(c, &field.from_i64(i as i64)))
            .collect();
        Self::new(field, v)
    }

    /// Taylor shift: the polynomial t ↦ self(a + t).
    pub fn shift(&self, field: &F, a: &F::Elem) -> Self {
        // Horner in the ring of polynomials in t
        let base = Self::new(field, vec![a.clone(), field.one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(field, &base).add(field, &Self::constant(field, c.clone())))
    }

    pub fn div_rem(&self, field: &F, divisor: &Self) -> Result<(Self, Self)> {
        let lead = divisor.lead().ok_or(Error::EmptyInput("division by the zero polynomial"))?;
        let inv = field.inv(lead).expect("nonzero lead");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = field.mul(&rem[k + dd], &inv);
            if field.is_zero(&c) {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = field.sub(&rem[k + j], &field.mul(&c, d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(field, quot), Self::new(field, rem)))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, field: &F, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(field, divisor).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn monic(&self, field: &F) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => self.scale(field, &field.inv(l).expect("nonzero")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, field: &F, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(field, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(field)
    }

    /// Multiplicity of `a` as a root (`None` for the zero polynomial).
    pub fn root_multiplicity(&self, field: &F, a: &F::Elem) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::linear_root(field, a);
        let mut p = self.clone();
        let mut k = 0;
        while let Some(q) = p.exact_div(field, &lin) {
            p = q;
            k += 1;
        }
        Some(k)
    }

    /// Squarefree test via gcd(f, f'); valid when the characteristic exceeds
    /// the degree.
    pub fn is_squarefree(&self, field: &F) -> bool {
        !self.is_zero() && self.gcd(field, &self.derivative(field)).degree() == Some(0)
    }

    fn pow_mod(&self, field: &F, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.div_rem(field, modulus).expect("modulus").1;
        let mut acc = Self::one(field).div_rem(field, modulus).expect("modulus").1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base).div_rem(field, modulus).expect("modulus").1;
            }
            base = base.mul(field, &base).div_rem(field, modulus).expect("modulus").1;
            e >>= 1;
        }
        acc
    }

    /// Distinct roots lying in 𝔽_p, sorted by representative. Uses
    /// gcd(f, x^p - x) followed by Cantor-Zassenhaus splitting.
    pub fn roots(&self, field: &F) -> Result<Vec<F::Elem>> {
        let p = field.characteristic();
        if p == 0 {
            return Err(Error::Unsupported("root finding needs a prime field".into()));
        }
        if self.is_zero() {
            return Err(Error::EmptyInput("roots of the zero polynomial"));
        }
        let f = self.monic(field);
        let x = Self::new(field, vec![field.zero(), field.one()]);
        let xp = x.pow_mod(field, p, &f);
        let split = f.gcd(field, &xp.sub(field, &x));
        let mut roots = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        split_linear(field, &split, p, &mut rng, &mut roots);
        roots.sort();
        Ok(roots)
    }
}

fn split_linear<F: Field>(field: &F, g: &UniPoly<F>, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<F::Elem>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(field.neg(&field.div(&g.coeffs[0], &g.coeffs[1]))),
        Some(d) => loop {
            let a = field.sample(rng);
            let shifted = UniPoly::new(field, vec![a, field.one()]);
            let h = shifted
                .pow_mod(field, (p - 1) / 2, g)
                .sub(field, &UniPoly::one(field))
                .gcd(field, g);
            let hd = h.degree().unwrap_or(0);
            if hd > 0 && hd < d {
                let rest = g.exact_div(field, &h).expect("factor divides");
                split_linear(field, &h, p, rng, out);
                split_linear(field, &rest, p, rng, out);
                return;
            }
        },
    }
}

/// Power series in t truncated at `prec` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<F: Field> {
    pub coeffs: Vec<F::Elem>,
}

impl<F: Field> Series<F> {
    pub fn from_poly(field: &F, p: &UniPoly<F>, prec: usize) -> Self {
        Series { coeffs: (0..prec).map(|i| p.coeff(field, i)).collect() }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        let mut v = vec![field.zero(); n];
        for i in 0..n {
            if field.is_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..(n - i) {
                v[i + j] = field.mul_add(&v[i + j], &self.coeffs[i], &other.coeffs[j]);
            }
        }
        Series { coeffs: v }
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        Series { coeffs: (0..n).map(|i| field.add(&self.coeffs[i], &other.coeffs[i])).collect() }
    }

    /// Index of the first nonzero coefficient, `None` if zero to precision.
    pub fn order(&self, field: &F) -> Option<usize> {
        self.coeffs.iter().position(|c| !field.is_zero(c))
    }

    /// Square root with prescribed constant term `s0` (s0² must equal the
    /// constant term, s0 ≠ 0, characteristic ≠ 2).
    pub fn sqrt_with(&self, field: &F, s0: &F::Elem) -> Self {
        let n = self.prec();
        let mut s = vec![field.zero(); n];
        if n == 0 {
            return Series { coeffs: s };
        }
        s[0] = s0.clone();
        let inv_2s0 = field.inv(&field.add(s0, s0)).expect("s0 nonzero and odd characteristic");
        for k in 1..n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc = field.sub(&acc, &field.mul(&s[i], &s[k - i]));
            }
            s[k] = field.mul(&acc, &inv_2s0);
        }
        Series { coeffs: s }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn poly<F: Field>(f: &F, v: &[i64]) -> UniPoly<F> {
        UniPoly::new(f, v.iter().map(|x| f.from_i64(*x)).collect())
    }

    #[test]
    fn arithmetic_and_division() {
        let q = Rationals;
        let a = poly(&q, &[1, 2, 3]);
        let b = poly(&q, &[-1, 1]);
        let prod = a.mul(&q, &b);
        let (quo, rem) = prod.div_rem(&q, &b).unwrap();
        assert_eq!(quo, a);
        assert!(rem.is_zero());
        assert_eq!(a.eval(&q, &q.from_i64(2)), q.from_i64(17));
        assert_eq!(a.derivative(&q), poly(&q, &[2, 6]));
        assert_eq!(a.shift(&q, &q.from_i64(1)).eval(&q, &q.from_i64(1)), q.from_i64(17));
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = PrimeField::default();
        let a = UniPoly::from_roots(&f, &[1, 2, 3]);
        let b = UniPoly::from_roots(&f, &[2, 3, 9]);
        assert_eq!(a.gcd(&f, &b), UniPoly::from_roots(&f, &[2, 3]));
        assert!(a.is_squarefree(&f));
        assert!(!a.mul(&f, &UniPoly::linear_root(&f, &2)).is_squarefree(&f));
        assert_eq!(a.mul(&f, &UniPoly::linear_root(&f, &2)).root_multiplicity(&f, &2), Some(2));
    }

    #[test]
    fn roots_over_fp() {
        let f = PrimeField::default();
        let roots = vec![5u64, 17, 123_456, 2_000_000_000];
        let mut p = UniPoly::from_roots(&f, &roots);
        // irreducible quadratic factor x^2 - 3 when 3 is a non-residue, else x^2 + 1 style noise
        let nonres = (2..).find(|a| f.sqrt(a).is_none()).unwrap();
        p = p.mul(&f, &poly(&f, &[-(nonres as i64), 0, 1]));
        assert_eq!(p.roots(&f).unwrap(), roots);
        assert!(poly(&Rationals, &[1, 1]).roots(&Rationals).is_err());
    }

    #[test]
    fn series_sqrt_squares_back() {
        let f = PrimeField::default();
        let target = Series::from_poly(&f, &poly(&f, &[4, 1, 7, 3]), 6);
        let s = target.sqrt_with(&f, &2);
        assert_eq!(s.mul(&f, &s), target);
    }
}
