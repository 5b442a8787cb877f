//! Homogeneous forms with dense coefficient vectors in a fixed graded-lex
//! monomial order.
//!
//! Within a degree the order is lexicographic with x0 > x1 > ... > xn, so
//! for two variables and degree 2 the basis is `[x0², x0·x1, x1²]`. All
//! modules index coefficient vectors the same way, which makes coefficient
//! subspaces from different constructions directly comparable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of degree `degree` in `nvars` variables.
pub fn count_monomials(nvars: usize, degree: usize) -> usize {
    if nvars == 0 {
        return usize::from(degree == 0);
    }
    binomial(degree + nvars - 1, nvars - 1)
}

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// The ordered monomials of one degree in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    degree: usize,
    exps: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        let mut exps = Vec::with_capacity(count_monomials(nvars, degree));
        let mut cur = vec![0u32; nvars];
        fill(&mut exps, &mut cur, 0, degree as u32);
        MonomialBasis { nvars, degree, exps }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.exps
    }

    pub fn index_of(&self, exps: &[u32]) -> usize {
        monomial_index(exps)
    }

    /// Values of every monomial at `point`, in basis order.
    pub fn evaluate_all<F: Field>(&self, field: &F, point: &[F::Elem]) -> Vec<F::Elem> {
        let powers = power_table(field, point, self.degree);
        self.exps
            .iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .fold(field.one(), |acc, (i, &k)| field.mul(&acc, &powers[i][k as usize]))
            })
            .collect()
    }
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for v in (0..=remaining).rev() {
        cur[pos] = v;
        fill(out, cur, pos + 1, remaining - v);
    }
    cur[pos] = 0;
}

/// Position of an exponent vector within the basis of its degree.
pub fn monomial_index(exps: &[u32]) -> usize {
    let n = exps.len();
    let mut rem: u32 = exps.iter().sum();
    let mut idx = 0;
    for (i, &e) in exps.iter().enumerate().take(n.saturating_sub(1)) {
        // monomials sharing the prefix but with a larger exponent here come first
        for v in (e + 1)..=rem {
            idx += count_monomials(n - i - 1, (rem - v) as usize);
        }
        rem -= e;
    }
    idx
}

/// Ordered monomial basis of degree `d` forms on P^n.
pub fn monomial_basis(n: usize, d: usize) -> MonomialBasis {
    MonomialBasis::new(n + 1, d)
}

pub(crate) fn power_table<F: Field>(field: &F, point: &[F::Elem], degree: usize) -> Vec<Vec<F::Elem>> {
    point
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(degree + 1);
            row.push(field.one());
            for k in 1..=degree {
                row.push(field.mul(&row[k - 1], x));
            }
            row
        })
        .collect()
}

/// A homogeneous polynomial of fixed degree in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form<F: Field> {
    nvars: usize,
    degree: usize,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Form<F> {
    pub fn zero(field: &F, nvars: usize, degree: usize) -> Self {
        Form { nvars, degree, coeffs: vec![field.zero(); count_monomials(nvars, degree)] }
    }

    pub fn from_coeffs(nvars: usize, degree: usize, coeffs: Vec<F::Elem>) -> Result<Self> {
        let expected = count_monomials(nvars, degree);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: coeffs.len() });
        }
        Ok(Form { nvars, degree, coeffs })
    }

    pub fn monomial(field: &F, exps: &[u32]) -> Self {
        let degree = exps.iter().sum::<u32>() as usize;
        let mut f = Self::zero(field, exps.len(), degree);
        f.coeffs[monomial_index(exps)] = field.one();
        f
    }

    pub fn variable(field: &F, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, &e)
    }

    /// The linear form Σ cᵢ xᵢ.
    pub fn linear(coeffs: Vec<F::Elem>) -> Self {
        Form { nvars: coeffs.len(), degree: 1, coeffs }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        let mut f = Self::zero(field, nvars, 0);
        f.coeffs[0] = c;
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Projective dimension of the ambient space.
    pub fn ambient(&self) -> usize {
        self.nvars - 1
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn coeff(&self, exps: &[u32]) -> &F::Elem {
        &self.coeffs[monomial_index(exps)]
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.coeffs.iter().all(|c| field.is_zero(c))
    }

    pub fn basis(&self) -> MonomialBasis {
        MonomialBasis::new(self.nvars, self.degree)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }

    pub fn add(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| field.add(a, b)).collect();
        Ok(Form { nvars: self.nvars, degree: self.degree, coeffs })
    }

    pub fn sub(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| field.sub(a, b)).collect();
        Ok(Form { nvars: self.nvars, degree: self.degree, coeffs })
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        Form { nvars: self.nvars, degree: self.degree, coeffs: self.coeffs.iter().map(|a| field.mul(a, c)).collect() }
    }

    pub fn mul(&self, field: &F, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        let mut out = Self::zero(field, self.nvars, self.degree + other.degree);
        let (ba, bb) = (self.basis(), other.basis());
        let mut e = vec![0u32; self.nvars];
        for (ea, a) in ba.monomials().iter().zip(&self.coeffs) {
            if field.is_zero(a) {
                continue;
            }
            for (eb, b) in bb.monomials().iter().zip(&other.coeffs) {
                if field.is_zero(b) {
                    continue;
                }
                for k in 0..self.nvars {
                    e[k] = ea[k] + eb[k];
                }
                let idx = monomial_index(&e);
                out.coeffs[idx] = field.mul_add(&out.coeffs[idx], a, b);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, field: &F, k: usize) -> Self {
        let mut acc = Self::constant(field, self.nvars, field.one());
        for _ in 0..k {
            acc = acc.mul(field, self).expect("same nvars");
        }
        acc
    }

    pub fn evaluate(&self, field: &F, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let values = self.basis().evaluate_all(field, point);
        Ok(values.iter().zip(&self.coeffs).fold(field.zero(), |acc, (v, c)| field.mul_add(&acc, v, c)))
    }

    pub fn partial_derivative(&self, field: &F, i: usize) -> Self {
        if self.degree == 0 {
            return Self::zero(field, self.nvars, 0);
        }
        let mut out = Self::zero(field, self.nvars, self.degree - 1);
        for (e, c) in self.basis().monomials().iter().zip(&self.coeffs) {
            if e[i] == 0 || field.is_zero(c) {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            let idx = monomial_index(&d);
            let v = field.mul(c, &field.from_i64(i64::from(e[i])));
            out.coeffs[idx] = field.add(&out.coeffs[idx], &v);
        }
        out
    }

    /// Substitute forms for the variables: the result is
    /// `self(inner_0, ..., inner_n)`, of degree `deg(self) * deg(inner)`.
    pub fn compose(&self, field: &F, inner: &[Form<F>]) -> Result<Self> {
        if inner.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: inner.len() });
        }
        let first = inner.first().ok_or(Error::EmptyInput("composition with no forms"))?;
        let (m, e) = (first.nvars, first.degree);
        for g in inner {
            if g.nvars != m || g.degree != e {
                return Err(Error::Degenerate("inner forms must share variables and degree".into()));
            }
        }
        let powers: Vec<Vec<Form<F>>> = inner
            .iter()
            .map(|g| {
                let mut row = vec![Self::constant(field, m, field.one())];
                for k in 1..=self.degree {
                    let next = row[k - 1].mul(field, g).expect("same nvars");
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out = Self::zero(field, m, self.degree * e);
        for (exps, c) in self.basis().monomials().iter().zip(&self.coeffs) {
            if field.is_zero(c) {
                continue;
            }
            let mut term = Self::constant(field, m, c.clone());
            for (i, &k) in exps.iter().enumerate() {
                if k > 0 {
                    term = term.mul(field, &powers[i][k as usize]).expect("same nvars");
                }
            }
            for (o, t) in out.coeffs.iter_mut().zip(&term.coeffs) {
                *o = field.add(o, t);
            }
        }
        Ok(out)
    }

    /// Pull back along the linear map `u ↦ m·u` (m has `nvars` rows and any
    /// number of columns): the result evaluated at u equals self at m·u.
    pub fn pullback_linear(&self, field: &F, m: &Matrix<F>) -> Result<Self> {
        if m.rows() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: m.rows() });
        }
        let inner: Vec<Form<F>> = (0..m.rows()).map(|r| Form::linear(m.row(r).to_vec())).collect();
        self.compose(field, &inner)
    }

    /// `self ∘ m` for a square invertible matrix.
    pub fn substitute_linear(&self, field: &F, m: &Matrix<F>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
        }
        if m.rank(field) < m.rows() {
            return Err(Error::Singular);
        }
        self.pullback_linear(field, m)
    }

    /// Restrict to a curve parametrized by binary forms of a common degree;
    /// the result is a binary form of degree `deg(self) * e`.
    pub fn substitute_curve(&self, field: &F, curve: &[Form<F>]) -> Result<Self> {
        if curve.iter().any(|c| c.nvars != 2) {
            return Err(Error::Degenerate("curve components must be binary forms".into()));
        }
        self.compose(field, curve)
    }

    pub fn to_json(&self, field: &F) -> FormJson {
        FormJson {
            ambient: self.ambient(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| field.format(c)).collect(),
        }
    }

    pub fn from_json(field: &F, json: &FormJson) -> Result<Self> {
        let coeffs = json.coeffs.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
        Form::from_coeffs(json.ambient + 1, json.degree, coeffs)
    }
}

/// JSON form of a form: coefficients in the fixed monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub ambient: usize,
    pub degree: usize,
    pub coeffs: Vec<String>,
}

/// Values of a list of forms at a point.
pub fn evaluate_all<F: Field>(field: &F, forms: &[Form<F>], point: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let Some(first) = forms.first() else {
        return Ok(Vec::new());
    };
    let basis = first.basis();
    if point.len() != first.nvars {
        return Err(Error::DimensionMismatch { expected: first.nvars, found: point.len() });
    }
    let values = basis.evaluate_all(field, point);
    forms
        .iter()
        .map(|f| {
            if f.nvars != first.nvars || f.degree != first.degree {
                return f.evaluate(field, point);
            }
            Ok(values.iter().zip(&f.coeffs).fold(field.zero(), |acc, (v, c)| field.mul_add(&acc, v, c)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_form<F: Field>(f: &F, nvars: usize, degree: usize, rng: &mut ChaCha8Rng) -> Form<F> {
        let n = count_monomials(nvars, degree);
        Form::from_coeffs(nvars, degree, (0..n).map(|_| f.sample(rng)).collect()).unwrap()
    }

    fn random_vec<F: Field>(f: &F, n: usize, rng: &mut ChaCha8Rng) -> Vec<F::Elem> {
        (0..n).map(|_| f.sample(rng)).collect()
    }

    #[test]
    fn basis_order_and_sizes() {
        let b = monomial_basis(1, 2);
        assert_eq!(b.monomials(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_basis(7, 3).len(), 120);
        assert_eq!(monomial_basis(4, 3).len(), 35);
        assert_eq!(monomial_basis(3, 0).len(), 1);
        for (i, e) in monomial_basis(4, 4).monomials().iter().enumerate() {
            assert_eq!(monomial_index(e), i);
        }
    }

    #[test]
    fn evaluation_examples() {
        let q = Rationals;
        let f = Form::monomial(&q, &[1, 1]);
        assert_eq!(f.evaluate(&q, &[q.zero(), q.one()]).unwrap(), q.zero());
        assert!(f.evaluate(&q, &[q.one()]).is_err());
    }

    #[test]
    fn homogeneity_of_evaluation() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let form = random_form(&f, 4, 3, &mut rng);
            let p = random_vec(&f, 4, &mut rng);
            let lambda = f.sample(&mut rng);
            let scaled: Vec<u64> = p.iter().map(|x| f.mul(x, &lambda)).collect();
            let lhs = form.evaluate(&f, &scaled).unwrap();
            let rhs = f.mul(&f.pow(&lambda, 3), &form.evaluate(&f, &p).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn derivative_of_square() {
        let q = Rationals;
        let d = Form::monomial(&q, &[2, 0]).partial_derivative(&q, 0);
        assert_eq!(d, Form::variable(&q, 2, 0).scale(&q, &q.from_i64(2)));
    }

    #[test]
    fn euler_identity_on_random_cubics() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let form = random_form(&f, 5, 3, &mut rng);
            let mut acc = Form::zero(&f, 5, 3);
            for i in 0..5 {
                let term = Form::variable(&f, 5, i).mul(&f, &form.partial_derivative(&f, i)).unwrap();
                acc = acc.add(&f, &term).unwrap();
            }
            assert_eq!(acc, form.scale(&f, &3));
        }
    }

    #[test]
    fn linear_substitution_examples() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let form = random_form(&f, 3, 2, &mut rng);
        assert_eq!(form.substitute_linear(&f, &Matrix::identity(&f, 3)).unwrap(), form);

        let swap = Matrix::from_rows(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]], 3).unwrap();
        let x0sq = Form::monomial(&f, &[2, 0, 0]);
        assert_eq!(x0sq.substitute_linear(&f, &swap).unwrap(), Form::monomial(&f, &[0, 2, 0]));

        for _ in 0..10 {
            let form = random_form(&f, 4, 3, &mut rng);
            let m = Matrix::from_fn(4, 4, |_, _| f.sample(&mut rng));
            let p = random_vec(&f, 4, &mut rng);
            let lhs = form.substitute_linear(&f, &m).unwrap().evaluate(&f, &p).unwrap();
            let rhs = form.evaluate(&f, &m.mul_vec(&f, &p).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        let singular = Matrix::zeros(&f, 3, 3);
        assert!(matches!(form.substitute_linear(&f, &singular), Err(Error::Singular)));
    }

    #[test]
    fn linear_substitution_is_functorial() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let form = random_form(&f, 3, 3, &mut rng);
            let m1 = Matrix::from_fn(3, 3, |_, _| f.sample(&mut rng));
            let m2 = Matrix::from_fn(3, 3, |_, _| f.sample(&mut rng));
            let lhs = form.substitute_linear(&f, &m1).unwrap().substitute_linear(&f, &m2).unwrap();
            let rhs = form.substitute_linear(&f, &m1.mul(&f, &m2).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn conic_restricted_to_veronese() {
        let q = Rationals;
        let s2 = Form::monomial(&q, &[2, 0]);
        let st = Form::monomial(&q, &[1, 1]);
        let t2 = Form::monomial(&q, &[0, 2]);
        let curve = vec![s2.clone(), st, t2];
        let conic = Form::monomial(&q, &[1, 0, 1]).sub(&q, &Form::monomial(&q, &[0, 2, 0])).unwrap();
        assert!(conic.substitute_curve(&q, &curve).unwrap().is_zero(&q));
        let x0 = Form::variable(&q, 3, 0);
        let r = x0.substitute_curve(&q, &curve).unwrap();
        assert_eq!(r.degree(), 2);
        assert_eq!(r, s2);
    }

    proptest! {
        #[test]
        fn curve_substitution_is_multiplicative(seed in any::<u64>()) {
            let f = PrimeField::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_form(&f, 3, 2, &mut rng);
            let b = random_form(&f, 3, 1, &mut rng);
            let curve: Vec<_> = (0..3).map(|_| random_form(&f, 2, 3, &mut rng)).collect();
            let lhs = a.mul(&f, &b).unwrap().substitute_curve(&f, &curve).unwrap();
            let rhs = a.substitute_curve(&f, &curve).unwrap().mul(&f, &b.substitute_curve(&f, &curve).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn json_round_trip(seed in any::<u64>()) {
            let q = Rationals;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let form = random_form(&q, 3, 2, &mut rng);
            let json = form.to_json(&q);
            prop_assert_eq!(Form::from_json(&q, &json).unwrap(), form);
        }
    }
}
