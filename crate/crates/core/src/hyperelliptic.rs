//! Hyperelliptic curves y² = f(x) in the odd model (deg f = 2g+1, one point
//! at infinity), divisors, Riemann–Roch spaces and the embedding by a
//! complete linear system.
//!
//! Functions are written `(a(x) + b(x)·y) / m(x)`. For a divisor E the
//! denominator collects, at every affine x-coordinate of the support, the
//! largest multiplicity of the two points above it; the remaining pole and
//! zero requirements become linear conditions on `a` and `b` read off from
//! the local expansion of `y` along each branch.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag, PrimeField};
use crate::matrix::{check_tag, RowEchelon};
use crate::par::Exec;
use crate::poly::{Series, UniPoly};
use crate::proj::ProjPoint;
use crate::rng::SeedStream;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve<F: Field> {
    f: UniPoly<F>,
    genus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint<F: Field> {
    Affine { x: F::Elem, y: F::Elem },
    Infinity,
}

impl<F: Field> CurvePoint<F> {
    pub fn affine(x: F::Elem, y: F::Elem) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn x(&self) -> Option<&F::Elem> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn to_json(&self, field: &F) -> CurvePointJson {
        match self {
            CurvePoint::Affine { x, y } => CurvePointJson::Affine { x: field.format(x), y: field.format(y) },
            CurvePoint::Infinity => CurvePointJson::Infinity,
        }
    }

    pub fn from_json(field: &F, json: &CurvePointJson) -> Result<Self> {
        Ok(match json {
            CurvePointJson::Affine { x, y } => CurvePoint::Affine { x: field.parse(x)?, y: field.parse(y)? },
            CurvePointJson::Infinity => CurvePoint::Infinity,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvePointJson {
    Affine { x: String, y: String },
    Infinity,
}

impl<F: Field> HyperellipticCurve<F> {
    /// Curve from the coefficients of f. Only the odd model with genus at
    /// least 3 is accepted.
    pub fn new(field: &F, f: UniPoly<F>) -> Result<Self> {
        let deg = f.degree().ok_or(Error::EmptyInput("zero polynomial"))?;
        if deg % 2 == 0 {
            return Err(Error::Unsupported(format!("even model (deg f = {deg}); use an odd-degree f")));
        }
        let genus = (deg - 1) / 2;
        if genus < 3 {
            return Err(Error::Degenerate(format!("genus {genus} < 3")));
        }
        if !f.is_squarefree(field) {
            return Err(Error::Degenerate("f is not squarefree".into()));
        }
        Ok(HyperellipticCurve { f, genus })
    }

    pub fn f(&self) -> &UniPoly<F> {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn contains(&self, field: &F, p: &CurvePoint<F>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => field.mul(y, y) == self.f.eval(field, x),
        }
    }

    pub fn point(&self, field: &F, x: F::Elem, y: F::Elem) -> Result<CurvePoint<F>> {
        let p = CurvePoint::Affine { x, y };
        if !self.contains(field, &p) {
            return Err(Error::Degenerate("point not on the curve".into()));
        }
        Ok(p)
    }

    pub fn involution(&self, field: &F, p: &CurvePoint<F>) -> CurvePoint<F> {
        match p {
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: field.neg(y) },
            CurvePoint::Infinity => CurvePoint::Infinity,
        }
    }

    pub fn is_weierstrass(&self, field: &F, p: &CurvePoint<F>) -> bool {
        match p {
            CurvePoint::Affine { y, .. } => field.is_zero(y),
            CurvePoint::Infinity => true,
        }
    }

    /// A point with x drawn from the field's sample space, retrying until
    /// f(x) is a nonzero square; the sign of y is random.
    pub fn random_point<R: Rng + ?Sized>(&self, field: &F, rng: &mut R) -> CurvePoint<F> {
        loop {
            let x = field.sample(rng);
            let fx = self.f.eval(field, &x);
            if field.is_zero(&fx) {
                continue;
            }
            if let Some(y) = field.sqrt(&fx) {
                let y = if rng.gen::<bool>() { field.neg(&y) } else { y };
                return CurvePoint::Affine { x, y };
            }
        }
    }

    /// K = (2g-2)·∞.
    pub fn canonical_divisor(&self) -> Divisor<F> {
        Divisor::from_terms(vec![(CurvePoint::Infinity, 2 * self.genus as i64 - 2)])
    }

    /// Expansion of y along the branch through the affine point `p`, in the
    /// local parameter t = x - x(p).
    fn branch(&self, field: &F, x0: &F::Elem, y0: &F::Elem, prec: usize) -> Series<F> {
        let shifted = self.f.shift(field, x0);
        Series::from_poly(field, &shifted, prec).sqrt_with(field, y0)
    }

    pub fn to_json(&self, field: &F) -> CurveJson {
        CurveJson { field: field.tag(), f: self.f.coeffs().iter().map(|c| field.format(c)).collect() }
    }

    pub fn from_json(field: &F, json: &CurveJson) -> Result<Self> {
        check_tag(field, json.field)?;
        let coeffs = json.f.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(field, UniPoly::new(field, coeffs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub field: FieldTag,
    /// Coefficients of f, constant term first.
    pub f: Vec<String>,
}

/// A formal sum of curve points. Terms are merged and zero terms dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor<F: Field> {
    terms: Vec<(CurvePoint<F>, i64)>,
}

impl<F: Field> Default for Divisor<F> {
    fn default() -> Self {
        Divisor { terms: Vec::new() }
    }
}

impl<F: Field> Divisor<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<(CurvePoint<F>, i64)>) -> Self {
        let mut d = Self::zero();
        for (p, n) in terms {
            d.add_term(p, n);
        }
        d
    }

    /// Reduced effective divisor with the given points.
    pub fn from_points(points: &[CurvePoint<F>]) -> Self {
        Self::from_terms(points.iter().map(|p| (p.clone(), 1)).collect())
    }

    pub fn add_term(&mut self, p: CurvePoint<F>, n: i64) {
        if let Some(t) = self.terms.iter_mut().find(|(q, _)| *q == p) {
            t.1 += n;
        } else {
            self.terms.push((p, n));
        }
        self.terms.retain(|(_, k)| *k != 0);
    }

    pub fn terms(&self) -> &[(CurvePoint<F>, i64)] {
        &self.terms
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(_, n)| n).sum()
    }

    pub fn multiplicity(&self, p: &CurvePoint<F>) -> i64 {
        self.terms.iter().find(|(q, _)| q == p).map_or(0, |t| t.1)
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (p, n) in &other.terms {
            d.add_term(p.clone(), *n);
        }
        d
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, n)| (p.clone(), n * k)).collect())
    }

    pub fn is_effective(&self) -> bool {
        self.terms.iter().all(|(_, n)| *n >= 0)
    }
}

/// The function (a + b·y)/m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFunction<F: Field> {
    pub a: UniPoly<F>,
    pub b: UniPoly<F>,
    pub m: UniPoly<F>,
}

fn deg_or_neg(p: &UniPoly<impl Field>) -> i64 {
    p.degree().map_or(i64::MIN / 4, |d| d as i64)
}

impl<F: Field> CurveFunction<F> {
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The norm (a + b y)(a - b y) = a² - b²f of the numerator.
    pub fn numerator_norm(&self, field: &F, curve: &HyperellipticCurve<F>) -> UniPoly<F> {
        let a2 = self.a.mul(field, &self.a);
        let b2f = self.b.mul(field, &self.b).mul(field, curve.f());
        a2.sub(field, &b2f)
    }

    /// Value at an affine point where m does not vanish.
    pub fn eval(&self, field: &F, p: &CurvePoint<F>) -> Option<F::Elem> {
        let CurvePoint::Affine { x, y } = p else {
            return None;
        };
        let den = self.m.eval(field, x);
        let inv = field.inv(&den)?;
        let num = field.add(&self.a.eval(field, x), &field.mul(&self.b.eval(field, x), y));
        Some(field.mul(&num, &inv))
    }

    /// Order of vanishing at `p` (negative for poles); `None` for the zero
    /// function.
    pub fn order_at(&self, field: &F, curve: &HyperellipticCurve<F>, p: &CurvePoint<F>) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let g = curve.genus() as i64;
        match p {
            CurvePoint::Infinity => {
                let top = (2 * deg_or_neg(&self.a)).max(2 * deg_or_neg(&self.b) + 2 * g + 1);
                Some(2 * self.m.degree().expect("nonzero denominator") as i64 - top)
            }
            CurvePoint::Affine { x, y } if field.is_zero(y) => {
                // local parameter y; ord(x - x0) = 2
                let va = self.a.root_multiplicity(field, x).map(|v| 2 * v as i64);
                let vb = self.b.root_multiplicity(field, x).map(|v| 2 * v as i64 + 1);
                let num = match (va, vb) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => unreachable!("nonzero function"),
                };
                Some(num - 2 * self.m.root_multiplicity(field, x).expect("nonzero") as i64)
            }
            CurvePoint::Affine { x, y } => {
                let num = self.local_numerator(field, curve, x, y)?;
                let v = num.order(field).expect("precision exceeds the norm degree") as i64;
                Some(v - self.m.root_multiplicity(field, x).expect("nonzero") as i64)
            }
        }
    }

    /// Series of a + b·y at a non-Weierstrass affine point, long enough to
    /// see its order of vanishing.
    fn local_numerator(&self, field: &F, curve: &HyperellipticCurve<F>, x: &F::Elem, y: &F::Elem) -> Option<Series<F>> {
        if self.is_zero() {
            return None;
        }
        let prec = self.numerator_norm(field, curve).degree().unwrap_or(0) + 2;
        let ybr = curve.branch(field, x, y, prec);
        let a = Series::from_poly(field, &self.a.shift(field, x), prec);
        let b = Series::from_poly(field, &self.b.shift(field, x), prec);
        Some(a.add(field, &b.mul(field, &ybr)))
    }

    pub fn to_json(&self, field: &F) -> FunctionJson {
        let fmt = |p: &UniPoly<F>| p.coeffs().iter().map(|c| field.format(c)).collect();
        FunctionJson { a: fmt(&self.a), b: fmt(&self.b), m: fmt(&self.m) }
    }

    pub fn from_json(field: &F, json: &FunctionJson) -> Result<Self> {
        let parse = |v: &[String]| -> Result<UniPoly<F>> {
            Ok(UniPoly::new(field, v.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?))
        };
        Ok(CurveFunction { a: parse(&json.a)?, b: parse(&json.b)?, m: parse(&json.m)? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub m: Vec<String>,
}

/// A basis of L(E), all members sharing one denominator.
#[derive(Clone, Debug)]
pub struct FunctionBasis<F: Field> {
    divisor: Divisor<F>,
    functions: Vec<CurveFunction<F>>,
}

impl<F: Field> FunctionBasis<F> {
    pub fn divisor(&self) -> &Divisor<F> {
        &self.divisor
    }

    pub fn functions(&self) -> &[CurveFunction<F>] {
        &self.functions
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    /// Linear combination Σ cᵢ φᵢ.
    pub fn combine(&self, field: &F, c: &[F::Elem]) -> CurveFunction<F> {
        let mut a = UniPoly::zero();
        let mut b = UniPoly::zero();
        for (ci, phi) in c.iter().zip(&self.functions) {
            a = a.add(field, &phi.a.scale(field, ci));
            b = b.add(field, &phi.b.scale(field, ci));
        }
        let m = self.functions.first().map_or_else(|| UniPoly::one(field), |f| f.m.clone());
        CurveFunction { a, b, m }
    }

    /// Check by local orders that every member lies in L(E).
    pub fn verify(&self, field: &F, curve: &HyperellipticCurve<F>) -> bool {
        let mut points: Vec<CurvePoint<F>> = self.divisor.terms().iter().map(|(p, _)| p.clone()).collect();
        if !points.contains(&CurvePoint::Infinity) {
            points.push(CurvePoint::Infinity);
        }
        self.functions.iter().all(|phi| {
            points.iter().all(|p| {
                phi.order_at(field, curve, p).is_some_and(|v| v + self.divisor.multiplicity(p) >= 0)
            })
        })
    }
}

/// Basis of L(E) = {φ : div φ + E ≥ 0}. Affine support must avoid
/// Weierstrass points.
pub fn riemann_roch_basis<F: Field>(
    field: &F,
    curve: &HyperellipticCurve<F>,
    e: &Divisor<F>,
) -> Result<FunctionBasis<F>> {
    let g = curve.genus() as i64;
    // group affine support by x-coordinate
    let mut fibres: Vec<(F::Elem, F::Elem, i64, i64)> = Vec::new();
    let mut n_inf = 0;
    for (p, n) in e.terms() {
        match p {
            CurvePoint::Infinity => n_inf = *n,
            CurvePoint::Affine { x, y } => {
                if field.is_zero(y) {
                    return Err(Error::Unsupported("Weierstrass point in the support".into()));
                }
                if let Some(fb) = fibres.iter_mut().find(|fb| fb.0 == *x) {
                    if fb.1 == *y {
                        fb.2 += n;
                    } else {
                        fb.3 += n;
                    }
                } else {
                    fibres.push((x.clone(), y.clone(), *n, 0));
                }
            }
        }
    }
    let mut m = UniPoly::one(field);
    let mut local = Vec::new();
    for (x, y, n, n_conj) in &fibres {
        let ex = (*n).max(*n_conj).max(0);
        m = m.mul(field, &UniPoly::linear_root(field, x).pow(field, ex as u32));
        // a + b y must vanish to order ex - n on the branch through (x, y)
        local.push((x.clone(), y.clone(), ex - n));
        local.push((x.clone(), field.neg(y), ex - n_conj));
    }
    let budget = n_inf + 2 * m.degree().expect("nonzero") as i64;
    let da = budget.div_euclid(2);
    let db = (budget - 2 * g - 1).div_euclid(2);
    let na = if da >= 0 { da as usize + 1 } else { 0 };
    let nb = if db >= 0 { db as usize + 1 } else { 0 };
    let cols = na + nb;
    let functions = if cols == 0 {
        Vec::new()
    } else {
        let mut conditions = RowEchelon::new(cols);
        for (x, y, r) in &local {
            if *r <= 0 {
                continue;
            }
            let prec = *r as usize;
            let ybr = curve.branch(field, x, y, prec);
            let t = Series::from_poly(field, &UniPoly::new(field, vec![x.clone(), field.one()]), prec);
            // series of (x0 + t)^j and (x0 + t)^j · y
            let mut power = Series::from_poly(field, &UniPoly::one(field), prec);
            let mut columns = vec![Vec::new(); cols];
            for j in 0..na.max(nb) {
                if j < na {
                    columns[j] = power.coeffs.clone();
                }
                if j < nb {
                    columns[na + j] = power.mul(field, &ybr).coeffs;
                }
                power = power.mul(field, &t);
            }
            for k in 0..prec {
                let row: Vec<F::Elem> = columns.iter().map(|c| c[k].clone()).collect();
                conditions.insert(field, &row);
            }
        }
        let kernel = RowEchelon::from_rows(field, cols, &conditions.kernel(field));
        kernel
            .rows()
            .iter()
            .map(|v| CurveFunction {
                a: UniPoly::new(field, v[..na].to_vec()),
                b: UniPoly::new(field, v[na..].to_vec()),
                m: m.clone(),
            })
            .collect()
    };
    Ok(FunctionBasis { divisor: e.clone(), functions })
}

/// Projective dimension of |E|, -1 when L(E) = 0.
pub fn linear_system_dim<F: Field>(field: &F, curve: &HyperellipticCurve<F>, e: &Divisor<F>) -> Result<i64> {
    if e.degree() < 0 {
        return Ok(-1);
    }
    Ok(riemann_roch_basis(field, curve, e)?.dim() as i64 - 1)
}

/// Image of a curve point under the map given by a basis of L(E).
pub fn embed<F: Field>(
    field: &F,
    curve: &HyperellipticCurve<F>,
    basis: &FunctionBasis<F>,
    p: &CurvePoint<F>,
) -> Result<ProjPoint<F>> {
    let fns = basis.functions();
    let coords: Vec<F::Elem> = match p {
        CurvePoint::Infinity => {
            let g = curve.genus() as i64;
            let tops: Vec<i64> = fns
                .iter()
                .map(|phi| (2 * deg_or_neg(&phi.a)).max(2 * deg_or_neg(&phi.b) + 2 * g + 1))
                .collect();
            let top = *tops.iter().max().ok_or(Error::EmptyInput("empty basis"))?;
            fns.iter()
                .zip(&tops)
                .map(|(phi, &t)| {
                    if t != top {
                        field.zero()
                    } else if top % 2 == 0 {
                        phi.a.lead().cloned().unwrap_or_else(|| field.zero())
                    } else {
                        phi.b.lead().cloned().unwrap_or_else(|| field.zero())
                    }
                })
                .collect()
        }
        CurvePoint::Affine { x, y } => {
            if curve.is_weierstrass(field, p) {
                return Err(Error::Unsupported("embedding at a Weierstrass point".into()));
            }
            let m0 = fns.first().ok_or(Error::EmptyInput("empty basis"))?.m.eval(field, x);
            if !field.is_zero(&m0) {
                fns.iter()
                    .map(|phi| field.add(&phi.a.eval(field, x), &field.mul(&phi.b.eval(field, x), y)))
                    .collect()
            } else {
                // all numerators vanish; take the lowest common Laurent term
                let series: Vec<Series<F>> = fns
                    .iter()
                    .map(|phi| phi.local_numerator(field, curve, x, y).expect("basis members are nonzero"))
                    .collect();
                let low = series.iter().filter_map(|s| s.order(field)).min().expect("nonzero series");
                series.iter().map(|s| s.coeffs[low].clone()).collect()
            }
        }
    };
    ProjPoint::new(field, coords)
        .map_err(|_| Error::Verification("every basis function vanishes at the point".into()))
}

/// Points cut on the embedded curve by the hyperplane Σ cᵢ Xᵢ = 0, as the
/// polynomial whose roots are their x-coordinates. The basis must come from
/// L(K + 2D) with D an effective reduced divisor of degree g on affine
/// non-Weierstrass points with distinct x-coordinates; then the section has
/// no component at infinity and this polynomial has degree 4g - 2.
pub fn hyperplane_section<F: Field>(
    field: &F,
    curve: &HyperellipticCurve<F>,
    basis: &FunctionBasis<F>,
    hyperplane: &[F::Elem],
) -> Result<HyperplaneSection<F>> {
    if hyperplane.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: hyperplane.len() });
    }
    let psi = basis.combine(field, hyperplane);
    if psi.is_zero() {
        return Err(Error::Degenerate("zero hyperplane".into()));
    }
    let norm = psi.numerator_norm(field, curve);
    // the forced zeros at the conjugates of D contribute exactly m
    let x_poly = norm
        .exact_div(field, &psi.m)
        .ok_or_else(|| Error::Verification("denominator does not divide the norm".into()))?;
    let order_at_infinity = psi.order_at(field, curve, &CurvePoint::Infinity).expect("nonzero")
        + basis.divisor().multiplicity(&CurvePoint::Infinity);
    Ok(HyperplaneSection { x_poly, order_at_infinity })
}

#[derive(Clone, Debug)]
pub struct HyperplaneSection<F: Field> {
    pub x_poly: UniPoly<F>,
    pub order_at_infinity: i64,
}

impl<F: Field> HyperplaneSection<F> {
    pub fn degree(&self) -> i64 {
        self.x_poly.degree().map_or(0, |d| d as i64) + self.order_at_infinity
    }
}

/// A curve with D (degree g, reduced) and N ∈ |2D| (2g distinct points on
/// distinct x-coordinates), together with the certifying φ ∈ L(2D) whose
/// zero divisor is N and a basis of L(K + 2D).
#[derive(Clone, Debug)]
pub struct Instance<F: Field> {
    pub curve: HyperellipticCurve<F>,
    pub d: Vec<CurvePoint<F>>,
    pub n: Vec<CurvePoint<F>>,
    pub certificate: CurveFunction<F>,
    pub embedding: FunctionBasis<F>,
    pub seed: u64,
    pub trials: u64,
}

/// Default trial budget of the instance search.
pub const TRIAL_BUDGET: u64 = 100_000_000;

impl<F: Field> Instance<F> {
    pub fn genus(&self) -> usize {
        self.curve.genus()
    }

    pub fn d_divisor(&self) -> Divisor<F> {
        Divisor::from_points(&self.d)
    }

    /// The embedded points of N.
    pub fn embedded_n(&self, field: &F) -> Result<Vec<ProjPoint<F>>> {
        self.n.iter().map(|p| embed(field, &self.curve, &self.embedding, p)).collect()
    }

    /// Re-check the instance: curve membership, the open conditions on D
    /// and N, and div₀(φ) = N by local orders.
    pub fn verify(&self, field: &F) -> Result<()> {
        let g = self.genus();
        let c = &self.curve;
        let fail = |m: &str| Err(Error::Verification(m.to_string()));
        if self.d.len() != g || self.n.len() != 2 * g {
            return fail("wrong number of points");
        }
        for p in self.d.iter().chain(&self.n) {
            if !c.contains(field, p) || c.is_weierstrass(field, p) {
                return fail("point off the curve or Weierstrass");
            }
        }
        let mut xs: Vec<&F::Elem> = self.d.iter().chain(&self.n).filter_map(|p| p.x()).collect();
        let total = xs.len();
        xs.sort();
        xs.dedup();
        if xs.len() != total {
            return fail("repeated x-coordinate: non-reduced, conjugate pair or shared support");
        }
        let two_d = Divisor::from_points(&self.d).scaled(2);
        for p in &self.n {
            if self.certificate.order_at(field, c, p) != Some(1) {
                return fail("certificate does not vanish simply on N");
            }
        }
        for (p, k) in two_d.terms() {
            if self.certificate.order_at(field, c, p).is_none_or(|v| v + k < 0) {
                return fail("certificate not in L(2D)");
            }
        }
        if self.certificate.order_at(field, c, &CurvePoint::Infinity).is_none_or(|v| v < 0) {
            return fail("certificate has a pole at infinity");
        }
        let expected = 3 * g - 1;
        if self.embedding.dim() != expected || !self.embedding.verify(field, c) {
            return fail("embedding basis is not a basis of L(K + 2D)");
        }
        Ok(())
    }

    pub fn to_json(&self, field: &F) -> InstanceJson {
        InstanceJson {
            field: field.tag(),
            genus: self.genus(),
            seed: self.seed,
            trials: self.trials,
            f: self.curve.f().coeffs().iter().map(|c| field.format(c)).collect(),
            d: self.d.iter().map(|p| p.to_json(field)).collect(),
            n: self.n.iter().map(|p| p.to_json(field)).collect(),
            certificate: self.certificate.to_json(field),
            basis: self.embedding.functions().iter().map(|f| f.to_json(field)).collect(),
        }
    }

    pub fn from_json(field: &F, json: &InstanceJson) -> Result<Self> {
        check_tag(field, json.field)?;
        let coeffs = json.f.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
        let curve = HyperellipticCurve::new(field, UniPoly::new(field, coeffs))?;
        let pts = |v: &[CurvePointJson]| v.iter().map(|p| CurvePoint::from_json(field, p)).collect::<Result<Vec<_>>>();
        let d = pts(&json.d)?;
        let n = pts(&json.n)?;
        let divisor = curve.canonical_divisor().plus(&Divisor::from_points(&d).scaled(2));
        let functions = json.basis.iter().map(|f| CurveFunction::from_json(field, f)).collect::<Result<Vec<_>>>()?;
        let inst = Instance {
            curve,
            d,
            n,
            certificate: CurveFunction::from_json(field, &json.certificate)?,
            embedding: FunctionBasis { divisor, functions },
            seed: json.seed,
            trials: json.trials,
        };
        inst.verify(field)?;
        Ok(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub field: FieldTag,
    pub genus: usize,
    pub seed: u64,
    pub trials: u64,
    pub f: Vec<String>,
    pub d: Vec<CurvePointJson>,
    pub n: Vec<CurvePointJson>,
    pub certificate: FunctionJson,
    pub basis: Vec<FunctionJson>,
}

/// Random monic squarefree f of degree 2g+1.
pub fn random_curve<R: Rng + ?Sized>(field: &PrimeField, g: usize, rng: &mut R) -> HyperellipticCurve<PrimeField> {
    loop {
        let mut coeffs: Vec<u64> = (0..=2 * g).map(|_| field.sample(rng)).collect();
        coeffs.push(1);
        if let Ok(c) = HyperellipticCurve::new(field, UniPoly::new(field, coeffs)) {
            return c;
        }
    }
}

/// Random instance of genus g over 𝔽_p, reproducible from `seed`.
pub fn generate_instance(field: &PrimeField, g: usize, seed: u64, exec: Exec) -> Result<Instance<PrimeField>> {
    if g < 3 {
        return Err(Error::Config(format!("genus {g} < 3")));
    }
    let stream = SeedStream::new(seed);
    let curve = random_curve(field, g, &mut stream.stream("curve"));
    generate_instance_on(field, curve, seed, TRIAL_BUDGET, exec)
}

/// Instance search on a given curve.
///
/// Each trial prescribes g random zeros Q₁..Q_g, takes the (generically
/// unique) φ ∈ L(2D) through them and accepts when the remaining zeros of
/// φ are g further rational points on distinct new x-coordinates.
pub fn generate_instance_on(
    field: &PrimeField,
    curve: HyperellipticCurve<PrimeField>,
    seed: u64,
    budget: u64,
    exec: Exec,
) -> Result<Instance<PrimeField>> {
    let g = curve.genus();
    let stream = SeedStream::new(seed);
    let mut rng = stream.stream("divisor");
    let mut d: Vec<CurvePoint<PrimeField>> = Vec::with_capacity(g);
    while d.len() < g {
        let p = curve.random_point(field, &mut rng);
        if d.iter().all(|q| q.x() != p.x()) {
            d.push(p);
        }
    }
    let two_d = Divisor::from_points(&d).scaled(2);
    let l2d = riemann_roch_basis(field, &curve, &two_d)?;
    if l2d.dim() != g + 1 {
        return Err(Error::Verification(format!("dim L(2D) = {}, expected {}", l2d.dim(), g + 1)));
    }
    let d_xs: Vec<u64> = d.iter().map(|p| *p.x().expect("affine")).collect();

    let found = exec.find_first(0..budget, |trial| {
        let mut rng = stream.indexed("trial", trial);
        try_trial(field, &curve, &l2d, &d_xs, &mut rng).map(|(phi, n)| (trial, phi, n))
    });
    let (trial, certificate, n) = found.ok_or(Error::BudgetExhausted(budget))?;
    let k = curve.canonical_divisor().plus(&two_d);
    let embedding = riemann_roch_basis(field, &curve, &k)?;
    let inst = Instance { curve, d, n, certificate, embedding, seed, trials: trial + 1 };
    inst.verify(field)?;
    Ok(inst)
}

type Trial = (CurveFunction<PrimeField>, Vec<CurvePoint<PrimeField>>);

fn try_trial<R: Rng>(
    field: &PrimeField,
    curve: &HyperellipticCurve<PrimeField>,
    l2d: &FunctionBasis<PrimeField>,
    d_xs: &[u64],
    rng: &mut R,
) -> Option<Trial> {
    let g = curve.genus();
    let mut zeros: Vec<CurvePoint<PrimeField>> = Vec::with_capacity(g);
    while zeros.len() < g {
        let p = curve.random_point(field, rng);
        let x = p.x().expect("affine");
        if d_xs.contains(x) || zeros.iter().any(|q| q.x() == Some(x)) {
            continue;
        }
        zeros.push(p);
    }
    // values of the numerators a + b y at the prescribed zeros
    let rows: Vec<Vec<u64>> = zeros
        .iter()
        .map(|p| {
            let CurvePoint::Affine { x, y } = p else { unreachable!() };
            l2d.functions()
                .iter()
                .map(|phi| field.add(&phi.a.eval(field, x), &field.mul(&phi.b.eval(field, x), y)))
                .collect()
        })
        .collect();
    let kernel = RowEchelon::from_rows(field, g + 1, &rows).kernel(field);
    if kernel.len() != 1 {
        return None;
    }
    let phi = l2d.combine(field, &kernel[0]);
    let zero_poly = phi.numerator_norm(field, curve).exact_div(field, &phi.m)?;
    if zero_poly.degree() != Some(2 * g) || !zero_poly.is_squarefree(field) {
        return None;
    }
    let zxs: Vec<u64> = zeros.iter().map(|p| *p.x().expect("affine")).collect();
    let rest = zero_poly.exact_div(field, &UniPoly::from_roots(field, &zxs))?;
    let roots = rest.roots(field).ok()?;
    if roots.len() != g {
        return None;
    }
    let mut n = zeros;
    for r in roots {
        if d_xs.contains(&r) {
            return None;
        }
        let b = phi.b.eval(field, &r);
        let inv = field.inv(&b)?;
        let y = field.neg(&field.mul(&phi.a.eval(field, &r), &inv));
        if field.is_zero(&y) {
            return None;
        }
        let p = curve.point(field, r, y).ok()?;
        n.push(p);
    }
    Some((phi, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::default()
    }

    fn curve(g: usize, seed: u64) -> HyperellipticCurve<PrimeField> {
        random_curve(&fp(), g, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn involution_examples() {
        let f = fp();
        // f = x^7 + 3, so f(1) = 4
        let mut coeffs = vec![0u64; 8];
        coeffs[0] = 3;
        coeffs[7] = 1;
        let c = HyperellipticCurve::new(&f, UniPoly::new(&f, coeffs)).unwrap();
        let p = c.point(&f, 1, 2).unwrap();
        assert_eq!(c.involution(&f, &p), c.point(&f, 1, f.neg(&2)).unwrap());
        let c = curve(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let p = c.random_point(&f, &mut rng);
            assert_eq!(c.involution(&f, &c.involution(&f, &p)), p);
            assert_ne!(c.involution(&f, &p), p);
        }
        assert_eq!(c.involution(&f, &CurvePoint::Infinity), CurvePoint::Infinity);
    }

    #[test]
    fn rejects_even_and_low_genus_models() {
        let f = fp();
        let even = UniPoly::new(&f, (1..=9).collect());
        assert!(matches!(HyperellipticCurve::new(&f, even), Err(Error::Unsupported(_))));
        let low = UniPoly::new(&f, vec![1, 0, 0, 0, 0, 1]);
        assert!(HyperellipticCurve::new(&f, low).is_err());
    }

    #[test]
    fn trivial_and_infinity_spaces() {
        let f = fp();
        let c = curve(3, 3);
        let b = riemann_roch_basis(&f, &c, &Divisor::zero()).unwrap();
        assert_eq!(b.dim(), 1);
        assert!(b.functions()[0].b.is_zero() && b.functions()[0].a.degree() == Some(0));
        let e = Divisor::from_terms(vec![(CurvePoint::Infinity, 6)]);
        let b = riemann_roch_basis(&f, &c, &e).unwrap();
        assert_eq!(b.dim(), 4);
        assert!(b.functions().iter().all(|phi| phi.b.is_zero() && phi.a.degree().unwrap() <= 3));
    }

    #[test]
    fn hyperelliptic_class_moves_in_a_pencil() {
        let f = fp();
        let c = curve(4, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = c.random_point(&f, &mut rng);
        let h = Divisor::from_points(&[p.clone(), c.involution(&f, &p)]);
        assert_eq!(linear_system_dim(&f, &c, &h).unwrap(), 1);
        let q = c.random_point(&f, &mut rng);
        let general = Divisor::from_points(&[p, q]);
        assert_eq!(linear_system_dim(&f, &c, &general).unwrap(), 0);
    }

    #[test]
    fn basis_members_have_the_allowed_orders() {
        let f = fp();
        let c = curve(3, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = c.random_point(&f, &mut rng);
        let q = c.random_point(&f, &mut rng);
        let e = Divisor::from_terms(vec![(p.clone(), 3), (c.involution(&f, &p), 1), (q, -1), (CurvePoint::Infinity, 4)]);
        let b = riemann_roch_basis(&f, &c, &e).unwrap();
        assert!(b.verify(&f, &c));
        assert_eq!(b.dim() as i64, e.degree() - 3 + 1);
    }

    #[test]
    fn instance_generation_is_deterministic_and_certified() {
        let f = fp();
        let a = generate_instance(&f, 3, 11, Exec::default()).unwrap();
        let b = generate_instance(&f, 3, 11, Exec::Sequential).unwrap();
        assert_eq!(a.n, b.n);
        assert_eq!(a.certificate, b.certificate);
        a.verify(&f).unwrap();
        assert_eq!(a.n.len(), 6);
        let json = serde_json::to_string(&a.to_json(&f)).unwrap();
        let back = Instance::from_json(&f, &serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.n, a.n);
    }

    #[test]
    fn tampered_instance_fails_verification() {
        let f = fp();
        let mut inst = generate_instance(&f, 3, 12, Exec::default()).unwrap();
        inst.n[0] = inst.curve.involution(&f, &inst.n[0]);
        assert!(inst.verify(&f).is_err());
    }
}
