//! Rational normal curves, and the curve Γ swept in the span of N by the
//! lines joining involution-conjugate points.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::forms::Form;
use crate::hyperelliptic::{embed, CurvePoint, Instance};
use crate::matrix::{check_tag, Matrix};
use crate::par::Exec;
use crate::poly::UniPoly;
use crate::proj::{express_in, intersect_subspaces, proportional, span, standard_frame, ProjPoint, ProjSubspace};
use crate::rng::SeedStream;

/// A point of the parameter line, as (s, t).
pub type Param<F> = (<F as Field>::Elem, <F as Field>::Elem);

/// Degree-n curve in P^n given by n+1 binary forms of degree n in (s, t).
#[derive(Clone, Debug)]
pub struct RationalNormalCurve<F: Field> {
    components: Vec<Form<F>>,
    base_params: Vec<Param<F>>,
}

impl<F: Field> RationalNormalCurve<F> {
    pub fn from_components(field: &F, components: Vec<Form<F>>) -> Result<Self> {
        let n = components.len().checked_sub(1).ok_or(Error::EmptyInput("curve with no components"))?;
        if components.iter().any(|c| c.nvars() != 2 || c.degree() != n) {
            return Err(Error::Degenerate(format!("components must be binary forms of degree {n}")));
        }
        let rows: Vec<Vec<F::Elem>> = components.iter().map(|c| c.coeffs().to_vec()).collect();
        if Matrix::from_rows(rows, n + 1)?.rank(field) != n + 1 {
            return Err(Error::Degenerate("components are linearly dependent".into()));
        }
        Ok(RationalNormalCurve { components, base_params: Vec::new() })
    }

    pub fn ambient(&self) -> usize {
        self.components.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.components[0].degree()
    }

    pub fn components(&self) -> &[Form<F>] {
        &self.components
    }

    /// Parameters of the interpolation points, in input order.
    pub fn base_params(&self) -> &[Param<F>] {
        &self.base_params
    }

    pub fn point_at(&self, field: &F, s: &F::Elem, t: &F::Elem) -> Result<ProjPoint<F>> {
        let st = [s.clone(), t.clone()];
        let coords = self.components.iter().map(|c| c.evaluate(field, &st)).collect::<Result<Vec<_>>>()?;
        ProjPoint::new(field, coords)
    }

    pub fn random_point<R: Rng + ?Sized>(&self, field: &F, rng: &mut R) -> (Param<F>, ProjPoint<F>) {
        loop {
            let (s, t) = (field.sample(rng), field.sample(rng));
            if let Ok(p) = self.point_at(field, &s, &t) {
                return ((s, t), p);
            }
        }
    }

    fn dehomogenized(&self, field: &F, k: usize) -> UniPoly<F> {
        // s = 1: the coefficient of s^{n-i} t^i becomes that of t^i
        UniPoly::new(field, self.components[k].coeffs().to_vec())
    }

    /// Parameter mapping to `p`, if any.
    pub fn contains_point(&self, field: &F, p: &ProjPoint<F>) -> Option<Param<F>> {
        if p.ambient() != self.ambient() {
            return None;
        }
        if let Ok(q) = self.point_at(field, &field.zero(), &field.one()) {
            if q == *p {
                return Some((field.zero(), field.one()));
            }
        }
        let coords = p.coords();
        let j = coords.iter().position(|x| !field.is_zero(x))?;
        let cj = self.dehomogenized(field, j);
        let mut g = UniPoly::zero();
        for (k, pk) in coords.iter().enumerate() {
            if k == j {
                continue;
            }
            let minor = self.dehomogenized(field, k).scale(field, &coords[j]).sub(field, &cj.scale(field, pk));
            g = g.gcd(field, &minor);
        }
        let candidates = match g.degree() {
            None => return None,
            Some(0) => return None,
            Some(1) => vec![field.neg(&g.coeffs()[0])],
            Some(_) if field.characteristic() != 0 => g.roots(field).ok()?,
            Some(_) => return None,
        };
        candidates.into_iter().find_map(|t| {
            let q = self.point_at(field, &field.one(), &t).ok()?;
            (q == *p).then(|| (field.one(), t))
        })
    }

    pub fn to_json(&self, field: &F) -> RncJson {
        RncJson {
            field: field.tag(),
            ambient: self.ambient(),
            components: self.components.iter().map(|c| c.coeffs().iter().map(|x| field.format(x)).collect()).collect(),
            base_params: self.base_params.iter().map(|(s, t)| [field.format(s), field.format(t)]).collect(),
        }
    }

    pub fn from_json(field: &F, json: &RncJson) -> Result<Self> {
        check_tag(field, json.field)?;
        let components = json
            .components
            .iter()
            .map(|c| {
                let coeffs = c.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
                Form::from_coeffs(2, json.ambient, coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut curve = Self::from_components(field, components)?;
        curve.base_params = json
            .base_params
            .iter()
            .map(|[s, t]| Ok((field.parse(s)?, field.parse(t)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(curve)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RncJson {
    pub field: FieldTag,
    pub ambient: usize,
    /// Coefficients of each component in the order s^n, s^{n-1}t, …, t^n.
    pub components: Vec<Vec<String>>,
    pub base_params: Vec<[String; 2]>,
}

/// The unique rational normal curve through n+3 points of P^n in general
/// position.
///
/// After moving the first n+2 points to the standard frame, the curves
/// through the coordinate points are u_i = Π_{j≠i}(t - α_j s); passing
/// through (1, …, 1) at (0, 1) and through the last point q at (1, 0) forces
/// α_i = 1/q_i.
pub fn rnc_through_points<F: Field>(field: &F, points: &[ProjPoint<F>]) -> Result<RationalNormalCurve<F>> {
    let n = points.first().ok_or(Error::EmptyInput("no interpolation points"))?.ambient();
    if points.len() != n + 3 {
        return Err(Error::DimensionMismatch { expected: n + 3, found: points.len() });
    }
    if points.iter().any(|p| p.ambient() != n) {
        return Err(Error::Degenerate("points in different ambient spaces".into()));
    }
    let frame = standard_frame(field, &points[..n + 2])?;
    let q = frame.solve(field, points[n + 2].coords())?;
    let mut alpha = Vec::with_capacity(n + 1);
    for qi in &q {
        alpha.push(field.inv(qi).ok_or_else(|| Error::Degenerate("last point lies on a frame hyperplane".into()))?);
    }
    let mut sorted = alpha.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != alpha.len() {
        return Err(Error::Degenerate("n+1 of the points lie on a hyperplane".into()));
    }
    // t - α s as a binary form in (s, t)
    let lin = |a: &F::Elem| Form::linear(vec![field.neg(a), field.one()]);
    let normalized: Vec<Form<F>> = (0..=n)
        .map(|i| {
            (0..=n)
                .filter(|&j| j != i)
                .fold(Form::constant(field, 2, field.one()), |acc, j| acc.mul(field, &lin(&alpha[j])).expect("binary"))
        })
        .collect();
    let components = (0..=n)
        .map(|r| {
            (0..=n).fold(Form::zero(field, 2, n), |acc, i| {
                acc.add(field, &normalized[i].scale(field, frame.get(r, i))).expect("same shape")
            })
        })
        .collect();
    let mut curve = RationalNormalCurve::from_components(field, components)?;
    let mut params: Vec<Param<F>> = alpha.iter().map(|a| (field.one(), a.clone())).collect();
    params.push((field.zero(), field.one()));
    params.push((field.one(), field.zero()));
    curve.base_params = params;
    Ok(curve)
}

/// Cross-ratio of four parameters, `None` when two coincide.
pub fn cross_ratio<F: Field>(field: &F, a: &Param<F>, b: &Param<F>, c: &Param<F>, d: &Param<F>) -> Option<F::Elem> {
    let det = |p: &Param<F>, q: &Param<F>| field.sub(&field.mul(&p.0, &q.1), &field.mul(&p.1, &q.0));
    let num = field.mul(&det(a, c), &det(b, d));
    let den = field.mul(&det(a, d), &det(b, c));
    field.inv(&den).map(|inv| field.mul(&num, &inv))
}

/// True when the two parameter lists differ by a projective change of the
/// line (equal cross-ratios of (p0, p1, p2, pk) for every k).
pub fn projectively_equivalent<F: Field>(field: &F, a: &[Param<F>], b: &[Param<F>]) -> bool {
    if a.len() != b.len() || a.len() < 3 {
        return false;
    }
    (3..a.len()).all(|k| {
        let ca = cross_ratio(field, &a[0], &a[1], &a[2], &a[k]);
        let cb = cross_ratio(field, &b[0], &b[1], &b[2], &b[k]);
        ca.is_some() && ca == cb
    })
}

/// Coordinates on the span of N: the embedded N₁..N_{2g-1} are the basis,
/// so those points become the coordinate points of P^{2g-2}.
#[derive(Clone, Debug)]
pub struct SpanChart<F: Field> {
    basis: Vec<Vec<F::Elem>>,
    subspace: ProjSubspace<F>,
}

impl<F: Field> SpanChart<F> {
    pub fn new(field: &F, points: &[ProjPoint<F>]) -> Result<Self> {
        let subspace = span(field, points)?;
        let basis: Vec<Vec<F::Elem>> = points[..=subspace.dim()].iter().map(|p| p.coords().to_vec()).collect();
        let chart = SpanChart { basis, subspace };
        if crate::proj::rank_of(field, &chart.basis) != chart.basis.len() {
            return Err(Error::Degenerate("leading points do not span".into()));
        }
        Ok(chart)
    }

    pub fn subspace(&self) -> &ProjSubspace<F> {
        &self.subspace
    }

    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn to_local(&self, field: &F, p: &ProjPoint<F>) -> Option<ProjPoint<F>> {
        let c = express_in(field, &self.basis, p.coords())?;
        ProjPoint::new(field, c).ok()
    }

    /// Columns are the basis vectors: local coordinates to ambient ones.
    pub fn parametrization(&self, field: &F) -> Matrix<F> {
        Matrix::from_columns(field, &self.basis).expect("uniform basis")
    }
}

/// Γ for an instance: its samples, the interpolated curve and the checks.
#[derive(Clone, Debug)]
pub struct Gamma<F: Field> {
    pub chart: SpanChart<F>,
    /// N in local coordinates.
    pub n_points: Vec<ProjPoint<F>>,
    /// (curve point p, the point of Γ on the line through p and i(p)).
    pub samples: Vec<(CurvePoint<F>, ProjPoint<F>)>,
    pub curve: RationalNormalCurve<F>,
    pub report: GammaReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReport {
    pub genus: usize,
    pub span_dim: usize,
    pub samples: usize,
    pub lines_meeting_once: usize,
    pub samples_on_curve: usize,
    pub curve_degree: usize,
    pub n_points_are_their_own_images: bool,
    pub hyperplane_sections_ok: bool,
    pub samples_off_embedded_curve: usize,
    /// Parameters of N on Γ agree with their x-coordinates up to PGL(2).
    pub parameters_match_x: bool,
}

impl GammaReport {
    pub fn passed(&self) -> bool {
        self.span_dim == 2 * self.genus - 2
            && self.lines_meeting_once == self.samples
            && self.samples_on_curve + 1 == self.samples
            && self.curve_degree == 2 * self.genus - 2
            && self.n_points_are_their_own_images
            && self.hyperplane_sections_ok
            && self.samples_off_embedded_curve == self.samples
            && self.parameters_match_x
    }
}

/// The point where the line through embed(p) and embed(i(p)) meets the span
/// of N, in local coordinates.
pub fn secant_meet<F: Field>(
    field: &F,
    inst: &Instance<F>,
    chart: &SpanChart<F>,
    p: &CurvePoint<F>,
) -> Result<ProjPoint<F>> {
    let c = &inst.curve;
    let a = embed(field, c, &inst.embedding, p)?;
    let b = embed(field, c, &inst.embedding, &c.involution(field, p))?;
    let line = span(field, &[a, b])?;
    let meet = intersect_subspaces(field, &line, chart.subspace())?
        .ok_or_else(|| Error::Verification("conjugate line misses the span of N".into()))?;
    if meet.dim() != 0 {
        return Err(Error::Degenerate("conjugate line lies inside the span of N".into()));
    }
    let q = ProjPoint::new(field, meet.basis()[0].clone())?;
    chart.to_local(field, &q).ok_or_else(|| Error::Verification("meet point outside the chart".into()))
}

/// Sample Γ at `count` random curve points (at least 2g+10 are expected by
/// callers), interpolate it through N and the first sample and run the
/// membership and hyperplane checks.
pub fn gamma_curve<F: Field>(field: &F, inst: &Instance<F>, count: usize, seed: u64, exec: Exec) -> Result<Gamma<F>> {
    let g = inst.genus();
    let embedded = inst.embedded_n(field)?;
    let chart = SpanChart::new(field, &embedded)?;
    let n_points: Vec<ProjPoint<F>> = embedded
        .iter()
        .map(|p| chart.to_local(field, p).ok_or_else(|| Error::Verification("N outside its span".into())))
        .collect::<Result<_>>()?;
    let stream = SeedStream::new(seed);
    let n_xs: Vec<&F::Elem> = inst.n.iter().chain(&inst.d).filter_map(|p| p.x()).collect();
    let mut rng = stream.stream("gamma");
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let p = inst.curve.random_point(field, &mut rng);
        if !n_xs.contains(&p.x().expect("affine")) {
            points.push(p);
        }
    }
    let met: Vec<Result<ProjPoint<F>>> = exec.map(&points, |p| secant_meet(field, inst, &chart, p));
    let lines_meeting_once = met.iter().filter(|m| m.is_ok()).count();
    let samples: Vec<(CurvePoint<F>, ProjPoint<F>)> =
        points.into_iter().zip(met).map(|(p, m)| m.map(|q| (p, q))).collect::<Result<_>>()?;

    let own = inst
        .n
        .iter()
        .zip(&n_points)
        .all(|(p, local)| secant_meet(field, inst, &chart, p).is_ok_and(|q| q == *local));

    let mut through = n_points.clone();
    through.push(samples[0].1.clone());
    let curve = rnc_through_points(field, &through)?;
    let on_curve = exec.map(&samples[1..], |(_, q)| curve.contains_point(field, q).is_some());
    let samples_on_curve = on_curve.iter().filter(|b| **b).count();

    // the span of the embedded curve point and its conjugate never hits Γ
    // at either endpoint away from N
    let off_curve = exec.map(&samples, |(p, q)| {
        let c = &inst.curve;
        let a = embed(field, c, &inst.embedding, p).ok().and_then(|a| chart.to_local(field, &a));
        let b = embed(field, c, &inst.embedding, &c.involution(field, p)).ok().and_then(|b| chart.to_local(field, &b));
        a.as_ref() != Some(q) && b.as_ref() != Some(q)
    });
    let samples_off_embedded_curve = off_curve.iter().filter(|b| **b).count();

    let hyperplane_sections_ok = hyperplane_check(field, &curve, &n_points, &samples, 2 * g)?;

    let x_params: Vec<Param<F>> = inst.n.iter().map(|p| (field.one(), p.x().expect("affine").clone())).collect();
    let parameters_match_x = projectively_equivalent(field, &curve.base_params()[..2 * g], &x_params);

    let report = GammaReport {
        genus: g,
        span_dim: chart.dim(),
        samples: samples.len(),
        lines_meeting_once,
        samples_on_curve,
        curve_degree: curve.degree(),
        n_points_are_their_own_images: own,
        hyperplane_sections_ok,
        samples_off_embedded_curve,
        parameters_match_x,
    };
    Ok(Gamma { chart, n_points, samples, curve, report })
}

/// For each hyperplane spanned by 2g-2 of the points of N: its restriction
/// to Γ is a nonzero binary form vanishing exactly at those points'
/// parameters, and no other sample lies on it.
fn hyperplane_check<F: Field>(
    field: &F,
    curve: &RationalNormalCurve<F>,
    n_points: &[ProjPoint<F>],
    samples: &[(CurvePoint<F>, ProjPoint<F>)],
    count: usize,
) -> Result<bool> {
    let params = curve.base_params();
    for skip_a in 0..count {
        let skip_b = (skip_a + 1) % count;
        let chosen: Vec<ProjPoint<F>> = (0..count)
            .filter(|&i| i != skip_a && i != skip_b)
            .map(|i| n_points[i].clone())
            .collect();
        let h = span(field, &chosen)?;
        let eqs = h.equations(field);
        if eqs.len() != 1 {
            return Ok(false);
        }
        let restricted = Form::linear(eqs[0].clone()).substitute_curve(field, curve.components())?;
        if restricted.is_zero(field) {
            return Ok(false);
        }
        for i in 0..count {
            let v = restricted.evaluate(field, &[params[i].0.clone(), params[i].1.clone()])?;
            if field.is_zero(&v) != (i != skip_a && i != skip_b) {
                return Ok(false);
            }
        }
        if samples.iter().any(|(_, q)| field.is_zero(&crate::matrix::dot(field, &eqs[0], q.coords()))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check that `p` lies on the span of `points` in the same chart.
pub fn in_span<F: Field>(field: &F, points: &[ProjPoint<F>], p: &ProjPoint<F>) -> bool {
    span(field, points).is_ok_and(|s| s.contains(field, p.coords()))
}

pub fn same_point<F: Field>(field: &F, a: &ProjPoint<F>, b: &ProjPoint<F>) -> bool {
    proportional(field, a.coords(), b.coords())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::hyperelliptic::generate_instance;
    use crate::linsys::system_fat_points;
    use crate::proj::random_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn conic_through_five_points_matches_the_quadric_kernel() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts: Vec<_> = (0..5).map(|_| random_point(&f, 2, &mut rng)).collect();
        let conic = rnc_through_points(&f, &pts).unwrap();
        let sys = system_fat_points(&f, 2, 2, &pts.iter().map(|p| (p.clone(), 1)).collect::<Vec<_>>()).unwrap();
        assert_eq!(sys.dim(), 1);
        let q = &sys.forms()[0];
        assert!(q.substitute_curve(&f, conic.components()).unwrap().is_zero(&f));
        for p in &pts {
            assert!(conic.contains_point(&f, p).is_some());
        }
    }

    #[test]
    fn projective_line_is_its_own_curve() {
        let q = Rationals;
        let pts: Vec<_> = [[1, 0], [0, 1], [1, 1], [1, 2]]
            .iter()
            .map(|v| ProjPoint::new(&q, v.iter().map(|x| q.from_i64(*x)).collect()).unwrap())
            .collect();
        let line = rnc_through_points(&q, &pts).unwrap();
        assert_eq!(line.degree(), 1);
        let r = ProjPoint::new(&q, vec![q.from_i64(3), q.from_i64(7)]).unwrap();
        assert!(line.contains_point(&q, &r).is_some());
    }

    #[test]
    fn parameters_and_membership() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<_> = (0..7).map(|_| random_point(&f, 4, &mut rng)).collect();
        let c = rnc_through_points(&f, &pts).unwrap();
        assert_eq!(c.degree(), 4);
        for (p, (s, t)) in pts.iter().zip(c.base_params()) {
            assert_eq!(&c.point_at(&f, s, t).unwrap(), p);
        }
        for _ in 0..20 {
            let t0 = f.sample(&mut rng);
            let p = c.point_at(&f, &1, &t0).unwrap();
            assert_eq!(c.contains_point(&f, &p), Some((1, t0)));
        }
        let misses = (0..50).filter(|_| c.contains_point(&f, &random_point(&f, 4, &mut rng)).is_some()).count();
        assert_eq!(misses, 0);
    }

    #[test]
    fn reparametrization_gives_the_same_curve() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<_> = (0..6).map(|_| random_point(&f, 3, &mut rng)).collect();
        let a = rnc_through_points(&f, &pts).unwrap();
        let mut shuffled = pts.clone();
        shuffled.rotate_left(2);
        let b = rnc_through_points(&f, &shuffled).unwrap();
        for _ in 0..10 {
            let (_, p) = a.random_point(&f, &mut rng);
            assert!(b.contains_point(&f, &p).is_some());
        }
        let mut bp = b.base_params().to_vec();
        bp.rotate_right(2);
        assert!(projectively_equivalent(&f, a.base_params(), &bp));
    }

    #[test]
    fn degenerate_configuration_is_reported() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut pts: Vec<_> = (0..5).map(|_| random_point(&f, 2, &mut rng)).collect();
        // three collinear points
        let c: Vec<u64> = pts[0].coords().iter().zip(pts[1].coords()).map(|(a, b)| f.add(a, &f.mul(b, &5))).collect();
        pts[4] = ProjPoint::new(&f, c).unwrap();
        assert!(rnc_through_points(&f, &pts).is_err());
    }

    #[test]
    fn gamma_for_genus_three() {
        let f = PrimeField::default();
        let inst = generate_instance(&f, 3, 21, Exec::default()).unwrap();
        let gamma = gamma_curve(&f, &inst, 16, 1, Exec::default()).unwrap();
        assert!(gamma.report.passed(), "{:?}", gamma.report);
        assert_eq!(gamma.curve.degree(), 4);
    }
}
