//! Points and linear subspaces of projective space.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::matrix::{check_tag, dot, intersect_row_spaces, rref_kernel, Matrix, RowEchelon};

/// A point of P^n, stored with its first nonzero coordinate scaled to 1 so
/// that equality up to scalar is plain equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint<F: Field> {
    coords: Vec<F::Elem>,
}

impl<F: Field> ProjPoint<F> {
    pub fn new(field: &F, coords: Vec<F::Elem>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|x| !field.is_zero(x)) else {
            return Err(Error::Degenerate("projective point with all coordinates zero".into()));
        };
        let inv = field.inv(lead).expect("nonzero");
        Ok(ProjPoint { coords: coords.iter().map(|x| field.mul(x, &inv)).collect() })
    }

    /// Projective dimension n of the ambient P^n.
    pub fn ambient(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<F::Elem> {
        self.coords
    }

    pub fn to_json(&self, field: &F) -> PointJson {
        PointJson { field: field.tag(), coords: self.coords.iter().map(|x| field.format(x)).collect() }
    }

    pub fn from_json(field: &F, json: &PointJson) -> Result<Self> {
        check_tag(field, json.field)?;
        let coords = json.coords.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
        ProjPoint::new(field, coords)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub field: FieldTag,
    pub coords: Vec<String>,
}

/// True when `a` and `b` are nonzero and proportional.
pub fn proportional<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(i) = a.iter().position(|x| !field.is_zero(x)) else {
        return false;
    };
    if field.is_zero(&b[i]) {
        return false;
    }
    // a_j b_i == a_i b_j for all j
    (0..a.len()).all(|j| field.mul(&a[j], &b[i]) == field.mul(&a[i], &b[j]))
}

/// A linear subspace of P^n, held as a reduced echelon basis of its cone.
#[derive(Clone, Debug)]
pub struct ProjSubspace<F: Field> {
    ambient: usize,
    basis: RowEchelon<F>,
}

impl<F: Field> PartialEq for ProjSubspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

impl<F: Field> ProjSubspace<F> {
    pub fn from_vectors(field: &F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient + 1 {
                return Err(Error::DimensionMismatch { expected: ambient + 1, found: v.len() });
            }
        }
        let basis = RowEchelon::from_rows(field, ambient + 1, vectors);
        if basis.rank() == 0 {
            return Err(Error::EmptyInput("subspace needs a nonzero vector"));
        }
        Ok(ProjSubspace { ambient, basis })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Projective dimension (rank - 1).
    pub fn dim(&self) -> usize {
        self.basis.rank() - 1
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        self.basis.rows()
    }

    pub fn contains(&self, field: &F, p: &[F::Elem]) -> bool {
        p.len() == self.ambient + 1 && self.basis.contains(field, p)
    }

    pub fn contains_subspace(&self, field: &F, other: &ProjSubspace<F>) -> bool {
        other.basis.is_subspace_of(field, &self.basis)
    }

    /// Coefficients of `p` in the stored basis.
    pub fn coordinates_of(&self, field: &F, p: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if !self.contains(field, p) {
            return None;
        }
        // in reduced echelon form the coefficient of row i is p[pivot_i]
        Some(self.basis.pivots().iter().map(|&c| p[c].clone()).collect())
    }

    /// Matrix whose columns are the basis vectors: the parametrization
    /// P^dim -> P^ambient.
    pub fn parametrization(&self, field: &F) -> Matrix<F> {
        Matrix::from_columns(field, self.basis.rows()).expect("uniform basis")
    }

    /// Linear forms (as coefficient vectors) cutting out the subspace.
    pub fn equations(&self, field: &F) -> Vec<Vec<F::Elem>> {
        self.basis.kernel(field)
    }

    pub fn to_json(&self, field: &F) -> SubspaceJson {
        SubspaceJson {
            field: field.tag(),
            ambient: self.ambient,
            basis: self.basis.rows().iter().map(|r| r.iter().map(|x| field.format(x)).collect()).collect(),
        }
    }

    pub fn from_json(field: &F, json: &SubspaceJson) -> Result<Self> {
        check_tag(field, json.field)?;
        let vectors = json
            .basis
            .iter()
            .map(|r| r.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ProjSubspace::from_vectors(field, json.ambient, &vectors)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub field: FieldTag,
    pub ambient: usize,
    pub basis: Vec<Vec<String>>,
}

/// Smallest linear subspace containing all `points`.
pub fn span<F: Field>(field: &F, points: &[ProjPoint<F>]) -> Result<ProjSubspace<F>> {
    let first = points.first().ok_or(Error::EmptyInput("span of no points"))?;
    let n = first.ambient();
    let vectors: Vec<Vec<F::Elem>> = points.iter().map(|p| p.coords().to_vec()).collect();
    ProjSubspace::from_vectors(field, n, &vectors)
}

/// Intersection of two subspaces of the same P^n; `None` when empty.
pub fn intersect_subspaces<F: Field>(
    field: &F,
    a: &ProjSubspace<F>,
    b: &ProjSubspace<F>,
) -> Result<Option<ProjSubspace<F>>> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch { expected: a.ambient, found: b.ambient });
    }
    let meet = intersect_row_spaces(field, a.basis(), b.basis(), a.ambient + 1);
    if meet.rank() == 0 {
        return Ok(None);
    }
    Ok(Some(ProjSubspace { ambient: a.ambient, basis: meet }))
}

/// A point of P^ambient with coordinates drawn from the field's sample space.
pub fn random_point<F: Field, R: Rng + ?Sized>(field: &F, ambient: usize, rng: &mut R) -> ProjPoint<F> {
    loop {
        let coords: Vec<F::Elem> = (0..=ambient).map(|_| field.sample(rng)).collect();
        if let Ok(p) = ProjPoint::new(field, coords) {
            return p;
        }
    }
}

/// Value of a linear form at a point.
pub fn eval_linear<F: Field>(field: &F, form: &[F::Elem], p: &[F::Elem]) -> F::Elem {
    dot(field, form, p)
}

/// Rank of a list of vectors.
pub fn rank_of<F: Field>(field: &F, vectors: &[Vec<F::Elem>]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => {
            let m = Matrix::from_rows(vectors.to_vec(), v.len()).expect("uniform vectors");
            rref_kernel(field, &m).0
        }
    }
}

/// Coefficients expressing `v` in terms of independent `vectors`, or `None`
/// when `v` is outside their span.
pub fn express_in<F: Field>(field: &F, vectors: &[Vec<F::Elem>], v: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let mut columns = vectors.to_vec();
    columns.push(v.to_vec());
    let m = Matrix::from_columns(field, &columns).ok()?;
    let (_, kernel) = rref_kernel(field, &m);
    let k = vectors.len();
    let w = kernel.into_iter().find(|w| !field.is_zero(&w[k]))?;
    let inv = field.inv(&field.neg(&w[k])).expect("nonzero");
    Some(w[..k].iter().map(|c| field.mul(c, &inv)).collect())
}

/// Matrix A with A·e_i ∥ points[i] for i ≤ n and A·(1, …, 1) ∥ points[n+1],
/// for n+2 points of P^n in general position.
pub fn standard_frame<F: Field>(field: &F, points: &[ProjPoint<F>]) -> Result<Matrix<F>> {
    let n = points.first().ok_or(Error::EmptyInput("frame of no points"))?.ambient();
    if points.len() != n + 2 {
        return Err(Error::DimensionMismatch { expected: n + 2, found: points.len() });
    }
    let cols: Vec<Vec<F::Elem>> = points[..=n].iter().map(|p| p.coords().to_vec()).collect();
    let a = Matrix::from_columns(field, &cols)?;
    let lambda = a.solve(field, points[n + 1].coords()).map_err(|_| Error::Degenerate("frame points are dependent".into()))?;
    if lambda.iter().any(|l| field.is_zero(l)) {
        return Err(Error::Degenerate("unit point lies on a coordinate hyperplane of the frame".into()));
    }
    Ok(Matrix::from_fn(n + 1, n + 1, |r, c| field.mul(a.get(r, c), &lambda[c])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt<F: Field>(f: &F, v: &[i64]) -> ProjPoint<F> {
        ProjPoint::new(f, v.iter().map(|x| f.from_i64(*x)).collect()).unwrap()
    }

    #[test]
    fn projective_equality_up_to_scale() {
        let q = Rationals;
        assert_eq!(pt(&q, &[0, 2, 4]), pt(&q, &[0, -1, -2]));
        assert_ne!(pt(&q, &[1, 2, 4]), pt(&q, &[1, 2, 5]));
        assert!(ProjPoint::new(&q, vec![q.zero(), q.zero()]).is_err());
    }

    #[test]
    fn span_examples() {
        let q = Rationals;
        let line = span(&q, &[pt(&q, &[1, 0, 0]), pt(&q, &[1, 1, 1])]).unwrap();
        assert_eq!(line.dim(), 1);
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts: Vec<_> = (0..6).map(|_| random_point(&f, 4, &mut rng)).collect();
        assert_eq!(span(&f, &pts).unwrap().dim(), 4);
        assert!(span::<Rationals>(&q, &[]).is_err());
    }

    #[test]
    fn intersections_of_general_lines_and_planes() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut sub = |k: usize| {
            let pts: Vec<_> = (0..k).map(|_| random_point(&f, 3, &mut rng)).collect();
            span(&f, &pts).unwrap()
        };
        let (l1, l2) = (sub(2), sub(2));
        assert!(intersect_subspaces(&f, &l1, &l2).unwrap().is_none());
        let (p1, p2) = (sub(3), sub(3));
        let meet = intersect_subspaces(&f, &p1, &p2).unwrap().unwrap();
        assert_eq!(meet.dim(), 1);
        assert!(p1.contains_subspace(&f, &meet) && p2.contains_subspace(&f, &meet));
        assert_eq!(intersect_subspaces(&f, &p1, &p1).unwrap().unwrap(), p1);
        let other = span(&f, &[random_point(&f, 4, &mut rng)]).unwrap();
        assert!(intersect_subspaces(&f, &p1, &other).is_err());
    }

    #[test]
    fn random_point_replays_and_separates() {
        let f = PrimeField::default();
        let a = random_point(&f, 3, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_point(&f, 3, &mut ChaCha8Rng::seed_from_u64(9));
        let c = random_point(&f, 3, &mut ChaCha8Rng::seed_from_u64(10));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn coordinates_and_equations() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<_> = (0..3).map(|_| random_point(&f, 5, &mut rng)).collect();
        let s = span(&f, &pts).unwrap();
        let eqs = s.equations(&f);
        assert_eq!(eqs.len(), 3);
        for p in &pts {
            assert!(eqs.iter().all(|e| eval_linear(&f, e, p.coords()) == 0));
            let c = s.coordinates_of(&f, p.coords()).unwrap();
            let back = s.parametrization(&f).mul_vec(&f, &c).unwrap();
            assert_eq!(back, p.coords());
        }
        let json = s.to_json(&f);
        assert_eq!(ProjSubspace::from_json(&f, &json).unwrap(), s);
        let c = express_in(&f, &pts.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(), pts[1].coords()).unwrap();
        assert_eq!(c, vec![0, 1, 0]);
        assert!(express_in(&f, &pts[..2].iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(), pts[2].coords()).is_none());
    }

    #[test]
    fn frame_normalization() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts: Vec<_> = (0..5).map(|_| random_point(&f, 3, &mut rng)).collect();
        let a = standard_frame(&f, &pts).unwrap();
        for i in 0..4 {
            let mut e = vec![0; 4];
            e[i] = 1;
            assert!(proportional(&f, &a.mul_vec(&f, &e).unwrap(), pts[i].coords()));
        }
        assert!(proportional(&f, &a.mul_vec(&f, &[1, 1, 1, 1]).unwrap(), pts[4].coords()));
        let mut bad = pts.clone();
        bad[4] = bad[0].clone();
        assert!(standard_frame(&f, &bad).is_err());
    }
}
