//! Linear systems of forms cut out by vanishing conditions.
//!
//! A system is stored as a reduced echelon basis of its coefficient
//! subspace, so two systems have the same span iff their bases are equal.
//! Point and subspace conditions are imposed exactly. Curve conditions are
//! imposed at samples and carry a rank-saturation record.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::forms::{count_monomials, power_table, Form, MonomialBasis};
use crate::matrix::{check_tag, intersect_row_spaces, rank_profile, RowEchelon};
use crate::par::Exec;
use crate::proj::{ProjPoint, ProjSubspace};

/// Default number of trailing samples over which the rank must be stable.
pub const DEFAULT_MARGIN: usize = 10;

#[derive(Clone, Debug)]
pub enum VanishingCondition<F: Field> {
    PointMultiplicity { point: Vec<F::Elem>, multiplicity: usize },
    Subspace { subspace: ProjSubspace<F> },
    CurveMultiplicity { samples: Vec<Vec<F::Elem>>, multiplicity: usize },
    /// Relations among the components of a map, found from sampled images.
    Relations { images: Vec<Vec<F::Elem>> },
}

impl<F: Field> VanishingCondition<F> {
    fn rows(&self, field: &F, basis: &MonomialBasis) -> Vec<Vec<F::Elem>> {
        match self {
            VanishingCondition::PointMultiplicity { point, multiplicity } => {
                fat_point_rows(field, basis, point, *multiplicity)
            }
            VanishingCondition::Subspace { subspace } => subspace_rows(field, basis, subspace),
            VanishingCondition::CurveMultiplicity { samples, multiplicity } => {
                samples.iter().flat_map(|p| fat_point_rows(field, basis, p, *multiplicity)).collect()
            }
            VanishingCondition::Relations { images } => {
                images.iter().map(|p| basis.evaluate_all(field, p)).collect()
            }
        }
    }

    fn to_json(&self, field: &F) -> ConditionJson {
        let fmt = |v: &[F::Elem]| v.iter().map(|x| field.format(x)).collect::<Vec<_>>();
        match self {
            VanishingCondition::PointMultiplicity { point, multiplicity } => {
                ConditionJson::PointMultiplicity { point: fmt(point), multiplicity: *multiplicity }
            }
            VanishingCondition::Subspace { subspace } => {
                ConditionJson::Subspace { basis: subspace.basis().iter().map(|v| fmt(v)).collect() }
            }
            VanishingCondition::CurveMultiplicity { samples, multiplicity } => ConditionJson::CurveMultiplicity {
                samples: samples.iter().map(|v| fmt(v)).collect(),
                multiplicity: *multiplicity,
            },
            VanishingCondition::Relations { images } => {
                ConditionJson::Relations { images: images.iter().map(|v| fmt(v)).collect() }
            }
        }
    }

    fn from_json(field: &F, ambient: usize, json: &ConditionJson) -> Result<Self> {
        let parse = |v: &[String]| v.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>();
        let parse_all = |vs: &[Vec<String>]| vs.iter().map(|v| parse(v)).collect::<Result<Vec<_>>>();
        Ok(match json {
            ConditionJson::PointMultiplicity { point, multiplicity } => {
                VanishingCondition::PointMultiplicity { point: parse(point)?, multiplicity: *multiplicity }
            }
            ConditionJson::Subspace { basis } => VanishingCondition::Subspace {
                subspace: ProjSubspace::from_vectors(field, ambient, &parse_all(basis)?)?,
            },
            ConditionJson::CurveMultiplicity { samples, multiplicity } => {
                VanishingCondition::CurveMultiplicity { samples: parse_all(samples)?, multiplicity: *multiplicity }
            }
            ConditionJson::Relations { images } => VanishingCondition::Relations { images: parse_all(images)? },
        })
    }
}

/// Falling factorial c!/(c-b)! as a field element (zero when b > c).
fn falling<F: Field>(field: &F, c: u32, b: u32) -> Option<F::Elem> {
    if b > c {
        return None;
    }
    Some(((c - b + 1)..=c).fold(field.one(), |acc, k| field.mul(&acc, &field.from_i64(i64::from(k)))))
}

/// One row per partial derivative of order m-1, evaluated at `p`.
pub fn fat_point_rows<F: Field>(field: &F, basis: &MonomialBasis, p: &[F::Elem], m: usize) -> Vec<Vec<F::Elem>> {
    if m == 0 {
        return Vec::new();
    }
    let d = basis.degree();
    if m - 1 > d {
        // every coefficient is an order-(m-1) partial of something nonzero
        return (0..basis.len())
            .map(|i| {
                let mut r = vec![field.zero(); basis.len()];
                r[i] = field.one();
                r
            })
            .collect();
    }
    let powers = power_table(field, p, d);
    let betas = MonomialBasis::new(basis.nvars(), m - 1);
    betas
        .monomials()
        .iter()
        .map(|beta| {
            basis
                .monomials()
                .iter()
                .map(|c| {
                    let mut acc = field.one();
                    for ((&ci, &bi), pw) in c.iter().zip(beta).zip(&powers) {
                        match falling(field, ci, bi) {
                            None => return field.zero(),
                            Some(ff) => {
                                acc = field.mul(&acc, &ff);
                                acc = field.mul(&acc, &pw[(ci - bi) as usize]);
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Rows expressing that a form vanishes identically on a subspace: pull each
/// monomial back along the parametrization and read off the u-coefficients.
pub fn subspace_rows<F: Field>(field: &F, basis: &MonomialBasis, s: &ProjSubspace<F>) -> Vec<Vec<F::Elem>> {
    let d = basis.degree();
    let k = s.dim() + 1;
    let param = s.parametrization(field);
    let linear: Vec<Form<F>> = (0..param.rows()).map(|r| Form::linear(param.row(r).to_vec())).collect();
    let powers: Vec<Vec<Form<F>>> = linear
        .iter()
        .map(|l| {
            let mut row = vec![Form::constant(field, k, field.one())];
            for e in 1..=d {
                let next = row[e - 1].mul(field, l).expect("same nvars");
                row.push(next);
            }
            row
        })
        .collect();
    let nu = count_monomials(k, d);
    let mut rows = vec![vec![field.zero(); basis.len()]; nu];
    for (col, c) in basis.monomials().iter().enumerate() {
        let mut term = Form::constant(field, k, field.one());
        for (i, &e) in c.iter().enumerate() {
            if e > 0 {
                term = term.mul(field, &powers[i][e as usize]).expect("same nvars");
            }
        }
        for (r, v) in term.coeffs().iter().enumerate() {
            rows[r][col] = v.clone();
        }
    }
    rows
}

/// Record of how the sampled conditions of a system settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub field: FieldTag,
    pub seed: Option<u64>,
    pub samples_used: usize,
    pub margin: usize,
    pub saturated: bool,
}

#[derive(Clone, Debug)]
pub struct LinearSystem<F: Field> {
    nvars: usize,
    degree: usize,
    basis: RowEchelon<F>,
    conditions: Vec<VanishingCondition<F>>,
    provenance: Provenance,
}

impl<F: Field> LinearSystem<F> {
    /// The system of all forms of the given degree.
    pub fn full(field: &F, n: usize, d: usize) -> Self {
        let cols = count_monomials(n + 1, d);
        let conditions = RowEchelon::new(cols);
        Self::from_condition_rows(field, n + 1, d, &conditions, Vec::new(), exact_provenance(field))
    }

    fn from_condition_rows(
        field: &F,
        nvars: usize,
        degree: usize,
        rows: &RowEchelon<F>,
        conditions: Vec<VanishingCondition<F>>,
        provenance: Provenance,
    ) -> Self {
        let kernel = rows.kernel(field);
        let basis = RowEchelon::from_rows(field, rows.cols(), &kernel);
        LinearSystem { nvars, degree, basis, conditions, provenance }
    }

    /// Span of the given forms, with no recorded conditions.
    pub fn from_forms(field: &F, forms: &[Form<F>]) -> Result<Self> {
        let first = forms.first().ok_or(Error::EmptyInput("system from no forms"))?;
        let (nvars, degree) = (first.nvars(), first.degree());
        let mut rows = Vec::with_capacity(forms.len());
        for f in forms {
            if f.nvars() != nvars || f.degree() != degree {
                return Err(Error::Degenerate("forms of different shapes".into()));
            }
            rows.push(f.coeffs().to_vec());
        }
        let basis = RowEchelon::from_rows(field, count_monomials(nvars, degree), &rows);
        Ok(LinearSystem { nvars, degree, basis, conditions: Vec::new(), provenance: exact_provenance(field) })
    }

    pub fn ambient(&self) -> usize {
        self.nvars - 1
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Vector-space dimension.
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn coefficient_basis(&self) -> &RowEchelon<F> {
        &self.basis
    }

    pub fn forms(&self) -> Vec<Form<F>> {
        self.basis
            .rows()
            .iter()
            .map(|r| Form::from_coeffs(self.nvars, self.degree, r.clone()).expect("basis length"))
            .collect()
    }

    pub fn conditions(&self) -> &[VanishingCondition<F>] {
        &self.conditions
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.provenance.seed = Some(seed);
        self
    }

    pub fn contains(&self, field: &F, f: &Form<F>) -> bool {
        f.nvars() == self.nvars && f.degree() == self.degree && self.basis.contains(field, f.coeffs())
    }

    pub fn is_subsystem_of(&self, field: &F, other: &Self) -> bool {
        self.nvars == other.nvars && self.degree == other.degree && self.basis.is_subspace_of(field, &other.basis)
    }

    /// Same span of forms (conditions may differ).
    pub fn same_span(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.degree == other.degree && self.basis == other.basis
    }

    /// Re-check every basis member against every recorded condition.
    pub fn verify(&self, field: &F) -> bool {
        let mb = MonomialBasis::new(self.nvars, self.degree);
        self.conditions.iter().all(|c| {
            let rows = c.rows(field, &mb);
            self.basis.rows().iter().all(|f| {
                rows.iter().all(|r| field.is_zero(&crate::matrix::dot(field, r, f)))
            })
        })
    }

    pub fn to_json(&self, field: &F) -> LinearSystemJson {
        LinearSystemJson {
            field: field.tag(),
            ambient: self.ambient(),
            degree: self.degree,
            basis: self.basis.rows().iter().map(|r| r.iter().map(|x| field.format(x)).collect()).collect(),
            conditions: self.conditions.iter().map(|c| c.to_json(field)).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_json(field: &F, json: &LinearSystemJson) -> Result<Self> {
        check_tag(field, json.field)?;
        let nvars = json.ambient + 1;
        let cols = count_monomials(nvars, json.degree);
        let rows = json
            .basis
            .iter()
            .map(|r| {
                if r.len() != cols {
                    return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
                }
                r.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let conditions = json
            .conditions
            .iter()
            .map(|c| VanishingCondition::from_json(field, json.ambient, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearSystem {
            nvars,
            degree: json.degree,
            basis: RowEchelon::from_rows(field, cols, &rows),
            conditions,
            provenance: json.provenance.clone(),
        })
    }
}

fn exact_provenance<F: Field>(field: &F) -> Provenance {
    Provenance { field: field.tag(), seed: None, samples_used: 0, margin: 0, saturated: true }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConditionJson {
    PointMultiplicity { point: Vec<String>, multiplicity: usize },
    Subspace { basis: Vec<Vec<String>> },
    CurveMultiplicity { samples: Vec<Vec<String>>, multiplicity: usize },
    Relations { images: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystemJson {
    pub field: FieldTag,
    pub ambient: usize,
    pub degree: usize,
    pub basis: Vec<Vec<String>>,
    pub conditions: Vec<ConditionJson>,
    pub provenance: Provenance,
}

fn check_points<F: Field>(n: usize, points: &[&[F::Elem]]) -> Result<()> {
    for p in points {
        if p.len() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, found: p.len() });
        }
    }
    Ok(())
}

/// Forms of degree d on P^n with the given multiplicity at each point.
pub fn system_fat_points<F: Field>(
    field: &F,
    n: usize,
    d: usize,
    constraints: &[(ProjPoint<F>, usize)],
) -> Result<LinearSystem<F>> {
    check_points::<F>(n, &constraints.iter().map(|(p, _)| p.coords()).collect::<Vec<_>>())?;
    let basis = MonomialBasis::new(n + 1, d);
    let conditions: Vec<VanishingCondition<F>> = constraints
        .iter()
        .map(|(p, m)| VanishingCondition::PointMultiplicity { point: p.coords().to_vec(), multiplicity: *m })
        .collect();
    let mut rows = RowEchelon::new(basis.len());
    for c in &conditions {
        for r in c.rows(field, &basis) {
            rows.insert(field, &r);
        }
    }
    Ok(LinearSystem::from_condition_rows(field, n + 1, d, &rows, conditions, exact_provenance(field)))
}

/// Forms of degree d on P^n vanishing identically on every subspace.
pub fn system_on_subspaces<F: Field>(
    field: &F,
    n: usize,
    d: usize,
    subspaces: &[ProjSubspace<F>],
    exec: Exec,
) -> Result<LinearSystem<F>> {
    for s in subspaces {
        if s.ambient() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.ambient() });
        }
    }
    let basis = MonomialBasis::new(n + 1, d);
    let blocks = exec.map(subspaces, |s| subspace_rows(field, &basis, s));
    let mut rows = RowEchelon::new(basis.len());
    'outer: for block in blocks {
        for r in block {
            rows.insert(field, &r);
            if rows.rank() == basis.len() {
                break 'outer;
            }
        }
    }
    let conditions = subspaces.iter().map(|s| VanishingCondition::Subspace { subspace: s.clone() }).collect();
    Ok(LinearSystem::from_condition_rows(field, n + 1, d, &rows, conditions, exact_provenance(field)))
}

/// Forms of degree d on P^n with multiplicity m at every sample. The system
/// is flagged unsaturated unless the rank stayed constant over the last
/// `margin` samples (or reached the full coefficient count).
pub fn system_on_curve<F: Field>(
    field: &F,
    n: usize,
    d: usize,
    samples: &[ProjPoint<F>],
    m: usize,
    margin: usize,
    exec: Exec,
) -> Result<LinearSystem<F>> {
    check_points::<F>(n, &samples.iter().map(|p| p.coords()).collect::<Vec<_>>())?;
    let basis = MonomialBasis::new(n + 1, d);
    let blocks = exec.map(samples, |p| fat_point_rows(field, &basis, p.coords(), m));
    let mut rows = RowEchelon::new(basis.len());
    let mut last_growth = 0;
    for (i, block) in blocks.iter().enumerate() {
        let mut grew = false;
        for r in block {
            grew |= rows.insert(field, r);
        }
        if grew {
            last_growth = i + 1;
        }
    }
    let full = rows.rank() == basis.len();
    let saturated = full || samples.len() >= last_growth + margin;
    let provenance = Provenance {
        field: field.tag(),
        seed: None,
        samples_used: samples.len(),
        margin,
        saturated,
    };
    let conditions = vec![VanishingCondition::CurveMultiplicity {
        samples: samples.iter().map(|p| p.coords().to_vec()).collect(),
        multiplicity: m,
    }];
    Ok(LinearSystem::from_condition_rows(field, n + 1, d, &rows, conditions, provenance))
}

/// Impose sampled conditions until the rank has been stable for `margin`
/// consecutive samples. `condition(i)` must be deterministic in `i`;
/// batches are generated under `exec` and inserted in index order.
pub fn saturate<F, S>(field: &F, n: usize, d: usize, margin: usize, exec: Exec, condition: S) -> Result<LinearSystem<F>>
where
    F: Field,
    S: Fn(usize) -> Result<VanishingCondition<F>> + Sync + Send,
{
    let basis = MonomialBasis::new(n + 1, d);
    let cols = basis.len();
    let first = condition(0)?;
    let per = first.rows(field, &basis).len().max(1);
    let mut target = cols.div_ceil(per) + margin;
    let limit = 64 * target;
    let mut rows = RowEchelon::new(cols);
    let mut conditions: Vec<VanishingCondition<F>> = Vec::new();
    let mut last_growth = 0;
    loop {
        let start = conditions.len();
        let batch: Vec<Result<(VanishingCondition<F>, Vec<Vec<F::Elem>>)>> =
            exec.map_range(start..target, |i| {
                let c = condition(i)?;
                let r = c.rows(field, &basis);
                Ok((c, r))
            });
        for item in batch {
            let (c, block) = item?;
            conditions.push(c);
            let mut grew = false;
            for r in &block {
                if rows.rank() < cols {
                    grew |= rows.insert(field, r);
                }
            }
            if grew {
                last_growth = conditions.len();
            }
        }
        let full = rows.rank() == cols;
        if full || conditions.len() >= last_growth + margin {
            break;
        }
        if conditions.len() >= limit {
            let provenance = Provenance { field: field.tag(), seed: None, samples_used: conditions.len(), margin, saturated: false };
            return Ok(LinearSystem::from_condition_rows(field, n + 1, d, &rows, conditions, provenance));
        }
        target = (last_growth + margin).max(conditions.len() + 1);
    }
    let provenance = Provenance { field: field.tag(), seed: None, samples_used: conditions.len(), margin, saturated: true };
    Ok(LinearSystem::from_condition_rows(field, n + 1, d, &rows, conditions, provenance))
}

/// Forms lying in both systems.
pub fn intersect_systems<F: Field>(field: &F, a: &LinearSystem<F>, b: &LinearSystem<F>) -> Result<LinearSystem<F>> {
    if a.nvars != b.nvars {
        return Err(Error::DimensionMismatch { expected: a.nvars, found: b.nvars });
    }
    if a.degree != b.degree {
        return Err(Error::DimensionMismatch { expected: a.degree, found: b.degree });
    }
    let basis = intersect_row_spaces(field, a.basis.rows(), b.basis.rows(), a.basis.cols());
    let mut conditions = a.conditions.clone();
    conditions.extend(b.conditions.iter().cloned());
    let provenance = Provenance {
        field: field.tag(),
        seed: a.provenance.seed.or(b.provenance.seed),
        samples_used: a.provenance.samples_used + b.provenance.samples_used,
        margin: a.provenance.margin.max(b.provenance.margin),
        saturated: a.provenance.saturated && b.provenance.saturated,
    };
    Ok(LinearSystem { nvars: a.nvars, degree: a.degree, basis, conditions, provenance })
}

/// Degree-k relations among the components of a map, as a system on the
/// target. Source points are drawn from `rng`; samples are added until the
/// rank of the evaluated target monomials has been stable for `margin`
/// consecutive samples, starting from `C(t+k, k) + margin` samples.
pub fn find_relations<F: Field, R: Rng + ?Sized>(
    field: &F,
    map_forms: &[Form<F>],
    k: usize,
    margin: usize,
    rng: &mut R,
    exec: Exec,
) -> Result<LinearSystem<F>> {
    let first = map_forms.first().ok_or(Error::EmptyInput("relations of an empty map"))?;
    let (nvars, deg) = (first.nvars(), first.degree());
    if map_forms.iter().any(|f| f.nvars() != nvars || f.degree() != deg) {
        return Err(Error::Degenerate("map components of different shapes".into()));
    }
    let target = MonomialBasis::new(map_forms.len(), k);
    let source = MonomialBasis::new(nvars, deg);
    let mut batch = target.len() + margin;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    let mut images: Vec<Vec<F::Elem>> = Vec::new();
    let mut stalled = 0;
    loop {
        let points: Vec<Vec<F::Elem>> = (0..batch).map(|_| (0..nvars).map(|_| field.sample(rng)).collect()).collect();
        let evaluated = exec.map(&points, |p| {
            let mv = source.evaluate_all(field, p);
            let img: Vec<F::Elem> = map_forms
                .iter()
                .map(|f| mv.iter().zip(f.coeffs()).fold(field.zero(), |acc, (v, c)| field.mul_add(&acc, v, c)))
                .collect();
            let img = field.primitive(&img);
            let row = target.evaluate_all(field, &img);
            (img, row)
        });
        for (img, row) in evaluated {
            if img.iter().all(|x| field.is_zero(x)) {
                // base point of the map
                stalled += 1;
                continue;
            }
            images.push(img);
            rows.push(row);
        }
        let profile = rank_profile(field, &rows);
        let last_growth = profile.last().map_or(0, |i| i + 1);
        if profile.len() == target.len() || images.len() >= last_growth + margin {
            break;
        }
        if stalled > 10 * batch || images.len() > 64 * (target.len() + margin) {
            return Err(Error::Unsaturated(format!("relation rank still rising after {} samples", images.len())));
        }
        batch *= 2;
    }
    let rows = RowEchelon::from_rows(field, target.len(), &rows);
    let provenance = Provenance {
        field: field.tag(),
        seed: None,
        samples_used: images.len(),
        margin,
        saturated: true,
    };
    let conditions = vec![VanishingCondition::Relations { images }];
    Ok(LinearSystem::from_condition_rows(field, map_forms.len(), k, &rows, conditions, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::proj::{random_point, span};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt<F: Field>(f: &F, v: &[i64]) -> ProjPoint<F> {
        ProjPoint::new(f, v.iter().map(|x| f.from_i64(*x)).collect()).unwrap()
    }

    #[test]
    fn quadrics_through_five_points_of_p3() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cons: Vec<_> = (0..5).map(|_| (random_point(&f, 3, &mut rng), 1)).collect();
        let sys = system_fat_points(&f, 3, 2, &cons).unwrap();
        assert_eq!(sys.dim(), 5);
        assert!(sys.verify(&f));
    }

    #[test]
    fn conic_with_triple_point_is_zero() {
        let q = Rationals;
        let sys = system_fat_points(&q, 2, 2, &[(pt(&q, &[1, 2, 3]), 3)]).unwrap();
        assert!(sys.is_empty());
    }

    #[test]
    fn double_point_kills_first_partials() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_point(&f, 3, &mut rng);
        let sys = system_fat_points(&f, 3, 3, &[(p.clone(), 2)]).unwrap();
        assert_eq!(sys.dim(), 20 - 4);
        for form in sys.forms() {
            for i in 0..4 {
                assert_eq!(form.partial_derivative(&f, i).evaluate(&f, p.coords()).unwrap(), 0);
            }
        }
    }

    #[test]
    fn subspace_examples() {
        let q = Rationals;
        let point = span(&q, &[pt(&q, &[1, 1, 1])]).unwrap();
        let sys = system_on_subspaces(&q, 2, 1, std::slice::from_ref(&point), Exec::default()).unwrap();
        assert_eq!(sys.dim(), 2);
        let fat = system_fat_points(&q, 2, 1, &[(pt(&q, &[1, 1, 1]), 1)]).unwrap();
        assert!(sys.same_span(&fat));

        let l1 = span(&q, &[pt(&q, &[1, 0, 0, 0]), pt(&q, &[0, 1, 0, 0])]).unwrap();
        let l2 = span(&q, &[pt(&q, &[0, 0, 1, 0]), pt(&q, &[0, 0, 0, 1])]).unwrap();
        let sys = system_on_subspaces(&q, 3, 2, &[l1, l2], Exec::default()).unwrap();
        assert_eq!(sys.dim(), 4);
        assert!(sys.verify(&q));
    }

    #[test]
    fn line_through_two_points() {
        let f = PrimeField::default();
        let samples = vec![pt(&f, &[1, 0, 0]), pt(&f, &[0, 1, 0])];
        let sys = system_on_curve(&f, 2, 1, &samples, 1, 0, Exec::default()).unwrap();
        assert_eq!(sys.dim(), 1);
        assert!(sys.provenance().saturated);
    }

    #[test]
    fn unsaturated_curve_flag() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples: Vec<_> = (0..5).map(|_| random_point(&f, 3, &mut rng)).collect();
        let sys = system_on_curve(&f, 3, 3, &samples, 1, 10, Exec::default()).unwrap();
        assert!(!sys.provenance().saturated);
    }

    #[test]
    fn saturation_finds_the_twisted_cubic_quadrics() {
        let f = PrimeField::default();
        // quadrics through the twisted cubic (s³, s²t, st², t³): a net
        let sys = saturate(&f, 3, 2, DEFAULT_MARGIN, Exec::default(), |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            let t: u64 = f.sample(&mut rng);
            let point = vec![1, t, f.mul(&t, &t), f.pow(&t, 3)];
            Ok(VanishingCondition::PointMultiplicity { point, multiplicity: 1 })
        })
        .unwrap();
        assert_eq!(sys.dim(), 3);
        assert!(sys.provenance().saturated);
        assert!(sys.verify(&f));
    }

    #[test]
    fn intersections() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = system_fat_points(&f, 3, 2, &[(random_point(&f, 3, &mut rng), 1)]).unwrap();
        assert!(intersect_systems(&f, &a, &a).unwrap().same_span(&a));
        let x0 = LinearSystem::from_forms(&f, &[Form::variable(&f, 3, 0)]).unwrap();
        let x1 = LinearSystem::from_forms(&f, &[Form::variable(&f, 3, 1)]).unwrap();
        assert!(intersect_systems(&f, &x0, &x1).unwrap().is_empty());
        assert!(intersect_systems(&f, &a, &x0).is_err());
    }

    #[test]
    fn veronese_relation() {
        let q = Rationals;
        let map = vec![Form::monomial(&q, &[2, 0]), Form::monomial(&q, &[1, 1]), Form::monomial(&q, &[0, 2])];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rel = find_relations(&q, &map, 2, DEFAULT_MARGIN, &mut rng, Exec::default()).unwrap();
        assert_eq!(rel.dim(), 1);
        let expected = Form::monomial(&q, &[1, 0, 1]).sub(&q, &Form::monomial(&q, &[0, 2, 0])).unwrap();
        assert!(rel.contains(&q, &expected));
        assert!(rel.verify(&q));
    }

    #[test]
    fn generic_linear_map_has_no_relations() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let map: Vec<_> = (0..4).map(|_| Form::linear((0..4).map(|_| f.sample(&mut rng)).collect())).collect();
        let rel = find_relations(&f, &map, 1, DEFAULT_MARGIN, &mut rng, Exec::default()).unwrap();
        assert!(rel.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cons: Vec<_> = (0..3).map(|_| (random_point(&f, 2, &mut rng), 1)).collect();
        let sys = system_fat_points(&f, 2, 2, &cons).unwrap();
        let json = serde_json::to_string(&sys.to_json(&f)).unwrap();
        let back = LinearSystem::from_json(&f, &serde_json::from_str(&json).unwrap()).unwrap();
        assert!(back.same_span(&sys));
        assert!(back.verify(&f));
    }
}
