use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::Form;
use crate::linsys::{system_fat_points, LinearSystem};
use crate::poly::UniPoly;
use crate::proj::ProjPoint;

use super::map::RationalMap;

fn genus_of<F: Field>(e: &[ProjPoint<F>]) -> Result<usize> {
    let n = e.first().ok_or(Error::EmptyInput("no points"))?.ambient();
    if n < 3 || n % 2 == 0 {
        return Err(Error::Config(format!("Kumar systems live on odd-dimensional spaces, got P^{n}")));
    }
    Ok(n.div_ceil(2) + 1)
}

/// Forms of degree g-1 on P^{2g-3} with multiplicity g-2 at the 2g-1
/// points `e`.
pub fn kumar_omega<F: Field>(field: &F, e: &[ProjPoint<F>]) -> Result<(LinearSystem<F>, RationalMap<F>)> {
    let g = genus_of(e)?;
    if e.len() != 2 * g - 1 {
        return Err(Error::DimensionMismatch { expected: 2 * g - 1, found: e.len() });
    }
    let fat: Vec<(ProjPoint<F>, usize)> = e.iter().map(|p| (p.clone(), g - 2)).collect();
    let system = system_fat_points(field, 2 * g - 3, g - 1, &fat)?;
    if system.is_empty() {
        return Err(Error::Degenerate("Ω is empty".into()));
    }
    let map = RationalMap::from_system(field, &system)?;
    Ok((system, map))
}

/// Λ: the members of Ω that also have multiplicity g-2 at `e0`.
pub fn kumar_lambda<F: Field>(
    field: &F,
    e0: &ProjPoint<F>,
    e: &[ProjPoint<F>],
    omega: &LinearSystem<F>,
) -> Result<(LinearSystem<F>, RationalMap<F>)> {
    let g = genus_of(e)?;
    let mut fat: Vec<(ProjPoint<F>, usize)> = vec![(e0.clone(), g - 2)];
    fat.extend(e.iter().map(|p| (p.clone(), g - 2)));
    let system = system_fat_points(field, 2 * g - 3, g - 1, &fat)?;
    if !system.is_subsystem_of(field, omega) {
        return Err(Error::Verification("Λ is not contained in Ω".into()));
    }
    if system.is_empty() {
        return Err(Error::Degenerate("Λ is empty".into()));
    }
    let map = RationalMap::from_system(field, &system)?;
    Ok((system, map))
}

/// How a line through the centre meets a cubic hypersurface through it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineFiber {
    /// The line is not contained in the tangent cone at the centre.
    pub transverse: bool,
    /// The residual binary quadric has nonzero discriminant.
    pub two_residual_points: bool,
}

impl LineFiber {
    pub fn ok(&self) -> bool {
        self.transverse && self.two_residual_points
    }
}

/// Restrict the cubic `s` to the lines through `center` and each direction:
/// S(σc + τv) = τ·Q(σ, τ) with Q a binary quadric. The line meets the
/// cubic in exactly two further points (over the closure) when Q(1, 0) ≠ 0
/// and disc Q ≠ 0.
pub fn segre_line_check<F: Field>(
    field: &F,
    s: &Form<F>,
    center: &ProjPoint<F>,
    directions: &[ProjPoint<F>],
) -> Result<Vec<LineFiber>> {
    if s.degree() != 3 {
        return Err(Error::Degenerate("expected a cubic".into()));
    }
    if !field.is_zero(&s.evaluate(field, center.coords())?) {
        return Err(Error::Verification("centre is not on the cubic".into()));
    }
    directions
        .iter()
        .map(|v| {
            let line: Vec<Form<F>> = center
                .coords()
                .iter()
                .zip(v.coords())
                .map(|(c, w)| Form::linear(vec![c.clone(), w.clone()]))
                .collect();
            let b = s.compose(field, &line)?;
            // coefficient order s^3, s^2 t, s t^2, t^3
            let c = b.coeffs();
            let (qa, qb, qc) = (&c[1], &c[2], &c[3]);
            let transverse = !field.is_zero(qa);
            let four = field.from_i64(4);
            let disc = field.sub(&field.mul(qb, qb), &field.mul(&four, &field.mul(qa, qc)));
            Ok(LineFiber { transverse, two_residual_points: !field.is_zero(&disc) })
        })
        .collect()
}

/// Dehomogenized binary form t ↦ b(1, t).
pub(crate) fn dehomogenize<F: Field>(field: &F, b: &Form<F>) -> UniPoly<F> {
    // coefficients come as s^d, s^{d-1}t, ..., t^d
    UniPoly::new(field, b.coeffs().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::linsys::{find_relations, DEFAULT_MARGIN};
    use crate::par::Exec;
    use crate::proj::random_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn genus_three_dimensions_and_the_segre_cubic() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let e: Vec<_> = (0..5).map(|_| random_point(&f, 3, &mut rng)).collect();
        let e0 = random_point(&f, 3, &mut rng);
        let (omega, i_omega) = kumar_omega(&f, &e).unwrap();
        assert_eq!(omega.dim(), 5);
        let (lambda, _) = kumar_lambda(&f, &e0, &e, &omega).unwrap();
        assert_eq!(lambda.dim(), 4);
        let cubics = find_relations(&f, i_omega.components(), 3, DEFAULT_MARGIN, &mut rng, Exec::default()).unwrap();
        assert_eq!(cubics.dim(), 1);
        let quadrics = find_relations(&f, i_omega.components(), 2, DEFAULT_MARGIN, &mut rng, Exec::default()).unwrap();
        assert_eq!(quadrics.dim(), 0);
        let s = &cubics.forms()[0];
        use crate::modulimaps::map::PointMap;
        let c = i_omega.eval(&f, e0.coords()).unwrap();
        let dirs: Vec<_> = (0..20).map(|_| random_point(&f, 4, &mut rng)).collect();
        let fibers = segre_line_check(&f, s, &c, &dirs).unwrap();
        assert!(fibers.iter().all(LineFiber::ok));
    }

    #[test]
    fn dehomogenize_reads_t_powers() {
        let f = PrimeField::default();
        let b = Form::from_coeffs(2, 2, vec![1, 2, 3]).unwrap();
        assert_eq!(dehomogenize(&f, &b).coeffs(), &[1, 2, 3]);
    }
}
