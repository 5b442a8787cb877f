use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::Form;
use crate::linsys::LinearSystem;
use crate::matrix::RowEchelon;
use crate::proj::{random_point, ProjPoint};
use crate::rnc::rnc_through_points;

/// Anything that can be evaluated pointwise as a map P^n ⇢ P^m.
pub trait PointMap<F: Field>: Sync {
    fn source_ambient(&self) -> usize;
    fn target_ambient(&self) -> usize;
    /// Raw image coordinates; the zero vector off the domain.
    fn eval_coords(&self, field: &F, p: &[F::Elem]) -> Vec<F::Elem>;

    fn eval(&self, field: &F, p: &[F::Elem]) -> Option<ProjPoint<F>> {
        ProjPoint::new(field, self.eval_coords(field, p)).ok()
    }
}

/// A tuple of forms of one degree in the same variables.
#[derive(Clone, Debug)]
pub struct RationalMap<F: Field> {
    components: Vec<Form<F>>,
}

impl<F: Field> RationalMap<F> {
    pub fn new(components: Vec<Form<F>>) -> Result<Self> {
        let first = components.first().ok_or(Error::EmptyInput("map with no components"))?;
        let (n, d) = (first.nvars(), first.degree());
        if components.iter().any(|c| c.nvars() != n || c.degree() != d) {
            return Err(Error::Degenerate("components of different shapes".into()));
        }
        Ok(RationalMap { components })
    }

    /// The map given by the basis of a linear system.
    pub fn from_system(field: &F, system: &LinearSystem<F>) -> Result<Self> {
        let forms = system
            .forms()
            .into_iter()
            .map(|f| Form::from_coeffs(f.nvars(), f.degree(), field.primitive(f.coeffs())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(forms)
    }

    pub fn components(&self) -> &[Form<F>] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.components[0].degree()
    }

    pub fn is_independent(&self, field: &F) -> bool {
        let rows: Vec<Vec<F::Elem>> = self.components.iter().map(|c| c.coeffs().to_vec()).collect();
        RowEchelon::from_rows(field, rows[0].len(), &rows).rank() == rows.len()
    }

    /// `self ∘ inner`, expanded symbolically.
    pub fn compose(&self, field: &F, inner: &RationalMap<F>) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| c.compose(field, &inner.components))
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }

    /// `m · self` for a matrix with `target_ambient + 1` columns.
    pub fn post_linear(&self, field: &F, m: &[Vec<F::Elem>]) -> Result<Self> {
        let components = m
            .iter()
            .map(|row| {
                if row.len() != self.components.len() {
                    return Err(Error::DimensionMismatch { expected: self.components.len(), found: row.len() });
                }
                let mut acc = Form::zero(field, self.components[0].nvars(), self.degree());
                for (c, f) in row.iter().zip(&self.components) {
                    acc = acc.add(field, &f.scale(field, c))?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }
}

impl<F: Field> PointMap<F> for RationalMap<F> {
    fn source_ambient(&self) -> usize {
        self.components[0].ambient()
    }

    fn target_ambient(&self) -> usize {
        self.components.len() - 1
    }

    fn eval_coords(&self, field: &F, p: &[F::Elem]) -> Vec<F::Elem> {
        self.components.iter().map(|c| c.evaluate(field, p).expect("point in the source")).collect()
    }
}

/// `second ∘ first`, evaluated pointwise without expanding.
#[derive(Clone, Debug)]
pub struct Composed<F: Field> {
    pub first: RationalMap<F>,
    pub second: RationalMap<F>,
}

impl<F: Field> PointMap<F> for Composed<F> {
    fn source_ambient(&self) -> usize {
        self.first.source_ambient()
    }

    fn target_ambient(&self) -> usize {
        self.second.target_ambient()
    }

    fn eval_coords(&self, field: &F, p: &[F::Elem]) -> Vec<F::Elem> {
        let mid = self.first.eval_coords(field, p);
        if mid.iter().all(|x| field.is_zero(x)) {
            return vec![field.zero(); self.target_ambient() + 1];
        }
        self.second.eval_coords(field, &mid)
    }
}

/// Sample `curves` rational normal curves through `base` (each through one
/// extra random point) and check that `map` is constant on `per_curve`
/// parameters of each. Returns the image of each curve, or `None` for a
/// curve that is not contracted.
pub fn contracts_rncs<F: Field, M: PointMap<F>, R: Rng + ?Sized>(
    field: &F,
    map: &M,
    base: &[ProjPoint<F>],
    curves: usize,
    per_curve: usize,
    rng: &mut R,
) -> Result<Vec<Option<ProjPoint<F>>>> {
    let n = map.source_ambient();
    let mut out = Vec::with_capacity(curves);
    for _ in 0..curves {
        let mut through = base.to_vec();
        through.push(random_point(field, n, rng));
        let rnc = rnc_through_points(field, &through)?;
        let mut image: Option<ProjPoint<F>> = None;
        let mut constant = true;
        let mut seen = 0;
        while seen < per_curve {
            let (_, p) = rnc.random_point(field, rng);
            let Some(q) = map.eval(field, p.coords()) else { continue };
            seen += 1;
            match &image {
                None => image = Some(q),
                Some(i) if *i != q => constant = false,
                _ => {}
            }
        }
        out.push(if constant { image } else { None });
    }
    Ok(out)
}
