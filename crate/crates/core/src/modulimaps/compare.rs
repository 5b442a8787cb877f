use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{rref_kernel, Matrix};
use crate::par::Exec;
use crate::proj::ProjPoint;

use super::map::PointMap;

/// Samples beyond the (t+1)² unknowns of the target transformation.
pub const COMPARE_MARGIN: usize = 20;

pub fn required_samples(target_ambient: usize) -> usize {
    (target_ambient + 1).pow(2) + COMPARE_MARGIN
}

/// Look for an invertible M with f(x) ∥ M·g(x) at every sample. Samples
/// where either map is undefined are skipped; too few usable samples is an
/// error. Returns `None` when no such M exists or it is not unique up to
/// scale.
pub fn compare_maps_up_to_pgl<F, A, B>(
    field: &F,
    f: &A,
    g: &B,
    samples: &[ProjPoint<F>],
    exec: Exec,
) -> Result<Option<Matrix<F>>>
where
    F: Field,
    A: PointMap<F>,
    B: PointMap<F>,
{
    let t = f.target_ambient();
    if g.target_ambient() != t {
        return Err(Error::DimensionMismatch { expected: t + 1, found: g.target_ambient() + 1 });
    }
    if f.source_ambient() != g.source_ambient() {
        return Err(Error::DimensionMismatch { expected: f.source_ambient() + 1, found: g.source_ambient() + 1 });
    }
    let w = t + 1;
    let values = exec.map(samples, |x| (f.eval(field, x.coords()), g.eval(field, x.coords())));
    let usable: Vec<(ProjPoint<F>, ProjPoint<F>)> =
        values.into_iter().filter_map(|(a, b)| Some((a?, b?))).collect();
    if usable.len() < required_samples(t) {
        return Err(Error::Degenerate(format!(
            "{} usable samples, need {}",
            usable.len(),
            required_samples(t)
        )));
    }
    // a_r (M b)_s - a_s (M b)_r = 0 with a_r the leading nonzero entry
    let mut rows = Vec::new();
    for (a, b) in &usable {
        let (a, b) = (a.coords(), b.coords());
        let r = a.iter().position(|x| !field.is_zero(x)).expect("nonzero point");
        for s in (0..w).filter(|&s| s != r) {
            let mut row = vec![field.zero(); w * w];
            for j in 0..w {
                row[s * w + j] = field.mul(&a[r], &b[j]);
                row[r * w + j] = field.neg(&field.mul(&a[s], &b[j]));
            }
            rows.push(row);
        }
    }
    let system = Matrix::from_rows(rows, w * w)?;
    let (_, kernel) = rref_kernel(field, &system);
    if kernel.len() != 1 {
        return Ok(None);
    }
    let m = Matrix::from_fn(w, w, |r, c| kernel[0][r * w + c].clone());
    if m.rank(field) < w {
        return Ok(None);
    }
    Ok(Some(m))
}
