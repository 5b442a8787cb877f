use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::Form;
use crate::linsys::LinearSystem;
use crate::matrix::{rref_kernel, Matrix};
use crate::proj::{random_point, ProjPoint};
use crate::rng::SeedStream;

use super::kumar::dehomogenize;
use super::map::{PointMap, RationalMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeddleReport {
    /// The projection from the centre, written against i_Ω, spans Λ.
    pub projection_spans_lambda: bool,
    pub discriminant_degree: usize,
    pub discriminant_nonzero: bool,
    pub lines: usize,
    /// Lines on which the discriminant restricts to a squarefree quartic.
    pub squarefree_lines: usize,
    pub jacobian_nonzero: bool,
    /// The Jacobian quartic is singular at the six base points.
    pub jacobian_singular_at_points: bool,
    pub ramification_points: usize,
    pub ramification_points_on_branch: usize,
}

impl WeddleReport {
    pub fn passed(&self) -> bool {
        self.projection_spans_lambda
            && self.discriminant_degree == 4
            && self.discriminant_nonzero
            && self.squarefree_lines == self.lines
            && self.jacobian_nonzero
            && self.jacobian_singular_at_points
            && self.ramification_points > 0
            && self.ramification_points_on_branch == self.ramification_points
    }
}

/// ½ Σ H_ij x_i x_j for the Hessian of `s` at `c`.
fn half_hessian<F: Field>(field: &F, s: &Form<F>, c: &[F::Elem]) -> Result<Form<F>> {
    let n = s.nvars();
    let half = field.inv(&field.from_i64(2)).ok_or_else(|| Error::Unsupported("characteristic 2".into()))?;
    let mut q = Form::zero(field, n, 2);
    for i in 0..n {
        let di = s.partial_derivative(field, i);
        for j in i..n {
            let h = di.partial_derivative(field, j).evaluate(field, c)?;
            let mut exps = vec![0u32; n];
            exps[i] += 1;
            exps[j] += 1;
            let coeff = if i == j { field.mul(&h, &half) } else { h };
            q = q.add(field, &Form::monomial(field, &exps).scale(field, &coeff))?;
        }
    }
    Ok(q)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(Vec::new(), false)];
    }
    let mut out = Vec::new();
    for (p, odd) in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting at pos moves n-1 past (n-1-pos) entries
            out.push((q, odd ^ ((n - 1 - pos) % 2 == 1)));
        }
    }
    out
}

/// det(∂f_i/∂x_j) by expansion over permutations.
fn jacobian_determinant<F: Field>(field: &F, map: &RationalMap<F>) -> Result<Form<F>> {
    let comps = map.components();
    let n = comps[0].nvars();
    if comps.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: comps.len() });
    }
    let d: Vec<Vec<Form<F>>> = comps.iter().map(|f| (0..n).map(|j| f.partial_derivative(field, j)).collect()).collect();
    let mut det = Form::zero(field, n, n * (comps[0].degree() - 1));
    for (perm, odd) in permutations(n) {
        let mut term = Form::constant(field, n, field.one());
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(field, &d[i][j])?;
        }
        det = if odd { det.sub(field, &term)? } else { det.add(field, &term)? };
    }
    Ok(det)
}

/// Restriction of `f` to the line through `a` and `b`, as a binary form.
fn on_line<F: Field>(field: &F, f: &Form<F>, a: &[F::Elem], b: &[F::Elem]) -> Result<Form<F>> {
    let line: Vec<Form<F>> = a.iter().zip(b).map(|(x, y)| Form::linear(vec![x.clone(), y.clone()])).collect();
    f.compose(field, &line)
}

/// Branch locus of the projection of the cubic `s ⊂ P^4` from the point
/// `i_Ω(e0)`: the discriminant of the residual quadric along the lines
/// through the centre, as a quartic on P^3. Its reducedness is tested on
/// random lines; the ramification side is the Jacobian quartic of the
/// projection composed with i_Ω, which must be singular at e0..e5 and map
/// onto the discriminant. Root finding needs a finite field.
#[allow(clippy::too_many_arguments)]
pub fn weddle_check<F: Field>(
    field: &F,
    i_omega: &RationalMap<F>,
    s: &Form<F>,
    e0: &ProjPoint<F>,
    e: &[ProjPoint<F>],
    lambda: &LinearSystem<F>,
    lines: usize,
    seed: u64,
) -> Result<WeddleReport> {
    if s.nvars() != 5 || s.degree() != 3 {
        return Err(Error::Unsupported("branch-locus check needs a cubic threefold".into()));
    }
    let stream = SeedStream::new(seed).derive("weddle");
    let c = i_omega.eval(field, e0.coords()).ok_or_else(|| Error::Degenerate("i_Ω undefined at e0".into()))?;
    if !field.is_zero(&s.evaluate(field, c.coords())?) {
        return Err(Error::Verification("centre is not on the cubic".into()));
    }

    // y = C·z with ker C = ⟨c⟩; v(y) = B·y with C·B = I
    let cm = Matrix::from_rows(vec![c.coords().to_vec()], 5)?;
    let (_, cker) = rref_kernel(field, &cm);
    let lead = c.coords().iter().position(|x| !field.is_zero(x)).expect("nonzero");
    let mut rows = cker.clone();
    rows.push((0..5).map(|i| if i == lead { field.one() } else { field.zero() }).collect());
    let inv = Matrix::from_rows(rows, 5)?.inverse(field)?;
    let b = Matrix::from_fn(5, 4, |r, col| inv.get(r, col).clone());

    let kappa = i_omega.post_linear(field, &cker)?;
    let projection_spans_lambda = LinearSystem::from_forms(field, kappa.components())?.same_span(lambda);

    let grad: Vec<F::Elem> = (0..5)
        .map(|i| s.partial_derivative(field, i).evaluate(field, c.coords()))
        .collect::<Result<_>>()?;
    let a_form = Form::linear(grad).pullback_linear(field, &b)?;
    let b_form = half_hessian(field, s, c.coords())?.pullback_linear(field, &b)?;
    let c_form = s.pullback_linear(field, &b)?;
    let four = field.from_i64(4);
    let delta = b_form.mul(field, &b_form)?.sub(field, &a_form.mul(field, &c_form)?.scale(field, &four))?;

    let mut rng = stream.stream("lines");
    let mut squarefree_lines = 0;
    for _ in 0..lines {
        let p = random_point(field, 3, &mut rng);
        let q = random_point(field, 3, &mut rng);
        let r = dehomogenize(field, &on_line(field, &delta, p.coords(), q.coords())?);
        if r.degree() == Some(4) && r.is_squarefree(field) {
            squarefree_lines += 1;
        }
    }

    let jac = jacobian_determinant(field, &kappa)?;
    let jacobian_nonzero = !jac.is_zero(field);
    let mut singular = true;
    for p in std::iter::once(e0).chain(e) {
        singular &= field.is_zero(&jac.evaluate(field, p.coords())?);
        for i in 0..4 {
            singular &= field.is_zero(&jac.partial_derivative(field, i).evaluate(field, p.coords())?);
        }
    }

    let mut rng = stream.stream("ramification");
    let (mut ramification_points, mut on_branch) = (0, 0);
    for _ in 0..lines {
        let p = random_point(field, 3, &mut rng);
        let q = random_point(field, 3, &mut rng);
        let r = dehomogenize(field, &on_line(field, &jac, p.coords(), q.coords())?);
        if r.is_zero() {
            continue;
        }
        for t in r.roots(field)? {
            let x: Vec<F::Elem> = p.coords().iter().zip(q.coords()).map(|(u, v)| field.add(u, &field.mul(&t, v))).collect();
            let Some(y) = kappa.eval(field, &x) else { continue };
            ramification_points += 1;
            if field.is_zero(&delta.evaluate(field, y.coords())?) {
                on_branch += 1;
            }
        }
    }

    Ok(WeddleReport {
        projection_spans_lambda,
        discriminant_degree: delta.degree(),
        discriminant_nonzero: !delta.is_zero(field),
        lines,
        squarefree_lines,
        jacobian_nonzero,
        jacobian_singular_at_points: singular,
        ramification_points,
        ramification_points_on_branch: on_branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        let odd = perms.iter().filter(|(_, o)| *o).count();
        assert_eq!(odd, 3);
        for (p, o) in &perms {
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(*o, inversions % 2 == 1);
        }
        assert_eq!(permutations(4).len(), 24);
    }
}
