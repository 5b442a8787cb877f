use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::Form;
use crate::matrix::Matrix;
use crate::proj::{span, standard_frame, ProjPoint};

use super::map::{PointMap, RationalMap};

/// x_i ↦ Π_{j≠i} x_j on P^n.
pub fn standard_cremona<F: Field>(field: &F, nvars: usize) -> RationalMap<F> {
    let components = (0..nvars)
        .map(|i| {
            let exps: Vec<u32> = (0..nvars).map(|j| u32::from(j != i)).collect();
            Form::monomial(field, &exps)
        })
        .collect();
    RationalMap::new(components).expect("nonempty")
}

/// Products Π_{j≠i} ℓ_j of the rows of `m` (linear forms).
fn coordinate_products<F: Field>(field: &F, m: &Matrix<F>) -> Result<Vec<Form<F>>> {
    let n = m.rows();
    let linear: Vec<Form<F>> = (0..n).map(|r| Form::linear(m.row(r).to_vec())).collect();
    (0..n)
        .map(|i| {
            let mut acc = Form::constant(field, m.cols(), field.one());
            for (j, l) in linear.iter().enumerate() {
                if j != i {
                    acc = acc.mul(field, l)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// The Cremona inversion of P^n centred at a frame: `frame[..=n]` become
/// the coordinate points and `frame[n+1]` the unit point.
pub fn cremona_inversion<F: Field>(field: &F, frame: &[ProjPoint<F>]) -> Result<RationalMap<F>> {
    let a = standard_frame(field, frame)?;
    let inv = a.inverse(field)?;
    let products = coordinate_products(field, &inv)?;
    let normalized = RationalMap::new(products)?;
    normalized.post_linear(field, &a.to_rows())
}

/// τ_k ∘ Cr_k on P^{n}, n = |N| - 2, together with the images of the
/// hyperplanes spanned by all but two of the points (one of them N_k).
#[derive(Clone, Debug)]
pub struct TauCremona<F: Field> {
    pub k: usize,
    pub map: RationalMap<F>,
    /// `images[t]` is the image of the hyperplane missing N_k and N_t, in
    /// the order of t ≠ k.
    pub images: Vec<ProjPoint<F>>,
}

/// Normalize so that N ∖ {N_k} are the coordinate points and N_k the unit
/// point, invert, then project from (1, …, 1).
pub fn compose_tau_cremona<F: Field, R: Rng + ?Sized>(
    field: &F,
    n_points: &[ProjPoint<F>],
    k: usize,
    rng: &mut R,
) -> Result<TauCremona<F>> {
    let n = n_points.first().ok_or(Error::EmptyInput("no points"))?.ambient();
    if n_points.len() != n + 2 {
        return Err(Error::DimensionMismatch { expected: n + 2, found: n_points.len() });
    }
    if k >= n_points.len() {
        return Err(Error::Config(format!("k = {k} out of range")));
    }
    let order: Vec<usize> = (0..n_points.len()).filter(|&j| j != k).collect();
    let mut frame: Vec<ProjPoint<F>> = order.iter().map(|&j| n_points[j].clone()).collect();
    frame.push(n_points[k].clone());
    let a = standard_frame(field, &frame)?;
    let cr = coordinate_products(field, &a.inverse(field)?)?;
    let last = cr.len() - 1;
    let components = cr[..last].iter().map(|c| c.sub(field, &cr[last])).collect::<Result<Vec<_>>>()?;
    let map = RationalMap::new(components)?;

    let mut images = Vec::with_capacity(order.len());
    for (i, &t) in order.iter().enumerate() {
        let expected: Vec<F::Elem> = if i < last {
            (0..last).map(|j| if j == i { field.one() } else { field.zero() }).collect()
        } else {
            vec![field.neg(&field.one()); last]
        };
        let expected = ProjPoint::new(field, expected)?;
        let rest: Vec<ProjPoint<F>> =
            (0..n_points.len()).filter(|&j| j != k && j != t).map(|j| n_points[j].clone()).collect();
        let h = span(field, &rest)?;
        let param = h.parametrization(field);
        for _ in 0..3 {
            let u: Vec<F::Elem> = (0..param.cols()).map(|_| field.sample(rng)).collect();
            let x = param.mul_vec(field, &u)?;
            if let Some(img) = map.eval(field, &x) {
                if img != expected {
                    return Err(Error::Verification(format!("hyperplane {t} is not contracted to its frame point")));
                }
            }
        }
        images.push(expected);
    }
    Ok(TauCremona { k, map, images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::modulimaps::map::contracts_rncs;
    use crate::proj::random_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn plane_cremona_sends_conics_through_the_base_to_lines() {
        let q = Rationals;
        let cr = standard_cremona(&q, 3);
        // the conic xy + yz + zx = 0 through the three coordinate points
        let pts: Vec<Vec<_>> = [(1i64, 2i64), (2, 3), (-1, 4), (5, -2)]
            .iter()
            .map(|&(x, y)| {
                // solve xy + z(x + y) = 0 for z
                let (x, y) = (q.from_i64(x), q.from_i64(y));
                let z = q.neg(&q.div(&q.mul(&x, &y), &q.add(&x, &y)));
                vec![x, y, z]
            })
            .collect();
        let images: Vec<ProjPoint<Rationals>> = pts.iter().map(|p| cr.eval(&q, p).unwrap()).collect();
        // all images on the line x + y + z = 0
        for i in &images {
            let s = i.coords().iter().fold(q.zero(), |a, b| q.add(&a, b));
            assert!(q.is_zero(&s));
        }
    }

    #[test]
    fn inversion_is_involutive() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 2..5 {
            let frame: Vec<_> = (0..n + 2).map(|_| random_point(&f, n, &mut rng)).collect();
            let cr = cremona_inversion(&f, &frame).unwrap();
            assert_eq!(cr.degree(), n);
            for _ in 0..50 {
                let p = random_point(&f, n, &mut rng);
                let once = cr.eval(&f, p.coords()).unwrap();
                assert_eq!(cr.eval(&f, once.coords()).unwrap(), p);
            }
        }
    }

    #[test]
    fn cubo_cubic_vanishes_on_the_six_edges() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let frame: Vec<_> = (0..5).map(|_| random_point(&f, 3, &mut rng)).collect();
        let cr = cremona_inversion(&f, &frame).unwrap();
        for i in 0..4 {
            for j in i + 1..4 {
                let line = span(&f, &[frame[i].clone(), frame[j].clone()]).unwrap();
                let p = line.parametrization(&f);
                for _ in 0..5 {
                    let u = vec![f.sample(&mut rng), f.sample(&mut rng)];
                    let x = p.mul_vec(&f, &u).unwrap();
                    assert!(cr.eval(&f, &x).is_none());
                }
            }
        }
    }

    #[test]
    fn tau_cremona_contracts_curves_through_the_points() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pts: Vec<_> = (0..6).map(|_| random_point(&f, 4, &mut rng)).collect();
        let tc = compose_tau_cremona(&f, &pts, 2, &mut rng).unwrap();
        assert_eq!(tc.map.target_ambient(), 3);
        assert_eq!(tc.images.len(), 5);
        let images = contracts_rncs(&f, &tc.map, &pts, 10, 30, &mut rng).unwrap();
        assert!(images.iter().all(|i| i.is_some()));
        // a general line is not contracted
        let a = random_point(&f, 4, &mut rng);
        let b = random_point(&f, 4, &mut rng);
        let x = |s: u64| -> Vec<u64> { a.coords().iter().zip(b.coords()).map(|(u, v)| f.add(u, &f.mul(&s, v))).collect() };
        assert_ne!(tc.map.eval(&f, &x(3)), tc.map.eval(&f, &x(7)));
    }
}
