use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::{binomial, MonomialBasis};
use crate::hyperelliptic::{embed, CurvePoint, Instance};
use crate::linsys::{fat_point_rows, intersect_systems, saturate, LinearSystem, VanishingCondition};
use crate::matrix::{dot, rref_kernel, Matrix};
use crate::par::Exec;
use crate::proj::{span, ProjPoint};
use crate::rng::SeedStream;
use crate::rnc::{projectively_equivalent, rnc_through_points, Gamma, SpanChart};

use super::forgetful::subsets;
use super::map::{PointMap, RationalMap};

fn curve_sample<F: Field>(field: &F, inst: &Instance<F>, rng: &mut impl rand::Rng) -> Result<ProjPoint<F>> {
    let avoid: Vec<&F::Elem> = inst.d.iter().chain(&inst.n).filter_map(CurvePoint::x).collect();
    loop {
        let p = inst.curve.random_point(field, rng);
        if p.x().is_some_and(|x| avoid.contains(&x)) {
            continue;
        }
        return embed(field, &inst.curve, &inst.embedding, &p);
    }
}

fn require_saturated<F: Field>(system: LinearSystem<F>, what: &str) -> Result<LinearSystem<F>> {
    if system.provenance().saturated {
        Ok(system)
    } else {
        Err(Error::Unsaturated(format!(
            "{what}: rank still growing after {} samples",
            system.provenance().samples_used
        )))
    }
}

/// Degree-g forms on P^{3g-2} with multiplicity g-1 along the embedded
/// curve, imposed at samples until the rank is stable for `margin` more.
pub fn theta_system<F: Field>(field: &F, inst: &Instance<F>, margin: usize, seed: u64, exec: Exec) -> Result<LinearSystem<F>> {
    let g = inst.genus();
    let stream = SeedStream::new(seed).derive("theta");
    let system = saturate(field, 3 * g - 2, g, margin, exec, |i| {
        let mut rng = stream.indexed("sample", i as u64);
        let p = curve_sample(field, inst, &mut rng)?;
        Ok(VanishingCondition::PointMultiplicity { point: p.into_coords(), multiplicity: g - 1 })
    })?;
    require_saturated(system.with_seed(seed), "theta system")
}

/// Degree-g forms vanishing on sampled spans of g-1 curve points.
pub fn secant_theta_system<F: Field>(
    field: &F,
    inst: &Instance<F>,
    margin: usize,
    seed: u64,
    exec: Exec,
) -> Result<LinearSystem<F>> {
    let g = inst.genus();
    let stream = SeedStream::new(seed).derive("secant");
    let system = saturate(field, 3 * g - 2, g, margin, exec, |i| {
        let mut rng = stream.indexed("sample", i as u64);
        let pts = (0..g - 1).map(|_| curve_sample(field, inst, &mut rng)).collect::<Result<Vec<_>>>()?;
        Ok(VanishingCondition::Subspace { subspace: span(field, &pts)? })
    })?;
    require_saturated(system.with_seed(seed), "secant system")
}

/// A system pulled back to the span of N.
#[derive(Clone, Debug)]
pub struct RestrictedSystem<F: Field> {
    pub system: LinearSystem<F>,
    pub map: RationalMap<F>,
}

/// Pull the theta system back along the chart of the span of N and check
/// that every member vanishes on the spans of g-1 points of N and with
/// multiplicity g-2 at the given points of Γ (local coordinates).
pub fn restrict_to_pn<F: Field>(
    field: &F,
    theta: &LinearSystem<F>,
    chart: &SpanChart<F>,
    n_points: &[ProjPoint<F>],
    gamma_points: &[ProjPoint<F>],
) -> Result<RestrictedSystem<F>> {
    let param = chart.parametrization(field);
    let pulled = theta.forms().iter().map(|f| f.pullback_linear(field, &param)).collect::<Result<Vec<_>>>()?;
    let system = LinearSystem::from_forms(field, &pulled)?;
    if system.is_empty() {
        return Err(Error::Degenerate("theta system restricts to zero".into()));
    }
    let forms = system.forms();
    let g = theta.degree();
    for s in subsets(n_points.len(), g - 1) {
        let sub = span(field, &s.iter().map(|&i| n_points[i].clone()).collect::<Vec<_>>())?;
        let p = sub.parametrization(field);
        for f in &forms {
            if !f.pullback_linear(field, &p)?.is_zero(field) {
                return Err(Error::Verification("restricted form does not vanish on a span of N".into()));
            }
        }
    }
    let basis = MonomialBasis::new(chart.dim() + 1, g);
    for q in gamma_points {
        for row in fat_point_rows(field, &basis, q.coords(), g - 2) {
            if forms.iter().any(|f| !field.is_zero(&dot(field, &row, f.coeffs()))) {
                return Err(Error::Verification("restricted form has too low a multiplicity along Γ".into()));
            }
        }
    }
    let map = RationalMap::from_system(field, &system)?;
    Ok(RestrictedSystem { system, map })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OsculatingReport {
    /// All sampled points of Γ have the same image w under h_N.
    pub contracted_to_point: bool,
    pub gamma_samples: usize,
    pub pullback_dim: usize,
    pub ideal_dim: usize,
    /// Pullback of the hyperplanes through w equals I(Γ) inside the h_N system.
    pub pullback_equals_ideal: bool,
    /// Same comparison against the restricted theta system, when given.
    pub restricted_equals_ideal: Option<bool>,
    /// For random x: h_N(x) = w exactly when N sits on the curve through N
    /// and x as it sits on Γ, up to PGL(2).
    pub fiber_profiles_consistent: bool,
}

impl OsculatingReport {
    pub fn passed(&self) -> bool {
        self.contracted_to_point
            && self.pullback_equals_ideal
            && self.restricted_equals_ideal != Some(false)
            && self.fiber_profiles_consistent
    }
}

/// The g = 3 identity: pulling back the hyperplanes through w = h_N(Γ)
/// gives I(Γ) inside the h_N system.
pub fn osculating_center_check<F: Field>(
    field: &F,
    h_system: &LinearSystem<F>,
    h_map: &RationalMap<F>,
    gamma: &Gamma<F>,
    restricted: Option<&LinearSystem<F>>,
    margin: usize,
    seed: u64,
    exec: Exec,
) -> Result<OsculatingReport> {
    let g = gamma.report.genus;
    if g != 3 {
        return Err(Error::Unsupported(format!("osculating comparison at genus {g}")));
    }
    let stream = SeedStream::new(seed).derive("osculating");
    let images: Vec<Option<ProjPoint<F>>> = exec.map(&gamma.samples, |(_, q)| h_map.eval(field, q.coords()));
    let w = images.first().cloned().flatten().ok_or_else(|| Error::Verification("h_N undefined on Γ".into()))?;
    let contracted_to_point = images.iter().all(|i| i.as_ref() == Some(&w));

    // linear forms through w, pulled back along h_N
    let t = h_map.target_ambient();
    let wm = Matrix::from_rows(vec![w.coords().to_vec()], t + 1)?;
    let (_, through_w) = rref_kernel(field, &wm);
    let pulled = h_map.post_linear(field, &through_w)?;
    let pullback = LinearSystem::from_forms(field, pulled.components())?;

    let n = gamma.chart.dim();
    let on_gamma = saturate(field, n, h_system.degree(), margin, exec, |i| {
        let mut rng = stream.indexed("gamma", i as u64);
        let (_, p) = gamma.curve.random_point(field, &mut rng);
        Ok(VanishingCondition::PointMultiplicity { point: p.into_coords(), multiplicity: g - 2 })
    })?;
    let ideal = intersect_systems(field, h_system, &on_gamma)?;
    let pullback_equals_ideal = pullback.same_span(&ideal);
    let restricted_equals_ideal = restricted.map(|r| r.same_span(&ideal));

    let base = &gamma.curve.base_params()[..gamma.n_points.len()];
    let mut fiber_profiles_consistent = true;
    let mut rng = stream.stream("fibers");
    for trial in 0..6 {
        let x = if trial == 0 {
            gamma.samples[0].1.clone()
        } else {
            crate::proj::random_point(field, n, &mut rng)
        };
        let mut through = gamma.n_points.clone();
        through.push(x.clone());
        let rnc = rnc_through_points(field, &through)?;
        let same_profile = projectively_equivalent(field, &rnc.base_params()[..through.len() - 1], base);
        let same_image = h_map.eval(field, x.coords()).as_ref() == Some(&w);
        if same_profile != same_image || (trial == 0 && !same_image) {
            fiber_profiles_consistent = false;
        }
    }

    Ok(OsculatingReport {
        contracted_to_point,
        gamma_samples: on_gamma.provenance().samples_used,
        pullback_dim: pullback.dim(),
        ideal_dim: ideal.dim(),
        pullback_equals_ideal,
        restricted_equals_ideal,
        fiber_profiles_consistent,
    })
}

/// Projective dimension of the centre P_c: Σ_{i=0}^{g-2} C(g, i) - 1.
pub fn pc_dimension(g: usize) -> Result<usize> {
    if g < 3 {
        return Err(Error::Config(format!("genus {g} below 3")));
    }
    Ok((0..=g - 2).map(|i| binomial(g, i)).sum::<usize>() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_dimensions() {
        assert_eq!(pc_dimension(3).unwrap(), 3);
        assert_eq!(pc_dimension(4).unwrap(), 10);
        assert_eq!(pc_dimension(5).unwrap(), 25);
        assert_eq!(pc_dimension(6).unwrap(), 56);
        assert!(pc_dimension(2).is_err());
    }
}
