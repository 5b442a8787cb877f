use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hyperelliptic::{embed, linear_system_dim, CurvePoint, Divisor, Instance};
use crate::proj::{intersect_subspaces, span, ProjPoint, ProjSubspace};
use crate::rng::SeedStream;
use crate::rnc::{in_span, secant_meet, Gamma};

use super::forgetful::subsets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Empty,
    OnGamma,
    OnSecantOfN,
    /// A line through two points of Γ.
    GammaSecant,
    New,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub linear_system_dim: i64,
    pub intersection_dim: Option<usize>,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseLocusReport {
    pub genus: usize,
    pub family: String,
    pub entries: Vec<ScanEntry>,
}

impl BaseLocusReport {
    pub fn expected(&self) -> Classification {
        if self.genus == 6 {
            Classification::GammaSecant
        } else {
            Classification::OnGamma
        }
    }

    pub fn passed(&self) -> bool {
        !self.entries.is_empty()
            && self.entries.iter().all(|e| {
                e.classification == self.expected()
                    && e.intersection_dim.map(|d| d as i64) == Some(e.linear_system_dim - 1)
            })
    }
}

/// A random affine point, off the Weierstrass points and with an
/// x-coordinate not in `avoid`; its x is appended to `avoid`.
fn fresh_point<F: Field, R: Rng + ?Sized>(field: &F, inst: &Instance<F>, avoid: &mut Vec<F::Elem>, rng: &mut R) -> CurvePoint<F> {
    loop {
        let p = inst.curve.random_point(field, rng);
        let x = p.x().expect("affine").clone();
        if !avoid.contains(&x) {
            avoid.push(x);
            return p;
        }
    }
}

fn initial_avoid<F: Field>(inst: &Instance<F>) -> Vec<F::Elem> {
    inst.d.iter().chain(&inst.n).filter_map(|p| p.x().cloned()).collect()
}

/// ⟨L⟩ ∩ P_N for an effective reduced divisor given by its points.
fn meet_with_pn<F: Field>(field: &F, inst: &Instance<F>, gamma: &Gamma<F>, points: &[CurvePoint<F>]) -> Result<(i64, Option<ProjSubspace<F>>)> {
    let embedded = points
        .iter()
        .map(|p| embed(field, &inst.curve, &inst.embedding, p))
        .collect::<Result<Vec<_>>>()?;
    let l = span(field, &embedded)?;
    let dim = linear_system_dim(field, &inst.curve, &Divisor::from_points(points))?;
    Ok((dim, intersect_subspaces(field, &l, gamma.chart.subspace())?))
}

fn local_point<F: Field>(field: &F, gamma: &Gamma<F>, v: &[F::Elem]) -> Result<ProjPoint<F>> {
    let p = ProjPoint::new(field, v.to_vec())?;
    gamma.chart.to_local(field, &p).ok_or_else(|| Error::Verification("point outside the span of N".into()))
}

fn classify_point<F: Field>(field: &F, gamma: &Gamma<F>, q: &ProjPoint<F>) -> Classification {
    if gamma.curve.contains_point(field, q).is_some() {
        return Classification::OnGamma;
    }
    let g = gamma.report.genus;
    let on_secant = subsets(gamma.n_points.len(), g - 1)
        .iter()
        .any(|s| in_span(field, &s.iter().map(|&i| gamma.n_points[i].clone()).collect::<Vec<_>>(), q));
    if on_secant {
        Classification::OnSecantOfN
    } else {
        Classification::New
    }
}

/// For each of `count` random divisors of the family attached to the genus
/// (h+q at g = 4, h+q+r at g = 5, 2h+r at g = 6, h the hyperelliptic
/// class), intersect the span of the embedded divisor with P_N and classify
/// what comes out.
pub fn extra_base_locus_scan<F: Field>(
    field: &F,
    inst: &Instance<F>,
    gamma: &Gamma<F>,
    count: usize,
    seed: u64,
) -> Result<BaseLocusReport> {
    let g = inst.genus();
    let (family, pairs, singles) = match g {
        4 => ("h+q", 1, 1),
        5 => ("h+q+r", 1, 2),
        6 => ("2h+r", 2, 1),
        _ => return Err(Error::Unsupported(format!("base-locus scan at genus {g}"))),
    };
    let stream = SeedStream::new(seed).derive("baselocus");
    let mut entries = Vec::with_capacity(count);
    for j in 0..count {
        let mut rng = stream.indexed("divisor", j as u64);
        let mut avoid = initial_avoid(inst);
        let mut points = Vec::new();
        let mut pair_points = Vec::new();
        for _ in 0..pairs {
            let p = fresh_point(field, inst, &mut avoid, &mut rng);
            points.push(inst.curve.involution(field, &p));
            points.push(p.clone());
            pair_points.push(p);
        }
        for _ in 0..singles {
            points.push(fresh_point(field, inst, &mut avoid, &mut rng));
        }
        let (linear_system_dim, meet) = meet_with_pn(field, inst, gamma, &points)?;
        let entry = match meet {
            None => ScanEntry { linear_system_dim, intersection_dim: None, classification: Classification::Empty },
            Some(m) => {
                let classification = match m.dim() {
                    0 => classify_point(field, gamma, &local_point(field, gamma, &m.basis()[0])?),
                    1 => {
                        let ends = pair_points
                            .iter()
                            .map(|p| secant_meet(field, inst, &gamma.chart, p))
                            .collect::<Result<Vec<_>>>()?;
                        let local_basis = m
                            .basis()
                            .iter()
                            .map(|v| local_point(field, gamma, v))
                            .collect::<Result<Vec<_>>>()?;
                        let line = span(field, &local_basis)?;
                        let on_line = ends.len() == 2 && ends[0] != ends[1] && ends.iter().all(|e| line.contains(field, e.coords()));
                        let on_gamma = ends.iter().all(|e| gamma.curve.contains_point(field, e).is_some());
                        if on_line && on_gamma {
                            Classification::GammaSecant
                        } else {
                            Classification::New
                        }
                    }
                    _ => Classification::New,
                };
                ScanEntry { linear_system_dim, intersection_dim: Some(m.dim()), classification }
            }
        };
        entries.push(entry);
    }
    Ok(BaseLocusReport { genus: g, family: family.into(), entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub genus: usize,
    pub trials: usize,
    /// h plus g-3 general points: the span meets P_N in a space of dimension
    /// dim|L| - 1.
    pub special_ok: usize,
    /// g-1 general points: the span misses P_N.
    pub general_empty: usize,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.special_ok == self.trials && self.general_empty == self.trials
    }
}

pub fn lemma_check<F: Field>(field: &F, inst: &Instance<F>, gamma: &Gamma<F>, trials: usize, seed: u64) -> Result<LemmaReport> {
    let g = inst.genus();
    let stream = SeedStream::new(seed).derive("lemma");
    let (mut special_ok, mut general_empty) = (0, 0);
    for j in 0..trials {
        let mut rng = stream.indexed("trial", j as u64);
        let mut avoid = initial_avoid(inst);
        let p = fresh_point(field, inst, &mut avoid, &mut rng);
        let mut special = vec![inst.curve.involution(field, &p), p];
        for _ in 0..g - 3 {
            special.push(fresh_point(field, inst, &mut avoid, &mut rng));
        }
        let (dim, meet) = meet_with_pn(field, inst, gamma, &special)?;
        if meet.map(|m| m.dim() as i64) == Some(dim - 1) {
            special_ok += 1;
        }
        let general: Vec<CurvePoint<F>> = (0..g - 1).map(|_| fresh_point(field, inst, &mut avoid, &mut rng)).collect();
        let (dim, meet) = meet_with_pn(field, inst, gamma, &general)?;
        if dim == 0 && meet.is_none() {
            general_empty += 1;
        }
    }
    Ok(LemmaReport { genus: g, trials, special_ok, general_empty })
}
