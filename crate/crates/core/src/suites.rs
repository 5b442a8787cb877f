//! Verification suites and the certificates they emit.
//!
//! A suite is a named bundle of checks run from a `SuiteConfig`; the output
//! is a deterministic JSON certificate (no timings, sorted maps) so that a
//! replay from the same seed and prime reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag, PrimeField, Rationals};
use crate::hyperelliptic::{
    embed, generate_instance, hyperplane_section, riemann_roch_basis, Instance,
};
use crate::linsys::{find_relations, DEFAULT_MARGIN};
use crate::matrix::{rref_kernel, Matrix};
use crate::modulimaps::{
    compare_maps_up_to_pgl, compose_tau_cremona, contracts_rncs, extra_base_locus_scan, forgetful_h_n,
    kumar_lambda, kumar_omega, lemma_check, osculating_center_check, pc_dimension, required_samples,
    restrict_to_pn, secant_theta_system, segre_line_check, theta_system, weddle_check, Composed, PointMap,
    RationalMap,
};
use crate::par::Exec;
use crate::proj::{random_point, rank_of, span, ProjPoint};
use crate::rng::SeedStream;
use crate::rnc::{gamma_curve, Gamma};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Rr,
    Embed,
    Gamma,
    Hn,
    Kumar,
    Theta3,
    Factor3,
    Baselocus4,
    Baselocus5,
    Baselocus6,
    StretchWeddle,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Rr,
        Suite::Embed,
        Suite::Gamma,
        Suite::Hn,
        Suite::Kumar,
        Suite::Theta3,
        Suite::Factor3,
        Suite::Baselocus4,
        Suite::Baselocus5,
        Suite::Baselocus6,
        Suite::StretchWeddle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rr => "rr",
            Suite::Embed => "embed",
            Suite::Gamma => "gamma",
            Suite::Hn => "hn",
            Suite::Kumar => "kumar",
            Suite::Theta3 => "theta3",
            Suite::Factor3 => "factor3",
            Suite::Baselocus4 => "baselocus4",
            Suite::Baselocus5 => "baselocus5",
            Suite::Baselocus6 => "baselocus6",
            Suite::StretchWeddle => "stretch-weddle",
        }
    }

    /// Suites tied to one genus.
    pub fn fixed_genus(self) -> Option<usize> {
        match self {
            Suite::Theta3 | Suite::Factor3 | Suite::StretchWeddle => Some(3),
            Suite::Baselocus4 => Some(4),
            Suite::Baselocus5 => Some(5),
            Suite::Baselocus6 => Some(6),
            _ => None,
        }
    }

    /// Suites that can run on synthetic points over the rationals.
    pub fn supports_rationals(self) -> bool {
        matches!(self, Suite::Hn | Suite::Kumar)
    }

    fn claims(self) -> &'static [&'static str] {
        match self {
            Suite::Rr => &["dim L(K+2D) = 3g-1 and dim L(2D) = g+1"],
            Suite::Embed => &["the embedded curve has degree 4g-2"],
            Suite::Gamma => &["the involution lines meet the span of N along a rational normal curve of degree 2g-2"],
            Suite::Hn => &[
                "h_N is given by the degree-g forms through the (g-1)-secant spans of N",
                "at g = 3 the image is the Segre cubic in P^4",
                "h_N contracts the rational normal curves through N",
            ],
            Suite::Kumar => &[
                "Omega and Lambda are the Kumar systems",
                "at g = 3 projection of the Segre cubic from i_Omega(e0) has degree 2",
            ],
            Suite::Theta3 => &[
                "degree-3 forms double along C give |2Theta| = P^7",
                "they coincide with the cubics through the secant variety",
                "the image is a quadric",
            ],
            Suite::Factor3 => &[
                "h_N = i_Omega o tau_k o Cr_k for every k",
                "phi_{D,N} is the projection of h_N from w",
                "pulling back the hyperplanes through w gives I(Gamma)",
            ],
            Suite::Baselocus4 | Suite::Baselocus5 => &["the extra base locus lies on Gamma"],
            Suite::Baselocus6 => &["the extra base locus is swept by secant lines of Gamma"],
            Suite::StretchWeddle => &["the branch locus of kappa is a quartic surface"],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "segre" {
            return Ok(Suite::Hn);
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    Q,
    Fp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub genus: Option<usize>,
    pub field: FieldChoice,
    pub prime: u64,
    pub seed: u64,
    pub margin: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            genus: None,
            field: FieldChoice::Fp,
            prime: crate::field::DEFAULT_PRIME,
            seed: 0,
            margin: DEFAULT_MARGIN,
        }
    }
}

/// Largest form degree any suite handles at genus g.
pub fn max_degree(g: usize) -> usize {
    (2 * (g - 1) * (g - 1)).max(4 * g - 2)
}

impl SuiteConfig {
    /// The genus a suite runs at, after validation.
    pub fn genus_for(&self, suite: Suite) -> Result<usize> {
        let g = match (suite.fixed_genus(), self.genus) {
            (Some(f), Some(g)) if f != g => {
                return Err(Error::Config(format!("suite {suite} runs at genus {f}, not {g}")))
            }
            (Some(f), _) => f,
            (None, Some(g)) => g,
            (None, None) => 3,
        };
        if g < 3 {
            return Err(Error::Config(format!("genus {g} below 3")));
        }
        if self.field == FieldChoice::Q && !suite.supports_rationals() {
            return Err(Error::Config(format!("suite {suite} needs --field fp")));
        }
        if self.field == FieldChoice::Fp && self.prime <= 2 * max_degree(g) as u64 {
            return Err(Error::Config(format!("prime {} too small for genus {g}", self.prime)));
        }
        if self.margin == 0 {
            return Err(Error::Config("margin must be positive".into()));
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub suite: Suite,
    /// The claims the suite checks.
    pub paper_ref: Vec<String>,
    pub field: FieldTag,
    pub prime: Option<u64>,
    pub seed: u64,
    pub margin: usize,
    pub genus: usize,
    pub dimensions: BTreeMap<String, i64>,
    pub ranks: BTreeMap<String, usize>,
    pub checks: Vec<Check>,
    pub samples_used: BTreeMap<String, usize>,
    pub status: Status,
}

impl Certificate {
    fn new(suite: Suite, cfg: &SuiteConfig, field: FieldTag, genus: usize) -> Self {
        Certificate {
            schema_version: SCHEMA_VERSION,
            suite,
            paper_ref: suite.claims().iter().map(|s| s.to_string()).collect(),
            prime: match field {
                FieldTag::Prime(p) => Some(p),
                FieldTag::Rationals => None,
            },
            field,
            seed: cfg.seed,
            margin: cfg.margin,
            genus,
            dimensions: BTreeMap::new(),
            ranks: BTreeMap::new(),
            checks: Vec::new(),
            samples_used: BTreeMap::new(),
            status: Status::Pass,
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Record an observed dimension and check it against the expected one.
    fn expect_dim(&mut self, name: &str, observed: i64, expected: Option<i64>) {
        self.dimensions.insert(name.into(), observed);
        if let Some(e) = expected {
            self.check(name, observed == e, format!("observed {observed}, expected {e}"));
        }
    }

    fn finish(mut self) -> Self {
        if self.status == Status::Pass && self.checks.iter().any(|c| !c.passed) {
            self.status = Status::Fail;
        }
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// The configuration this certificate was produced from.
    pub fn config(&self) -> SuiteConfig {
        SuiteConfig {
            genus: Some(self.genus),
            field: match self.field {
                FieldTag::Rationals => FieldChoice::Q,
                FieldTag::Prime(_) => FieldChoice::Fp,
            },
            prime: self.prime.unwrap_or(crate::field::DEFAULT_PRIME),
            seed: self.seed,
            margin: self.margin,
        }
    }
}

/// Run one suite. Configuration problems are errors; mathematical failures
/// and unsaturated ranks are reported in the certificate. An unsaturated
/// run is retried once with the margin doubled before it is declared
/// inconclusive.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig, exec: Exec) -> Result<Certificate> {
    let g = cfg.genus_for(suite)?;
    let attempt = |margin: usize| -> Result<Certificate> {
        let cfg = SuiteConfig { margin, ..cfg.clone() };
        match cfg.field {
            FieldChoice::Fp => {
                let field = PrimeField::new(cfg.prime)?;
                let mut cert = Certificate::new(suite, &cfg, field.tag(), g);
                run_fp(suite, &field, &cfg, g, exec, &mut cert).map(|()| cert)
            }
            FieldChoice::Q => {
                let mut cert = Certificate::new(suite, &cfg, Rationals.tag(), g);
                run_synthetic(suite, &Rationals, &cfg, g, exec, &mut cert).map(|()| cert)
            }
        }
    };
    let outcome = match attempt(cfg.margin) {
        Err(Error::Unsaturated(_)) => attempt(2 * cfg.margin),
        other => other,
    };
    match outcome {
        Ok(cert) => Ok(cert.finish()),
        Err(e @ Error::Config(_)) => Err(e),
        Err(e) => {
            let field = match cfg.field {
                FieldChoice::Fp => FieldTag::Prime(cfg.prime),
                FieldChoice::Q => FieldTag::Rationals,
            };
            let mut cert = Certificate::new(suite, cfg, field, g);
            let inconclusive = matches!(e, Error::Unsaturated(_));
            cert.check("completed", false, e.to_string());
            cert.status = if inconclusive { Status::Inconclusive } else { Status::Fail };
            Ok(cert)
        }
    }
}

fn run_fp(suite: Suite, field: &PrimeField, cfg: &SuiteConfig, g: usize, exec: Exec, cert: &mut Certificate) -> Result<()> {
    let stream = SeedStream::new(cfg.seed).derive(suite.name());
    match suite {
        Suite::Rr => rr_suite(field, cfg, g, exec, cert),
        Suite::Embed => embed_suite(field, cfg, g, exec, cert),
        _ => {
            let inst = generate_instance(field, g, cfg.seed, exec)?;
            cert.samples_used.insert("instance-trials".into(), inst.trials as usize);
            let gamma = gamma_curve(field, &inst, 2 * g + 10, stream.derive("gamma").seed(), exec)?;
            match suite {
                Suite::Gamma => {
                    gamma_suite(&gamma, cert);
                    Ok(())
                }
                Suite::Hn => hn_suite(field, &gamma.n_points, &stream, exec, cert),
                Suite::Kumar => kumar_suite(field, &gamma.n_points, Some(&gamma), &stream, exec, cert),
                Suite::Theta3 => theta3_suite(field, &inst, cfg, &stream, exec, cert),
                Suite::Factor3 => factor3_suite(field, &inst, &gamma, cfg, &stream, exec, cert),
                Suite::Baselocus4 | Suite::Baselocus5 | Suite::Baselocus6 => {
                    baselocus_suite(field, &inst, &gamma, &stream, cert)
                }
                Suite::StretchWeddle => weddle_suite(field, &gamma, &stream, exec, cert),
                Suite::Rr | Suite::Embed => unreachable!(),
            }
        }
    }
}

fn run_synthetic<F: Field>(suite: Suite, field: &F, cfg: &SuiteConfig, g: usize, exec: Exec, cert: &mut Certificate) -> Result<()> {
    let stream = SeedStream::new(cfg.seed).derive(suite.name());
    // 2g points of P^{2g-2} in general position are projectively a frame
    let n = 2 * g - 2;
    let n_points: Vec<ProjPoint<F>> = (0..=n + 1)
        .map(|i| {
            let coords = (0..=n).map(|j| if i == n + 1 || i == j { field.one() } else { field.zero() }).collect();
            ProjPoint::new(field, coords)
        })
        .collect::<Result<_>>()?;
    match suite {
        Suite::Hn => hn_suite(field, &n_points, &stream, exec, cert),
        Suite::Kumar => kumar_suite(field, &n_points, None, &stream, exec, cert),
        _ => Err(Error::Config(format!("suite {suite} needs --field fp"))),
    }
}

fn rr_suite(field: &PrimeField, cfg: &SuiteConfig, g: usize, exec: Exec, cert: &mut Certificate) -> Result<()> {
    let stream = SeedStream::new(cfg.seed).derive("rr");
    let (mut ok_big, mut ok_small) = (0, 0);
    let count: u64 = 10;
    for i in 0..count {
        let inst = generate_instance(field, g, stream.indexed("instance", i).gen(), exec)?;
        let d = inst.d_divisor();
        let big = riemann_roch_basis(field, &inst.curve, &inst.curve.canonical_divisor().plus(&d.scaled(2)))?;
        let small = riemann_roch_basis(field, &inst.curve, &d.scaled(2))?;
        ok_big += usize::from(big.dim() == 3 * g - 1 && big.verify(field, &inst.curve));
        ok_small += usize::from(small.dim() == g + 1 && small.verify(field, &inst.curve));
    }
    cert.samples_used.insert("instances".into(), count as usize);
    cert.check("dim L(K+2D)", ok_big == count as usize, format!("{ok_big}/{count} equal {}", 3 * g - 1));
    cert.check("dim L(2D)", ok_small == count as usize, format!("{ok_small}/{count} equal {}", g + 1));
    Ok(())
}

fn embed_suite(field: &PrimeField, cfg: &SuiteConfig, g: usize, exec: Exec, cert: &mut Certificate) -> Result<()> {
    let inst = generate_instance(field, g, cfg.seed, exec)?;
    let stream = SeedStream::new(cfg.seed).derive("embed");
    let mut rng = stream.stream("points");
    let n = 3 * g - 2;
    let pts: Vec<_> = (0..n + 4).map(|_| inst.curve.random_point(field, &mut rng)).collect();
    let embedded = pts.iter().map(|p| embed(field, &inst.curve, &inst.embedding, p)).collect::<Result<Vec<_>>>()?;
    let rank = rank_of(field, &embedded.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>());
    cert.ranks.insert("embedded-samples".into(), rank);
    cert.check("non-degenerate", rank == n + 1, format!("rank {rank} of {} samples", embedded.len()));

    let expected = 4 * g as i64 - 2;
    let trials = 10;
    let mut degree_ok = 0;
    for _ in 0..trials {
        let h: Vec<u64> = (0..=n).map(|_| field.sample(&mut rng)).collect();
        degree_ok += usize::from(hyperplane_section(field, &inst.curve, &inst.embedding, &h)?.degree() == expected);
    }
    cert.check("random hyperplanes", degree_ok == trials, format!("{degree_ok}/{trials} of degree {expected}"));

    // hyperplanes through n sampled points vanish at exactly those x's
    let mut through_ok = 0;
    for shift in 0..4 {
        let chosen: Vec<_> = embedded[shift..shift + n].to_vec();
        let eqs = span(field, &chosen)?.equations(field);
        let sec = hyperplane_section(field, &inst.curve, &inst.embedding, &eqs[0])?;
        let vanish = pts[shift..shift + n].iter().all(|p| field.is_zero(&sec.x_poly.eval(field, p.x().expect("affine"))));
        through_ok += usize::from(vanish && sec.degree() == expected);
    }
    cert.check("hyperplanes through samples", through_ok == 4, format!("{through_ok}/4"));
    cert.samples_used.insert("hyperplanes".into(), trials + 4);
    cert.dimensions.insert("embedding".into(), n as i64);
    Ok(())
}

fn gamma_suite(gamma: &Gamma<PrimeField>, cert: &mut Certificate) {
    let r = &gamma.report;
    let g = r.genus;
    cert.expect_dim("span-of-N", r.span_dim as i64, Some(2 * g as i64 - 2));
    cert.expect_dim("gamma-degree", r.curve_degree as i64, Some(2 * g as i64 - 2));
    cert.check("lines meet once", r.lines_meeting_once == r.samples, format!("{}/{}", r.lines_meeting_once, r.samples));
    cert.check("samples on the curve", r.samples_on_curve + 1 == r.samples, format!("{}/{}", r.samples_on_curve, r.samples - 1));
    cert.check("N lies on Gamma", r.n_points_are_their_own_images, "");
    cert.check("hyperplane sections", r.hyperplane_sections_ok, "");
    cert.check("parameters of N", r.parameters_match_x, "PGL(2)-equivalent to the x-coordinates");
    cert.samples_used.insert("gamma".into(), r.samples);
}

fn hn_suite<F: Field>(field: &F, n_points: &[ProjPoint<F>], stream: &SeedStream, exec: Exec, cert: &mut Certificate) -> Result<()> {
    let g = cert.genus;
    let mut rng = stream.stream("hn");
    let (system, map) = forgetful_h_n(field, n_points, exec)?;
    cert.expect_dim("h_N", system.dim() as i64, (g == 3).then_some(5));
    if g == 3 {
        let cubic = find_relations(field, map.components(), 3, cert.margin, &mut rng, exec)?;
        let quadric = find_relations(field, map.components(), 2, cert.margin, &mut rng, exec)?;
        cert.expect_dim("cubic-relations", cubic.dim() as i64, Some(1));
        cert.expect_dim("quadric-relations", quadric.dim() as i64, Some(0));
        cert.samples_used.insert("relations".into(), cubic.provenance().samples_used + quadric.provenance().samples_used);
    }
    let images = contracts_rncs(field, &map, n_points, 10, 30, &mut rng)?;
    let contracted = images.iter().filter(|i| i.is_some()).count();
    let mut distinct: Vec<&ProjPoint<F>> = images.iter().flatten().collect();
    distinct.sort_by_key(|p| p.coords().to_vec());
    distinct.dedup();
    cert.check("contracts curves through N", contracted == 10, format!("{contracted}/10"));
    cert.check("distinct images", distinct.len() == 10, format!("{} distinct", distinct.len()));
    cert.samples_used.insert("curve-samples".into(), 300);

    let a = random_point(field, 2 * g - 2, &mut rng);
    let b = random_point(field, 2 * g - 2, &mut rng);
    let on_line: Vec<Option<ProjPoint<F>>> = (1..4)
        .map(|s| {
            let s = field.from_i64(s);
            let x: Vec<F::Elem> = a.coords().iter().zip(b.coords()).map(|(u, v)| field.add(u, &field.mul(&s, v))).collect();
            map.eval(field, &x)
        })
        .collect();
    cert.check("not constant on a line", on_line[0] != on_line[1] || on_line[1] != on_line[2], "");

    let mut stable = 0;
    for _ in 0..10 {
        let mut permuted = n_points.to_vec();
        for i in (1..permuted.len()).rev() {
            permuted.swap(i, rng.gen_range(0..=i));
        }
        let (other, _) = forgetful_h_n(field, &permuted, exec)?;
        stable += usize::from(other.same_span(&system));
    }
    cert.check("symmetric in N", stable == 10, format!("{stable}/10 permutations"));
    Ok(())
}

fn kumar_suite<F: Field>(
    field: &F,
    n_points: &[ProjPoint<F>],
    gamma: Option<&Gamma<F>>,
    stream: &SeedStream,
    exec: Exec,
    cert: &mut Certificate,
) -> Result<()> {
    let g = cert.genus;
    let mut rng = stream.stream("kumar");
    let tc = compose_tau_cremona(field, n_points, 0, &mut rng)?;
    let e0 = match gamma {
        Some(gm) => {
            let images: Vec<Option<ProjPoint<F>>> = gm.samples.iter().map(|(_, q)| tc.map.eval(field, q.coords())).collect();
            let first = images[0].clone().ok_or_else(|| Error::Degenerate("Gamma sample in the base locus".into()))?;
            let constant = images.iter().all(|i| i.as_ref() == Some(&first));
            cert.check("Gamma contracted to e0", constant, format!("{} samples", images.len()));
            first
        }
        None => random_point(field, 2 * g - 3, &mut rng),
    };
    let (omega, i_omega) = kumar_omega(field, &tc.images)?;
    let (lambda, _) = kumar_lambda(field, &e0, &tc.images, &omega)?;
    cert.expect_dim("omega", omega.dim() as i64, (g == 3).then_some(5));
    cert.expect_dim("lambda", lambda.dim() as i64, (g == 3).then_some(4));
    cert.check("lambda inside omega", lambda.is_subsystem_of(field, &omega), "");
    if g == 3 {
        let cubic = find_relations(field, i_omega.components(), 3, cert.margin, &mut rng, exec)?;
        cert.expect_dim("cubic-relations", cubic.dim() as i64, Some(1));
        let center = i_omega.eval(field, e0.coords()).ok_or_else(|| Error::Degenerate("i_Omega undefined at e0".into()))?;
        let dirs: Vec<ProjPoint<F>> = (0..20).map(|_| random_point(field, 4, &mut rng)).collect();
        let fibers = segre_line_check(field, &cubic.forms()[0], &center, &dirs)?;
        let ok = fibers.iter().filter(|f| f.ok()).count();
        cert.check("degree two", ok == 20, format!("{ok}/20 lines meet the cubic twice more"));
        cert.samples_used.insert("lines".into(), 20);
    }
    Ok(())
}

fn theta3_suite(
    field: &PrimeField,
    inst: &Instance<PrimeField>,
    cfg: &SuiteConfig,
    stream: &SeedStream,
    exec: Exec,
    cert: &mut Certificate,
) -> Result<()> {
    let seed = stream.derive("theta").seed();
    let theta = theta_system(field, inst, cfg.margin, seed, exec)?;
    let doubled = theta_system(field, inst, 2 * cfg.margin, stream.derive("theta-doubled").seed(), exec)?;
    let secant = secant_theta_system(field, inst, cfg.margin, seed, exec)?;
    let mut rng = stream.stream("relations");
    let quadrics = find_relations(field, &theta.forms(), 2, cfg.margin, &mut rng, exec)?;
    cert.expect_dim("theta", theta.dim() as i64, Some(8));
    cert.expect_dim("secant", secant.dim() as i64, Some(8));
    cert.check("theta = secant", theta.same_span(&secant), "");
    cert.check("stable under doubled samples", theta.same_span(&doubled), "");
    cert.expect_dim("quadric-relations", quadrics.dim() as i64, Some(1));
    cert.samples_used.insert("theta".into(), theta.provenance().samples_used);
    cert.samples_used.insert("theta-doubled".into(), doubled.provenance().samples_used);
    cert.samples_used.insert("secant".into(), secant.provenance().samples_used);
    cert.samples_used.insert("relations".into(), quadrics.provenance().samples_used);
    Ok(())
}

/// Linear forms vanishing at `w`, as the rows of a projection.
fn projection_from<F: Field>(field: &F, w: &ProjPoint<F>) -> Result<Vec<Vec<F::Elem>>> {
    let m = Matrix::from_rows(vec![w.coords().to_vec()], w.ambient() + 1)?;
    Ok(rref_kernel(field, &m).1)
}

fn factor3_suite(
    field: &PrimeField,
    inst: &Instance<PrimeField>,
    gamma: &Gamma<PrimeField>,
    cfg: &SuiteConfig,
    stream: &SeedStream,
    exec: Exec,
    cert: &mut Certificate,
) -> Result<()> {
    let g = cert.genus;
    let mut rng = stream.stream("factor");
    let (h_system, h_map) = forgetful_h_n(field, &gamma.n_points, exec)?;
    let count = required_samples(h_map.target_ambient()) + 5;
    let samples: Vec<ProjPoint<PrimeField>> = (0..count).map(|_| random_point(field, 2 * g - 2, &mut rng)).collect();
    cert.samples_used.insert("comparison".into(), count);
    for k in 0..2 {
        let tc = compose_tau_cremona(field, &gamma.n_points, k, &mut rng)?;
        let (_, i_omega) = kumar_omega(field, &tc.images)?;
        let composite = Composed { first: tc.map, second: i_omega };
        let m = compare_maps_up_to_pgl(field, &h_map, &composite, &samples, exec)?;
        cert.check(&format!("h_N vs k = {k}"), m.is_some(), "");
    }

    let theta = theta_system(field, inst, cfg.margin, stream.derive("theta").seed(), exec)?;
    let gamma_points: Vec<ProjPoint<PrimeField>> = gamma.samples.iter().map(|(_, q)| q.clone()).collect();
    let restricted = restrict_to_pn(field, &theta, &gamma.chart, &gamma.n_points, &gamma_points)?;
    cert.expect_dim("restricted", restricted.system.dim() as i64, Some(4));
    cert.check("restricted inside h_N system", restricted.system.is_subsystem_of(field, &h_system), "");

    let w = h_map
        .eval(field, gamma_points[0].coords())
        .ok_or_else(|| Error::Degenerate("h_N undefined on Gamma".into()))?;
    let projected: RationalMap<PrimeField> = h_map.post_linear(field, &projection_from(field, &w)?)?;
    let m = compare_maps_up_to_pgl(field, &restricted.map, &projected, &samples, exec)?;
    cert.check("phi_{D,N} vs projection of h_N", m.is_some(), "");

    let report = osculating_center_check(
        field,
        &h_system,
        &h_map,
        gamma,
        Some(&restricted.system),
        cfg.margin,
        stream.derive("osculating").seed(),
        exec,
    )?;
    cert.check("Gamma contracted to w", report.contracted_to_point, "");
    cert.expect_dim("pullback", report.pullback_dim as i64, Some(4));
    cert.expect_dim("ideal-of-gamma", report.ideal_dim as i64, Some(4));
    cert.check("pullback = I(Gamma)", report.pullback_equals_ideal, "");
    cert.check("restricted = I(Gamma)", report.restricted_equals_ideal == Some(true), "");
    cert.check("fiber profiles", report.fiber_profiles_consistent, "");
    cert.samples_used.insert("gamma".into(), report.gamma_samples);
    cert.samples_used.insert("theta".into(), theta.provenance().samples_used);
    cert.expect_dim("centre", pc_dimension(g)? as i64, Some(3));
    Ok(())
}

fn baselocus_suite(
    field: &PrimeField,
    inst: &Instance<PrimeField>,
    gamma: &Gamma<PrimeField>,
    stream: &SeedStream,
    cert: &mut Certificate,
) -> Result<()> {
    let report = extra_base_locus_scan(field, inst, gamma, 20, stream.derive("scan").seed())?;
    let expected = report.expected();
    let hits = report.entries.iter().filter(|e| e.classification == expected).count();
    cert.check(
        "classification",
        report.passed(),
        format!("{hits}/{} {:?} in family {}", report.entries.len(), expected, report.family),
    );
    let lemma = lemma_check(field, inst, gamma, 10, stream.derive("lemma").seed())?;
    cert.check(
        "intersection dimensions",
        lemma.passed(),
        format!("{}/{} special, {}/{} general", lemma.special_ok, lemma.trials, lemma.general_empty, lemma.trials),
    );
    cert.samples_used.insert("divisors".into(), report.entries.len() + 2 * lemma.trials);
    Ok(())
}

fn weddle_suite(field: &PrimeField, gamma: &Gamma<PrimeField>, stream: &SeedStream, exec: Exec, cert: &mut Certificate) -> Result<()> {
    let mut rng = stream.stream("weddle");
    let tc = compose_tau_cremona(field, &gamma.n_points, 0, &mut rng)?;
    let e0 = tc
        .map
        .eval(field, gamma.samples[0].1.coords())
        .ok_or_else(|| Error::Degenerate("Gamma sample in the base locus".into()))?;
    let (omega, i_omega) = kumar_omega(field, &tc.images)?;
    let (lambda, _) = kumar_lambda(field, &e0, &tc.images, &omega)?;
    let cubic = find_relations(field, i_omega.components(), 3, cert.margin, &mut rng, exec)?;
    let report = weddle_check(field, &i_omega, &cubic.forms()[0], &e0, &tc.images, &lambda, 20, stream.derive("lines").seed())?;
    cert.expect_dim("discriminant-degree", report.discriminant_degree as i64, Some(4));
    cert.check("projection spans lambda", report.projection_spans_lambda, "");
    cert.check("reduced discriminant", report.squarefree_lines == report.lines, format!("{}/{} lines", report.squarefree_lines, report.lines));
    cert.check("jacobian nodes at the six points", report.jacobian_nonzero && report.jacobian_singular_at_points, "");
    cert.check(
        "ramification maps to the branch locus",
        report.ramification_points > 0 && report.ramification_points_on_branch == report.ramification_points,
        format!("{}/{}", report.ramification_points_on_branch, report.ramification_points),
    );
    cert.samples_used.insert("lines".into(), 2 * report.lines);
    if !report.passed() {
        cert.status = Status::Inconclusive;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
        assert_eq!("segre".parse::<Suite>().unwrap(), Suite::Hn);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn config_validation() {
        let cfg = SuiteConfig::default();
        assert_eq!(cfg.genus_for(Suite::Baselocus5).unwrap(), 5);
        let bad = SuiteConfig { genus: Some(4), ..cfg.clone() };
        assert!(bad.genus_for(Suite::Theta3).is_err());
        let q = SuiteConfig { field: FieldChoice::Q, ..cfg.clone() };
        assert!(q.genus_for(Suite::Gamma).is_err());
        assert!(q.genus_for(Suite::Hn).is_ok());
        let small = SuiteConfig { prime: 13, ..cfg };
        assert!(small.genus_for(Suite::Rr).is_err());
    }
}
