//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Expected values are recomputed here from first principles where they are
//! derived (Riemann-Roch, condition counts, closed forms) rather than read
//! back from the library.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta_hyper::field::{Field, PrimeField, DEFAULT_PRIME};
use theta_hyper::hyperelliptic::{generate_instance, hyperplane_section, riemann_roch_basis};
use theta_hyper::linsys::{find_relations, DEFAULT_MARGIN};
use theta_hyper::modulimaps::{pc_dimension, secant_theta_system, theta_system};
use theta_hyper::par::Exec;
use theta_hyper::rnc::{gamma_curve, rnc_through_points};
use theta_hyper::suites::{run_suite, Certificate, Status, Suite, SuiteConfig};

const SEED: u64 = 1;

struct Outcome {
    passed: bool,
    inconclusive: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, inconclusive: false, detail: detail.into() }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn field() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).unwrap()
}

fn suite(s: Suite, genus: Option<usize>) -> Certificate {
    let cfg = SuiteConfig { genus, seed: SEED, ..SuiteConfig::default() };
    run_suite(s, &cfg, Exec::default()).unwrap()
}

fn check_passed(c: &Certificate, name: &str) -> bool {
    c.checks.iter().any(|k| k.name == name && k.passed)
}

fn failed_checks(c: &Certificate) -> String {
    let v: Vec<String> = c.checks.iter().filter(|k| !k.passed).map(|k| format!("{}: {}", k.name, k.detail)).collect();
    v.join("; ")
}

fn riemann_roch() -> Outcome {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for g in 3..=5 {
        for _ in 0..10 {
            let inst = generate_instance(&f, g, rng.gen(), Exec::default()).unwrap();
            let d = inst.d_divisor();
            for e in [inst.curve.canonical_divisor().plus(&d.scaled(2)), d.scaled(2)] {
                // non-special range: l(E) = deg E - g + 1
                assert!(e.degree() > 2 * g as i64 - 2);
                let expected = e.degree() - g as i64 + 1;
                let got = riemann_roch_basis(&f, &inst.curve, &e).unwrap().dim() as i64;
                if got != expected {
                    bad.push(format!("g={g} deg {}: {got} vs {expected}", e.degree()));
                }
            }
        }
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { "30 instances".into() } else { bad.join(", ") })
}

fn embedding_degree() -> Outcome {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    let mut total = 0;
    for g in 3..=5 {
        let inst = generate_instance(&f, g, rng.gen(), Exec::default()).unwrap();
        let degree = inst.curve.canonical_divisor().plus(&inst.d_divisor().scaled(2)).degree();
        for _ in 0..10 {
            let h: Vec<u64> = (0..inst.embedding.dim()).map(|_| f.sample(&mut rng)).collect();
            let sec = hyperplane_section(&f, &inst.curve, &inst.embedding, &h).unwrap();
            total += 1;
            bad += usize::from(sec.degree() != degree);
        }
    }
    Outcome::new(bad == 0, format!("{}/{total} sections of degree 4g-2", total - bad))
}

fn gamma() -> Outcome {
    let f = field();
    let mut details = Vec::new();
    let mut ok = true;
    for g in 3..=5 {
        let start = Instant::now();
        let inst = generate_instance(&f, g, SEED + g as u64, Exec::default()).unwrap();
        let gm = gamma_curve(&f, &inst, 2 * g + 10, SEED, Exec::default()).unwrap();
        // an RNC through n + 3 points of P^n has degree n
        let mut through = gm.n_points.clone();
        through.push(gm.samples[0].1.clone());
        let rnc = rnc_through_points(&f, &through).unwrap();
        let on = gm.samples[1..].iter().filter(|(_, q)| rnc.contains_point(&f, q).is_some()).count();
        let this = gm.report.passed()
            && rnc.degree() == gm.n_points.len() - 2
            && rnc.degree() == 2 * g - 2
            && on == gm.samples.len() - 1
            && start.elapsed() < Duration::from_secs(30);
        ok &= this;
        details.push(format!("g={g} degree {} {on}/{} on curve", rnc.degree(), gm.samples.len() - 1));
    }
    Outcome::new(ok, details.join(", "))
}

fn theta3() -> Outcome {
    let f = field();
    let g = 3;
    let inst = generate_instance(&f, g, SEED, Exec::default()).unwrap();
    let theta = theta_system(&f, &inst, DEFAULT_MARGIN, SEED, Exec::default()).unwrap();
    let doubled = theta_system(&f, &inst, 2 * DEFAULT_MARGIN, SEED + 1, Exec::default()).unwrap();
    let secant = secant_theta_system(&f, &inst, DEFAULT_MARGIN, SEED, Exec::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let rel = find_relations(&f, &theta.forms(), 2, DEFAULT_MARGIN, &mut rng, Exec::default()).unwrap();
    let expected = 1usize << g;
    Outcome::new(
        theta.dim() == expected && theta.same_span(&secant) && theta.same_span(&doubled) && rel.dim() == 1,
        format!("dim {} (2^g = {expected}), secant {}, quadric relations {}", theta.dim(), secant.dim(), rel.dim()),
    )
}

/// Rank of a dense matrix mod p by plain elimination.
fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow(rows[rank][c], p - 2);
        for x in rows[rank].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let k = rows[r][c];
                for j in 0..cols {
                    let sub = (k as u128 * rows[rank][j] as u128 % p as u128) as u64;
                    rows[r][j] = (rows[r][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Cubics on P^4 through the 15 lines joining six points of a frame,
/// counted by evaluating all 35 monomials at points of the lines.
fn cubics_through_frame_lines() -> usize {
    let p = DEFAULT_PRIME;
    let mut pts: Vec<[u64; 5]> = (0..5).map(|i| std::array::from_fn(|j| u64::from(i == j))).collect();
    pts.push([1; 5]);
    let mut monomials = Vec::new();
    for a in 0..5 {
        for b in a..5 {
            for c in b..5 {
                monomials.push([a, b, c]);
            }
        }
    }
    let mut rows = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            for t in 1..=5u64 {
                let x: Vec<u64> = (0..5).map(|k| (pts[i][k] + t * pts[j][k]) % p).collect();
                rows.push(monomials.iter().map(|m| x[m[0]] * x[m[1]] % p * x[m[2]] % p).collect());
            }
        }
    }
    monomials.len() - rank_mod_p(rows, p)
}

fn forgetful3() -> Outcome {
    let c = suite(Suite::Hn, Some(3));
    let spec_dim = 6;
    let oracle = cubics_through_frame_lines();
    let got = c.dimensions["h_N"] as usize;
    let unique = c.dimensions["cubic-relations"] == 1;
    let contracts = check_passed(&c, "contracts curves through N");
    Outcome::new(
        got == spec_dim && unique && contracts,
        format!("cubic system dim {got} (direct count {oracle}, required {spec_dim}), cubic relation unique: {unique}, contracts 10 curves: {contracts}"),
    )
}

fn kumar3() -> Outcome {
    let c = suite(Suite::Kumar, Some(3));
    // quadrics on P^3, one condition per simple point
    let quadrics = binomial(3 + 2, 2) as i64;
    let (omega, lambda) = (quadrics - 5, quadrics - 6);
    let ok = c.dimensions["omega"] == omega && c.dimensions["lambda"] == lambda && c.status == Status::Pass;
    Outcome::new(
        ok,
        format!("omega {} (expected {omega}), lambda {} (expected {lambda}) {}", c.dimensions["omega"], c.dimensions["lambda"], failed_checks(&c)),
    )
}

fn factorisation() -> Outcome {
    let c = suite(Suite::Factor3, Some(3));
    let names = ["h_N vs k = 0", "h_N vs k = 1", "phi_{D,N} vs projection of h_N"];
    let ok = names.iter().all(|n| check_passed(&c, n)) && c.samples_used["comparison"] >= 50;
    Outcome::new(ok, format!("{} samples {}", c.samples_used["comparison"], failed_checks(&c)))
}

fn osculating() -> Outcome {
    let c = suite(Suite::Factor3, Some(3));
    let ok = check_passed(&c, "pullback = I(Gamma)") && c.dimensions["pullback"] == c.dimensions["ideal-of-gamma"];
    Outcome::new(ok, format!("pullback {} ideal {}", c.dimensions["pullback"], c.dimensions["ideal-of-gamma"]))
}

fn base_locus() -> Outcome {
    let certs = [Suite::Baselocus4, Suite::Baselocus5, Suite::Baselocus6].map(|s| suite(s, None));
    let ok = certs.iter().all(|c| c.status == Status::Pass && c.samples_used["divisors"] >= 20);
    let detail: Vec<String> = certs
        .iter()
        .map(|c| format!("g={} {}", c.genus, c.checks.iter().find(|k| k.name == "classification").map_or("", |k| &k.detail)))
        .collect();
    Outcome::new(ok, detail.join(", "))
}

fn centre() -> Outcome {
    let mut ok = pc_dimension(3).unwrap() == 3;
    let mut got = Vec::new();
    for g in 3..=5u64 {
        // sum_{i <= g-2} C(g, i) - 1 = 2^g - g - 2
        let closed = (1u64 << g) - g - 2;
        let v = pc_dimension(g as usize).unwrap() as u64;
        ok &= v == closed;
        got.push(format!("g={g}: {v}"));
    }
    Outcome::new(ok, got.join(", "))
}

fn weddle() -> Outcome {
    let c = suite(Suite::StretchWeddle, Some(3));
    let degree = c.dimensions.get("discriminant-degree").copied();
    let mut o = Outcome::new(degree == Some(4) || c.status == Status::Inconclusive, format!("discriminant degree {degree:?}"));
    o.inconclusive = c.status == Status::Inconclusive;
    o
}

fn main() {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        (1, "Riemann-Roch dimensions", 5, riemann_roch),
        (2, "embedding degree", 10, embedding_degree),
        (3, "Gamma is a rational normal curve", 90, gamma),
        (4, "genus 3 theta system", 60, theta3),
        (5, "genus 3 forgetful map", 30, forgetful3),
        (6, "Kumar systems", 10, kumar3),
        (7, "factorisation up to PGL", 60, factorisation),
        (8, "osculating projection", 30, osculating),
        (9, "base-locus scans", 300, base_locus),
        (10, "centre dimension", 1, centre),
        (11, "branch quartic", 300, weddle),
    ];
    let mut failures = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let on_time = secs < limit as f64;
        let verdict = match (o.passed && on_time, o.inconclusive) {
            (true, true) => "PASS (inconclusive)",
            (true, false) => "PASS",
            _ => "FAIL",
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!("criterion {n:>2} {verdict:<4} {name} [{secs:.2}s / {limit}s] {}", o.detail);
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
