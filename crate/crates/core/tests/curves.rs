use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use theta_hyper::field::{Field, PrimeField};
use theta_hyper::hyperelliptic::{generate_instance, linear_system_dim, riemann_roch_basis, Instance, InstanceJson};
use theta_hyper::par::Exec;
use theta_hyper::proj::{random_point, ProjPoint};
use theta_hyper::rnc::{cross_ratio, rnc_through_points};

fn fp() -> PrimeField {
    PrimeField::new(2_147_483_647).unwrap()
}

#[test]
fn instance_json_round_trip_and_determinism() {
    let f = fp();
    let a = generate_instance(&f, 4, 11, Exec::Sequential).unwrap();
    let b = generate_instance(&f, 4, 11, Exec::default()).unwrap();
    let ja = serde_json::to_string(&a.to_json(&f)).unwrap();
    assert_eq!(ja, serde_json::to_string(&b.to_json(&f)).unwrap());
    let back: InstanceJson = serde_json::from_str(&ja).unwrap();
    let c = Instance::from_json(&f, &back).unwrap();
    c.verify(&f).unwrap();
    assert_eq!(serde_json::to_string(&c.to_json(&f)).unwrap(), ja);
}

#[test]
fn riemann_roch_on_multiples_of_a_point() {
    let f = fp();
    let inst = generate_instance(&f, 3, 5, Exec::default()).unwrap();
    let p = inst.curve.random_point(&f, &mut ChaCha8Rng::seed_from_u64(4));
    let g = 3i64;
    // l(kP) for a non-Weierstrass P: gaps at 1..g, then k - g + 1
    for k in 0..=9i64 {
        let e = theta_hyper::hyperelliptic::Divisor::from_terms(vec![(p.clone(), k)]);
        let expected = if k <= g { 1 } else { k - g + 1 };
        assert_eq!(linear_system_dim(&f, &inst.curve, &e).unwrap() + 1, expected, "k={k}");
    }
    let k2 = inst.curve.canonical_divisor().scaled(2);
    let basis = riemann_roch_basis(&f, &inst.curve, &k2).unwrap();
    assert_eq!(basis.dim() as i64, 3 * g - 3);
    assert!(basis.verify(&f, &inst.curve));
}

#[test]
fn rnc_through_random_points() {
    let f = fp();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 2..6 {
        let pts: Vec<ProjPoint<PrimeField>> = (0..n + 3).map(|_| random_point(&f, n, &mut rng)).collect();
        let c = rnc_through_points(&f, &pts).unwrap();
        assert_eq!(c.degree(), n);
        assert!(pts.iter().all(|p| c.contains_point(&f, p).is_some()));
        let (_, q) = c.random_point(&f, &mut rng);
        assert!(c.contains_point(&f, &q).is_some());
        assert!(c.contains_point(&f, &random_point(&f, n, &mut rng)).is_none());
    }
}

#[test]
fn cross_ratio_is_moebius_invariant() {
    let f = fp();
    let pt = |s: i64, t: i64| (f.from_i64(s), f.from_i64(t));
    let ps = [pt(1, 0), pt(1, 1), pt(1, 3), pt(2, 7)];
    // (s, t) -> (2s + t, s - 3t)
    let m = |(s, t): &(u64, u64)| {
        (f.add(&f.mul(&2, s), t), f.sub(s, &f.mul(&3, t)))
    };
    let qs: Vec<_> = ps.iter().map(m).collect();
    let a = cross_ratio(&f, &ps[0], &ps[1], &ps[2], &ps[3]).unwrap();
    assert_eq!(a, cross_ratio(&f, &qs[0], &qs[1], &qs[2], &qs[3]).unwrap());
    assert_eq!(cross_ratio(&f, &ps[0], &ps[0], &ps[2], &ps[3]), Some(1));
}
