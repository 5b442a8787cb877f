use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use theta_hyper::field::{reduce_rational, Field, PrimeField, Rationals};
use theta_hyper::matrix::{rref_kernel, Matrix};

const P: u64 = 1_000_003;

fn fp() -> PrimeField {
    PrimeField::new(P).unwrap()
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..5, c), r))
}

proptest! {
    #[test]
    fn fp_matches_u128_arithmetic(a in 0..P, b in 0..P) {
        let f = fp();
        prop_assert_eq!(f.mul(&a, &b), ((a as u128 * b as u128) % P as u128) as u64);
        prop_assert_eq!(f.add(&a, &b), (a + b) % P);
        if a != 0 {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
    }

    #[test]
    fn kernel_vectors_annihilate_and_count(rows in small_matrix()) {
        let q = Rationals;
        let cols = rows[0].len();
        let m = Matrix::<Rationals>::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| q.from_i64(x)).collect()).collect(),
            cols,
        ).unwrap();
        let (rank, kernel) = rref_kernel(&q, &m);
        prop_assert_eq!(rank + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.mul_vec(&q, v).unwrap().iter().all(|x| q.is_zero(x)));
        }
    }

    #[test]
    fn rank_mod_p_never_exceeds_rank_over_q(rows in small_matrix()) {
        let q = Rationals;
        let f = fp();
        let cols = rows[0].len();
        let mq = Matrix::<Rationals>::from_rows(rows.iter().map(|r| r.iter().map(|&x| q.from_i64(x)).collect()).collect(), cols).unwrap();
        let mp = Matrix::<PrimeField>::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect(), cols).unwrap();
        prop_assert!(mp.rank(&f) <= mq.rank(&q));
    }
}

#[test]
fn rational_reduction_respects_division() {
    let f = fp();
    let r = BigRational::new(BigInt::from(7), BigInt::from(-12));
    let expected = f.div(&f.from_i64(-7), &f.from_i64(12));
    assert_eq!(reduce_rational(&f, &r), Some(expected));
    let bad = BigRational::new(BigInt::from(1), BigInt::from(P));
    assert_eq!(reduce_rational(&f, &bad), None);
}

#[test]
fn hilbert_matrix_inverse_is_integral() {
    // the inverse of the n x n Hilbert matrix has integer entries
    let q = Rationals;
    let n = 5;
    let h = Matrix::<Rationals>::from_fn(n, n, |i, j| BigRational::new(BigInt::from(1), BigInt::from(i + j + 1)));
    let inv = h.inverse(&q).unwrap();
    for i in 0..n {
        for j in 0..n {
            assert!(inv.get(i, j).is_integer());
        }
    }
    assert_eq!(inv.get(0, 0), &q.from_i64(25));
    assert_eq!(h.mul(&q, &inv).unwrap(), Matrix::identity(&q, n));
}
