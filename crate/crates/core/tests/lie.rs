use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistor_core::lie::unipotent::negative_eigenspace;
use twistor_core::lie::{
    bch_inverse, bch_multiply, nilpotency, unipotent_family, FiberElement, SimpleAlgebra, TwistorLieAlgebra,
};
use twistor_core::LaurentPolynomial;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Negative algebra of rank ≤ 4 with degrees in {−1, −2, −3}: every
/// degree-allowed bracket `f^{ij}_k` gets a random section of
/// `O(p_i + p_j − p_k)` (or zero).
fn random_negative(rng: &mut ChaCha8Rng) -> TwistorLieAlgebra {
    let n = rng.gen_range(1..=4);
    let mut p: Vec<i64> = (0..n).map(|_| -rng.gen_range(1..=3)).collect();
    p.sort_unstable_by(|a, b| b.cmp(a));
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let m = p[i] + p[j] - p[k];
                if m < 0 || rng.gen_bool(0.2) {
                    continue;
                }
                let f = LaurentPolynomial::from_terms(
                    (0..=m).map(|e| (e, c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))),
                );
                entries.push((i, j, k, f));
            }
        }
    }
    TwistorLieAlgebra::with_antisymmetric_completion(p, entries).unwrap()
}

#[test]
fn negative_algebras_are_nilpotent_within_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let l = random_negative(&mut rng);
        assert!(l.validate().valid, "{:?}", l.validate().violations);
        let r = nilpotency(&l).unwrap();
        assert!(r.is_negative);
        let class = r.class.expect("lower central series terminates");
        assert!(class <= l.rank(), "class {class} for rank {}", l.rank());
    }
}

#[test]
fn validation_is_invariant_under_permutation_of_equal_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let l = random_negative(&mut rng);
        let n = l.rank();
        // swap two summands of equal degree when there are any
        let p = l.splitting().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        if let Some(i) = (0..n.saturating_sub(1)).find(|&i| p[i] == p[i + 1]) {
            perm.swap(i, i + 1);
        }
        assert_eq!(l.permuted(&perm).validate().valid, l.validate().valid);
    }
}

fn class_three() -> TwistorLieAlgebra {
    let one = LaurentPolynomial::constant(c(1.0, 0.0));
    TwistorLieAlgebra::with_antisymmetric_completion(
        vec![-1, -1, -2, -3, -3],
        [
            (0, 1, 2, one.clone()),
            (0, 2, 3, one.clone()),
            (1, 2, 4, LaurentPolynomial::constant(c(0.5, 1.0))),
            (0, 1, 3, LaurentPolynomial::from_terms([(0, c(0.5, 0.0)), (1, c(0.0, 1.0))])),
        ],
    )
    .unwrap()
}

proptest! {
    #[test]
    fn bch_is_associative(v in proptest::collection::vec(-1.5f64..1.5, 30), zr in -1.0f64..1.0, zi in -1.0f64..1.0) {
        let l = class_three();
        let z = c(zr, zi);
        let el = |s: &[f64]| FiberElement::new(z, (0..5).map(|i| c(s[2 * i], s[2 * i + 1])).collect());
        let (x, y, w) = (el(&v[0..10]), el(&v[10..20]), el(&v[20..30]));
        let left = bch_multiply(&l, &bch_multiply(&l, &x, &y).unwrap(), &w).unwrap();
        let right = bch_multiply(&l, &x, &bch_multiply(&l, &y, &w).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
        let id = bch_multiply(&l, &x, &bch_inverse(&x)).unwrap();
        prop_assert!(id.max_abs_diff(&FiberElement::zero(z, 5)) < 1e-14);
    }
}

#[test]
fn unipotent_fiber_dimension_is_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (n, dim) in [(2, 1), (3, 3)] {
        for _ in 0..100 {
            let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let x = [v[0] / r, v[1] / r, v[2] / r];
            assert_eq!(negative_eigenspace(n, x).len(), dim);
        }
    }
}

#[test]
fn unipotent_splittings() {
    let sl2 = unipotent_family(SimpleAlgebra::Sl2, [0.0, 0.0, 1.0]).unwrap();
    assert_eq!(sl2.splitting.degrees(), &[-2]);
    // the eigenframe family for sl3 is O(−2) ⊕ O(−3) ⊕ O(−3)
    let sl3 = unipotent_family(SimpleAlgebra::Sl3, [0.0, 0.0, 1.0]).unwrap();
    assert_eq!(sl3.fiber_dim, 3);
    assert_eq!(sl3.splitting.degrees(), &[-2, -3, -3]);
}
