use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistor_core::cp1::section::reality_sign;
use twistor_core::{
    line_bundle_cohomology, splitting_type, BundleOnP1, LaurentMatrix, LaurentPolynomial, LineBundleSection,
};

/// `I + p E_ij` with `p` a random polynomial in `ζ^{sign}` of degree ≤ 2,
/// followed by a random transposition.
fn elementary(rng: &mut ChaCha8Rng, n: usize, sign: i64) -> LaurentMatrix {
    let mut m = LaurentMatrix::identity(n);
    if n > 1 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let p = LaurentPolynomial::from_terms(
            (0..3).map(|e| (sign * e, Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))),
        );
        m.set(i, j, p);
        if rng.gen_bool(0.5) {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let mut perm = LaurentMatrix::zeros(n, n);
            for r in 0..n {
                let c = if r == a { b } else if r == b { a } else { r };
                perm.set(r, c, LaurentPolynomial::one());
            }
            m = &perm * &m;
        }
    }
    m
}

fn random_gauge(rng: &mut ChaCha8Rng, t: &LaurentMatrix) -> LaurentMatrix {
    let n = t.nrows();
    let left = &elementary(rng, n, -1) * &elementary(rng, n, -1);
    let right = &elementary(rng, n, 1) * &elementary(rng, n, 1);
    let lt = &left * t;
    &lt * &right
}

#[test]
fn diagonal_splittings_up_to_six() {
    for a in -6..=6i64 {
        for b in -6..=6i64 {
            let t = LaurentMatrix::diagonal_powers(&[-a, -b]);
            let mut expect = vec![a, b];
            expect.sort_unstable_by(|x, y| y.cmp(x));
            assert_eq!(splitting_type(&t).unwrap().degrees(), expect.as_slice());
        }
    }
}

#[test]
fn gauge_transformed_variants_keep_the_splitting() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..40 {
        let n = rng.gen_range(1..=3);
        let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        let t = LaurentMatrix::diagonal_powers(&degrees.iter().map(|a| -a).collect::<Vec<_>>());
        let g = random_gauge(&mut rng, &t);
        let mut expect = degrees.clone();
        expect.sort_unstable_by(|x, y| y.cmp(x));
        assert_eq!(splitting_type(&g).unwrap().degrees(), expect.as_slice(), "trial {trial}: {degrees:?}");
    }
}

#[test]
fn riemann_roch_on_random_bundles() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let t = LaurentMatrix::diagonal_powers(&degrees.iter().map(|a| -a).collect::<Vec<_>>());
        let e = BundleOnP1::new(random_gauge(&mut rng, &t)).unwrap();
        for m in -3..=3 {
            let em = e.twist(m);
            let chi = em.h0() as i64 - em.h1() as i64;
            assert_eq!(chi, em.degree() + em.rank() as i64);
        }
    }
}

#[test]
fn line_bundle_counts() {
    for k in -8..=8i64 {
        let c = line_bundle_cohomology(k, false);
        assert_eq!(c.h0 as i64 - c.h1 as i64, k + 1);
    }
    for m in 0..6 {
        let c = line_bundle_cohomology(2 * m, true);
        assert_eq!(c.real_h0(), Some(2 * m as usize + 1));
    }
}

proptest! {
    #[test]
    fn reality_is_an_involution(m in 0i64..5, raw in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 11)) {
        let coeffs: Vec<Complex64> = raw.iter().take(2 * m as usize + 1).map(|&(a, b)| Complex64::new(a, b)).collect();
        let s = LineBundleSection::new(2 * m, coeffs).unwrap();
        let back = s.real_conjugate().unwrap().real_conjugate().unwrap();
        for (x, y) in back.coeffs.iter().zip(&s.coeffs) {
            prop_assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn real_sections_satisfy_the_coefficient_condition(m in 0i64..5, params in proptest::collection::vec(-2.0f64..2.0, 11)) {
        let s = LineBundleSection::real_from_params(2 * m, &params[..2 * m as usize + 1]).unwrap();
        prop_assert!(s.is_real(1e-14));
        for i in 0..=2 * m as usize {
            let mirrored = s.coeffs[i].conj() * reality_sign(m as usize, i);
            prop_assert!((s.coeffs[2 * m as usize - i] - mirrored).norm() < 1e-14);
        }
    }

    #[test]
    fn splitting_of_diagonal_is_exact(degrees in proptest::collection::vec(-6i64..=6, 1..4)) {
        let t = LaurentMatrix::diagonal_powers(&degrees.iter().map(|a| -a).collect::<Vec<_>>());
        let mut expect = degrees.clone();
        expect.sort_unstable_by(|x, y| y.cmp(x));
        let got = splitting_type(&t).unwrap();
        prop_assert_eq!(got.degrees(), expect.as_slice());
    }
}
