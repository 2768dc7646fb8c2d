use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistor_core::quotient::{admissibility_check, deformation_space_dim, QuotientScenario, Verdict};
use twistor_core::{LineBundleSection, SplittingType};

fn random_section(rng: &mut ChaCha8Rng, degree: i64) -> LineBundleSection {
    let coeffs = (0..=degree)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    LineBundleSection::new(degree, coeffs).unwrap()
}

fn scenario(rng: &mut ChaCha8Rng, p: i64, m: usize) -> QuotientScenario {
    QuotientScenario {
        n: m,
        lie_g: SplittingType::new(vec![0; m]),
        lie_h: Some(SplittingType::new(vec![-p])),
        embedding: Some((0..m).map(|_| random_section(rng, p)).collect()),
        hamiltonian: false,
        moment_invariant_asserted: false,
    }
}

#[test]
fn two_versus_four_dichotomy() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let r = admissibility_check(&scenario(&mut rng, 2, 3)).unwrap();
        assert_eq!(r.quotient_splitting.degrees(), &[1, 1]);
        assert_eq!(r.verdict, Verdict::Admissible);
        let r = admissibility_check(&scenario(&mut rng, 4, 3)).unwrap();
        assert_eq!(r.quotient_splitting.degrees(), &[2, 2]);
        assert_eq!(r.verdict, Verdict::Inadmissible);
    }
}

#[test]
fn deep_line_subbundles_are_always_obstructed() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for p in 4..=7 {
        for _ in 0..10 {
            let r = admissibility_check(&scenario(&mut rng, p, 3)).unwrap();
            assert_eq!(r.verdict, Verdict::Inadmissible, "p = {p}: {}", r.quotient_splitting);
        }
    }
}

#[test]
fn branches_and_degrees_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..40 {
        let m = rng.gen_range(2..=4);
        let p = rng.gen_range(1..=5);
        let r = admissibility_check(&scenario(&mut rng, p, m)).unwrap();
        assert!(!r.sufficient_holds || r.necessary_holds);
        assert!(r.degree_additivity_holds);
        assert_eq!(r.quotient_splitting.degree(), p);
        assert_eq!(r.quotient_splitting.rank(), m - 1);
    }
}

proptest! {
    #[test]
    fn deformation_dimension_is_additive(
        a in proptest::collection::vec(-8i64..=-1, 0..4),
        b in proptest::collection::vec(-8i64..=-1, 0..4),
    ) {
        let sa = SplittingType::new(a);
        let sb = SplittingType::new(b);
        let whole = deformation_space_dim(&sa.concat(&sb)).unwrap().dim;
        prop_assert_eq!(whole, deformation_space_dim(&sa).unwrap().dim + deformation_space_dim(&sb).unwrap().dim);
    }
}
