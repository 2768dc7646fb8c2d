use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistor_core::monopole::{
    act, act_with_root, in_stabilizer_lattice, moment_defect, moment_value, stabilizer_check, symplectic_residual,
    OrbitParameter, RationalMapPoint,
};

fn rc(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn random_point(rng: &mut ChaCha8Rng) -> RationalMapPoint {
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    RationalMapPoint::from_a_c(rc(rng, 1.0), rc(rng, 1.0), sign)
}

#[test]
fn action_properties_over_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..1000 {
        let m = random_point(&mut rng);
        let l1 = OrbitParameter::new(rc(&mut rng, 1.0));
        let l2 = OrbitParameter::new(rc(&mut rng, 1.0));
        let r = act(l1, &m);
        assert!(r.constraint_defect() <= 1e-12);
        let composed = act(l1, &act(l2, &m));
        let direct = act(OrbitParameter::new(l1.lambda + l2.lambda), &m);
        assert!(composed.max_abs_diff(&direct) <= 1e-12);
        let beta = m.c.sqrt();
        assert!((r.p_at(beta) - (l1.lambda * beta).exp() * m.p_at(beta)).norm() <= 1e-12);
        assert_eq!(moment_value(&r), moment_value(&m));
        assert!(act_with_root(l1, &m, -beta).max_abs_diff(&r) <= 1e-13);
    }
}

#[test]
fn moment_map_generates_the_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..100 {
        let m = random_point(&mut rng);
        assert!(moment_defect(&m).unwrap() <= 1e-12);
    }
}

#[test]
fn symplectic_residual_is_second_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..50 {
        let m = random_point(&mut rng);
        let l = OrbitParameter::new(rc(&mut rng, 2.0));
        let r: Vec<f64> = [1e-3, 5e-4, 2.5e-4].iter().map(|&h| symplectic_residual(l, &m, h).unwrap()).collect();
        assert!(symplectic_residual(l, &m, 1e-4).unwrap() <= 1e-6);
        if r[0] > 1e-10 {
            assert!((3.0..=5.0).contains(&(r[0] / r[1])), "{r:?}");
        }
    }
}

#[test]
fn stabilizer_matches_the_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..100 {
        let m = random_point(&mut rng);
        if m.c.norm() < 0.05 {
            continue;
        }
        let beta = m.c.sqrt();
        let n = rng.gen_range(-3..=3) as f64;
        let on = OrbitParameter::new(Complex64::new(0.0, 2.0 * std::f64::consts::PI * n) / beta);
        let off = OrbitParameter::new(Complex64::new(0.0, 2.0 * std::f64::consts::PI * (n + 0.5)) / beta);
        let generic = OrbitParameter::new(rc(&mut rng, 1.0));
        for l in [on, off, generic] {
            assert_eq!(stabilizer_check(l, &m), in_stabilizer_lattice(l, m.c, 1e-9), "{l:?} {m:?}");
        }
    }
}
