mod common;

use affaut::autgroup::{AutMap, TruncPoly};
use affaut::inversion::{invert, invert_kernel, invert_traced, lift_aut, oracle_invert, reduce_aut};
use affaut::rings::{AnyRing, Ring, Zmod};
use affaut::sample::{random_atilde, random_automorphism, random_kernel};
use common::{coeffs, compose_mod, is_automorphism_crt, zpoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ceil_log2(n: u32) -> u32 {
    32 - (n - 1).leading_zeros()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_agrees_with_newton_lifting(
        p in prop::sample::select(vec![2u64, 3, 5]),
        n in 1u32..=6,
        d in 1u32..=4,
        seed: u64,
    ) {
        let ring = Zmod::prime_power(p, n).unwrap();
        let m = ring.modulus() as i128;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_atilde(&ring, d, 0.5, &mut rng).unwrap();
        let (g, depth) = invert_traced(&f).unwrap();
        prop_assert_eq!(depth, ceil_log2(n));
        prop_assert_eq!(coeffs(&g), coeffs(&oracle_invert(&f).unwrap()));
        prop_assert_eq!(compose_mod(&coeffs(&f), &coeffs(&g), m), vec![0, 1]);
        prop_assert_eq!(compose_mod(&coeffs(&g), &coeffs(&f), m), vec![0, 1]);
    }

    #[test]
    fn composite_moduli_invert(m in prop::sample::select(vec![12u64, 45, 72, 200]), seed: u64) {
        let ring = Zmod::new(m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_automorphism(&ring, rng.gen_range(1..6), &mut rng).unwrap();
        prop_assert!(is_automorphism_crt(&coeffs(&f), m));
        let g = invert(&f).unwrap();
        prop_assert_eq!(compose_mod(&coeffs(&f), &coeffs(&g), m as i128), vec![0, 1]);
        prop_assert_eq!(compose_mod(&coeffs(&g), &coeffs(&f), m as i128), vec![0, 1]);
    }

    #[test]
    fn truncated_series_rings_invert(flag in prop::sample::select(vec!["tq:2:4", "tq:3:3", "tq:Q:3"]), seed: u64) {
        let ring = AnyRing::parse_flag(flag).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_automorphism(&ring, rng.gen_range(1..5), &mut rng).unwrap();
        let g = invert(&f).unwrap();
        prop_assert!(f.compose(&g).unwrap().is_identity());
        prop_assert!(g.compose(&f).unwrap().is_identity());
    }

    #[test]
    fn kernel_inverse_is_negation(p in prop::sample::select(vec![2u64, 3]), n in 2u32..=5, seed: u64) {
        let ring = Zmod::prime_power(p, n).unwrap();
        let r = n.div_ceil(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_kernel(&ring, r, 4, &mut rng).unwrap();
        prop_assert_eq!(coeffs(&invert_kernel(&f, r).unwrap()), coeffs(&invert(&f).unwrap()));
    }
}

#[test]
fn small_examples() {
    let z16 = Zmod::new(16).unwrap();
    let f = zpoly(&z16, &[1, 1, 2, 4]);
    let g = invert(&f).unwrap();
    assert_eq!(compose_mod(&[1, 1, 2, 4], &coeffs(&g), 16), vec![0, 1]);
    let z9 = Zmod::new(9).unwrap();
    assert_eq!(coeffs(&invert(&zpoly(&z9, &[3, 2])).unwrap()), vec![3, 5]);
}

#[test]
fn non_automorphisms_are_rejected() {
    let z8 = Zmod::new(8).unwrap();
    assert!(invert(&zpoly(&z8, &[0, 2])).is_err());
    assert!(invert(&zpoly(&z8, &[0, 1, 1])).is_err());
    assert!(oracle_invert(&zpoly(&z8, &[0, 1, 1])).is_err());
}

#[test]
fn lifting_and_reduction_are_compatible() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let z27 = Zmod::new(27).unwrap();
    let z243 = Zmod::new(243).unwrap();
    for _ in 0..100 {
        let f = AutMap::new(random_automorphism(&z27, 4, &mut rng).unwrap()).unwrap();
        let lifted = lift_aut(&f, &z243).unwrap();
        let back = reduce_aut(&lifted, 3).unwrap();
        assert_eq!(coeffs(back.poly()), coeffs(f.poly()));
        let inv = TruncPoly::change_ring(lifted.inverse().poly(), &z27);
        assert_eq!(coeffs(&inv), coeffs(&invert(f.poly()).unwrap()));
    }
}

#[test]
fn inverse_of_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ring = Zmod::prime_power(5, 5).unwrap();
    for _ in 0..200 {
        let f = random_atilde(&ring, 2, 0.2, &mut rng).unwrap();
        assert_eq!(invert(&invert(&f).unwrap()).unwrap(), f);
        assert!(ring.is_unit(&invert(&f).unwrap().coeff(1)));
    }
}
