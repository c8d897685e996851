mod common;

use affaut::autgroup::{
    check_abelian_kernel, composition_series, from_kernel_coordinates, is_automorphism, iterate, iterate_degree_bound,
    kernel_coordinates, literal_iterate_bound, member, order, KernelCheck, Level, SubgroupSpec, TruncPoly,
};
use affaut::inversion::invert;
use affaut::rings::{Ring, Zmod};
use affaut::sample::{random_atilde, random_automorphism};
use affaut::Error;
use common::{coeffs, compose_mod, degree_mod, is_automorphism_crt, zpoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zp(p: u64, n: u32) -> Zmod {
    Zmod::prime_power(p, n).unwrap()
}

/// Membership in `Atilde_d(n)` read straight off the definition.
fn in_atilde(f: &[i128], p: u64, n: u32, d: u32) -> bool {
    (2..=n).all(|m| degree_mod(f, (p as i128).pow(m)) as u64 <= d as u64 * (1 << (m - 2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn atilde_is_closed_under_composition_and_inversion(
        p in prop::sample::select(vec![2u64, 3, 5]),
        n in 3u32..=5,
        d in 1u32..=3,
        seed: u64,
    ) {
        let ring = zp(p, n);
        let m = ring.modulus() as i128;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_atilde(&ring, d, 0.3, &mut rng).unwrap();
        let g = random_atilde(&ring, d, 0.3, &mut rng).unwrap();
        let h = f.compose(&g).unwrap();
        prop_assert_eq!(coeffs(&h), compose_mod(&coeffs(&f), &coeffs(&g), m));
        prop_assert!(in_atilde(&coeffs(&h), p, n, d));
        prop_assert!(member(&h, SubgroupSpec::Atilde(d)).unwrap());
        prop_assert!(in_atilde(&coeffs(&invert(&f).unwrap()), p, n, d));
    }

    #[test]
    fn atilde_membership_matches_definition(
        p in prop::sample::select(vec![2u64, 3]),
        n in 2u32..=4,
        d in 1u32..=3,
        seed: u64,
    ) {
        let ring = zp(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_automorphism(&ring, rng.gen_range(1..10), &mut rng).unwrap();
        prop_assert_eq!(member(&f, SubgroupSpec::Atilde(d)).unwrap(), in_atilde(&coeffs(&f), p, n, d));
    }

    #[test]
    fn automorphisms_of_z_mod_m_match_crt(
        m in prop::sample::select(vec![12u64, 18, 36, 72, 100]),
        c in prop::collection::vec(0i128..1000, 2..6),
    ) {
        let ring = Zmod::new(m).unwrap();
        let f = zpoly(&ring, &c);
        prop_assert_eq!(is_automorphism(&f), is_automorphism_crt(&coeffs(&f), m));
    }

    #[test]
    fn iterates_respect_the_minimal_degree_bound(p in prop::sample::select(vec![2u64, 3]), n in 2u32..=4, seed: u64) {
        let ring = zp(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_automorphism(&ring, rng.gen_range(1..7), &mut rng).unwrap();
        let bound = iterate_degree_bound(&f).unwrap() as usize;
        let mut g = f.clone();
        for _ in 0..20 {
            prop_assert!(g.degree().unwrap_or(0) <= bound);
            g = g.compose(&f).unwrap();
        }
    }
}

fn example_psi(p: u64, d: usize) -> TruncPoly<Zmod> {
    let ring = zp(p, 6);
    let mut c = vec![0i128; 16 * d + 1];
    c[1] = 1;
    for (i, k) in [1, 2, 4, 8, 16].iter().enumerate() {
        c[k * d] += (p as i128).pow(i as u32 + 1);
    }
    zpoly(&ring, &c)
}

#[test]
fn psi_example_is_in_atilde_with_bounded_iterates() {
    for p in [2, 3] {
        for d in 1..=3usize {
            let psi = example_psi(p, d);
            assert!(member(&psi, SubgroupSpec::Atilde(d as u32)).unwrap());
            let k = order(&psi, 1_000_000).unwrap();
            let mut g = psi.clone();
            for _ in 1..=k {
                assert!(in_atilde(&coeffs(&g), p, 6, d as u32));
                g = g.compose(&psi).unwrap();
            }
            assert_eq!(coeffs(&g), coeffs(&psi));
        }
    }
}

#[test]
fn introductory_example_has_iterates_of_degree_at_most_four() {
    for p in [2i128, 3, 5] {
        let ring = zp(p as u64, 4);
        let f = zpoly(&ring, &[1, 1, p, p * p, p * p * p]);
        assert!(is_automorphism(&f));
        let k = order(&f, 1_000_000).unwrap();
        let mut g = f.clone();
        for _ in 1..k {
            assert!(g.degree().unwrap_or(0) <= 4);
            g = g.compose(&f).unwrap();
        }
        assert!(g.is_identity());
    }
}

#[test]
fn translations_have_order_p_to_the_n() {
    for (p, n) in [(2, 5), (3, 3), (5, 2)] {
        let ring = zp(p, n);
        assert_eq!(order(&zpoly(&ring, &[1, 1]), 1_000_000).unwrap(), p.pow(n));
    }
    let z12 = Zmod::new(12).unwrap();
    assert_eq!(order(&zpoly(&z12, &[1, 1]), 1000).unwrap(), 12);
    assert!(matches!(order(&zpoly(&z12, &[1, 1]), 5), Err(Error::NotFoundWithinCap { .. })));
}

#[test]
fn iterate_matches_repeated_composition() {
    let ring = zp(3, 3);
    let m = 27;
    let f = [2i128, 4, 3, 9, 18];
    let mut expected = vec![0, 1];
    for k in 0..12u64 {
        assert_eq!(coeffs(&iterate(&zpoly(&ring, &f), k)), expected);
        expected = compose_mod(&f, &expected, m);
    }
}

#[test]
fn stated_iterate_bound_needs_atilde_membership() {
    for p in [2i128, 3] {
        let ring = zp(p as u64, 3);
        let f = zpoly(&ring, &[0, 1, 0, 0, 0, p * p]);
        assert_eq!(literal_iterate_bound(&f).unwrap(), 2);
        assert!(f.degree().unwrap() as u64 > literal_iterate_bound(&f).unwrap());
        let bound = iterate_degree_bound(&f).unwrap();
        let mut g = f.clone();
        for _ in 0..p * p * 3 {
            assert!(g.degree().unwrap_or(0) as u64 <= bound);
            g = g.compose(&f).unwrap();
        }
    }
}

#[test]
fn composition_series_kernels_are_abelian() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let opts = KernelCheck { degree_cap: 3, samples: 2000, exhaustive_limit: 4096 };
    let z16 = zp(2, 4);
    let steps = composition_series(&z16, &opts, &mut rng).unwrap();
    let levels: Vec<Level> = steps.iter().map(|s| s.to).collect();
    assert_eq!(levels, vec![Level::Precision(2), Level::Precision(1)]);
    assert!(steps.iter().all(|s| s.verdict.abelian && s.verdict.exhaustive));

    let z72 = Zmod::new(72).unwrap();
    let steps = composition_series(&z72, &opts, &mut rng).unwrap();
    assert_eq!(steps.last().unwrap().to, Level::Modulus(6));
    assert!(steps.iter().all(|s| s.verdict.abelian));
}

#[test]
fn kernel_mod_q_is_not_abelian_at_precision_four() {
    for p in [2, 3] {
        let ring = zp(p, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = check_abelian_kernel(&ring, 1, &KernelCheck { degree_cap: 2, samples: 1000, exhaustive_limit: 0 }, &mut rng)
            .unwrap();
        assert!(!v.abelian);
        let (f, g) = v.counterexample.unwrap();
        let m = ring.modulus() as i128;
        assert_ne!(compose_mod(&coeffs(&f), &coeffs(&g), m), compose_mod(&coeffs(&g), &coeffs(&f), m));
    }
}

#[test]
fn kernel_has_d_plus_one_coordinates_and_composition_adds_them() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for p in [2u64, 3, 5] {
        for d in 2..=4u32 {
            let ring = zp(p, d);
            let residue = zp(p, 1);
            for _ in 0..50 {
                let x: Vec<u64> = (0..=d).map(|_| rng.gen_range(0..p)).collect();
                let y: Vec<u64> = (0..=d).map(|_| rng.gen_range(0..p)).collect();
                let f = from_kernel_coordinates(&ring, d, &x).unwrap();
                let g = from_kernel_coordinates(&ring, d, &y).unwrap();
                assert!(member(&f, SubgroupSpec::N { n: d, r: d - 1 }).unwrap());
                let z = kernel_coordinates(&f.compose(&g).unwrap(), d).unwrap();
                assert_eq!(z.len(), d as usize + 1);
                let sum: Vec<u64> = x.iter().zip(&y).map(|(a, b)| residue.add(a, b)).collect();
                assert_eq!(z, sum);
            }
        }
    }
}
