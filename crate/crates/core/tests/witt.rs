mod common;

use affaut::expr::Expr;
use affaut::mpoly::IntPoly;
use affaut::rings::{Integers, Symbolic, Zmod};
use affaut::witt::{
    derive_witt_laws, derive_witt_laws_with, ghost_map, residue_to_witt, universal_law, witt_to_residue,
    witt_to_residue_from_lifts, EliminationOrder, UniversalWittLaw, WittRing, WittVec,
};
use common::{ghost, witt_residue};
use num_bigint::BigInt;
use proptest::prelude::*;
use serde_json::Value;

fn golden(name: &str) -> Value {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Parses an integer polynomial in `x0..xn, y0..yn`.
fn poly(law: &UniversalWittLaw, s: &str) -> IntPoly {
    let names = law.var_names();
    let ring = Symbolic::integer_polys(names.clone(), law.p()).unwrap();
    let v = Expr::parse(s).unwrap().eval(&ring, &|n| ring.gen(n).ok()).unwrap();
    ring.to_poly(&v).unwrap()
}

#[test]
fn laws_match_golden_files() {
    for (p, n) in [(2, 2), (3, 1), (5, 1)] {
        let law = derive_witt_laws(p, n).unwrap();
        let stored = UniversalWittLaw::from_json(&golden(&format!("witt_p{p}_n{n}.json"))).unwrap();
        assert_eq!(law, stored, "p = {p}, n = {n}");
    }
}

#[test]
fn first_components_are_addition_and_multiplication() {
    for p in [2, 3, 5, 7] {
        let law = universal_law(p, 0).unwrap();
        assert_eq!(law.sum()[0], poly(&law, "x0 + y0"));
        assert_eq!(law.prod()[0], poly(&law, "x0*y0"));
    }
}

#[test]
fn second_components_at_two() {
    // solving s0^2 + 2 s1 = x0^2 + 2 x1 + y0^2 + 2 y1 by hand
    let law = universal_law(2, 1).unwrap();
    assert_eq!(law.sum()[1], poly(&law, "x1 + y1 - x0*y0"));
    assert_eq!(law.prod()[1], poly(&law, "x0^2*y1 + x1*y0^2 + 2*x1*y1"));
}

#[test]
fn derivation_is_independent_of_elimination_order() {
    for (p, n) in [(2, 3), (3, 2), (5, 1)] {
        assert_eq!(derive_witt_laws_with(p, n, EliminationOrder::Mirrored).unwrap(), derive_witt_laws(p, n).unwrap());
    }
}

#[test]
fn small_vectors() {
    let f2 = WittRing::new(Zmod::new(2).unwrap(), 2, 1).unwrap();
    let v = |c: Vec<u64>| f2.vector(c).unwrap();
    assert_eq!(f2.add(&v(vec![1, 0]), &v(vec![1, 0])).unwrap().components, vec![0, 1]);
    assert_eq!(f2.mul(&v(vec![1, 1]), &v(vec![1, 1])).unwrap().components, vec![1, 0]);
    let z = Integers::new();
    assert_eq!(ghost_map(&z, 2, &[BigInt::from(3), BigInt::from(5)]), vec![BigInt::from(3), BigInt::from(19)]);
    assert_eq!(witt_to_residue(2, &[1, 1]), BigInt::from(3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ghost_map_is_a_ring_homomorphism(
        p in prop::sample::select(vec![2u64, 3, 5]),
        raw in prop::collection::vec((-50i64..50, -50i64..50), 1..=4),
    ) {
        let z = Integers::new();
        let level = raw.len() as u32 - 1;
        let w = WittRing::new(z.clone(), p, level).unwrap();
        let x: Vec<BigInt> = raw.iter().map(|r| BigInt::from(r.0)).collect();
        let y: Vec<BigInt> = raw.iter().map(|r| BigInt::from(r.1)).collect();
        let (u, v) = (w.vector(x.clone()).unwrap(), w.vector(y.clone()).unwrap());
        let s = w.add(&u, &v).unwrap();
        let m = w.mul(&u, &v).unwrap();
        let (gx, gy) = (ghost(p, &x), ghost(p, &y));
        let sums: Vec<BigInt> = gx.iter().zip(&gy).map(|(a, b)| a + b).collect();
        let prods: Vec<BigInt> = gx.iter().zip(&gy).map(|(a, b)| a * b).collect();
        prop_assert_eq!(ghost(p, &s.components), sums);
        prop_assert_eq!(ghost(p, &m.components), prods);
        prop_assert_eq!(ghost_map(&z, p, &x), gx);
    }

    #[test]
    fn residue_map_ignores_the_choice_of_lifts(
        p in prop::sample::select(vec![2u64, 3, 5]),
        x in prop::collection::vec(0u64..5, 1..=4),
        shifts in prop::collection::vec(-3i64..3, 4),
    ) {
        let x: Vec<u64> = x.iter().map(|c| c % p).collect();
        let lifts: Vec<BigInt> = x.iter().zip(&shifts).map(|(&c, &s)| BigInt::from(c as i64 + s * p as i64)).collect();
        prop_assert_eq!(witt_to_residue_from_lifts(p, &lifts), witt_to_residue(p, &x));
        prop_assert_eq!(witt_to_residue(p, &x), BigInt::from(witt_residue(p, &x)));
    }
}

/// All vectors of the given length over `F_p`.
fn all_vectors(p: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (0..p).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

#[test]
fn residue_map_is_a_ring_isomorphism() {
    for (p, n) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
        let modulus = p.pow(n + 1);
        let w = WittRing::new(Zmod::new(p).unwrap(), p, n).unwrap();
        let all = all_vectors(p, n as usize + 1);
        let res: Vec<u64> = all.iter().map(|x| witt_residue(p, x)).collect();
        let mut sorted = res.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..modulus).collect::<Vec<_>>());
        for (x, &rx) in all.iter().zip(&res) {
            assert_eq!(residue_to_witt(p, n, &BigInt::from(rx)), *x);
            let u = WittVec { p, components: x.clone() };
            for (y, &ry) in all.iter().zip(&res) {
                let v = WittVec { p, components: y.clone() };
                assert_eq!(witt_residue(p, &w.add(&u, &v).unwrap().components), (rx + ry) % modulus);
                assert_eq!(witt_residue(p, &w.mul(&u, &v).unwrap().components), rx * ry % modulus);
            }
        }
    }
}

#[test]
fn witt_vectors_round_trip_through_json() {
    let w = WittRing::new(Integers::new(), 3, 2).unwrap();
    let u = w.vector(vec![BigInt::from(-4), BigInt::from(7), BigInt::from(0)]).unwrap();
    assert_eq!(w.from_json(&w.to_json(&u)).unwrap(), u);
    let law = universal_law(3, 2).unwrap();
    assert_eq!(UniversalWittLaw::from_json(&law.to_json()).unwrap(), *law);
    assert!(w.vector(vec![BigInt::from(1)]).is_err());
}

#[test]
fn sampled_ring_axioms_over_fp() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for (p, n) in [(3u64, 3u32), (5, 2), (5, 3)] {
        let w = WittRing::new(Zmod::new(p).unwrap(), p, n).unwrap();
        let mut draw = || w.vector((0..=n).map(|_| rng.gen_range(0..p)).collect()).unwrap();
        for _ in 0..200 {
            let (a, b, c) = (draw(), draw(), draw());
            assert_eq!(w.add(&w.add(&a, &b).unwrap(), &c).unwrap(), w.add(&a, &w.add(&b, &c).unwrap()).unwrap());
            assert_eq!(w.mul(&w.mul(&a, &b).unwrap(), &c).unwrap(), w.mul(&a, &w.mul(&b, &c).unwrap()).unwrap());
            assert_eq!(w.mul(&a, &b).unwrap(), w.mul(&b, &a).unwrap());
            let left = w.mul(&a, &w.add(&b, &c).unwrap()).unwrap();
            let right = w.add(&w.mul(&a, &b).unwrap(), &w.mul(&a, &c).unwrap()).unwrap();
            assert_eq!(left, right);
            assert_eq!(w.mul(&a, &w.one()).unwrap(), a);
            assert_eq!(w.add(&a, &w.zero()).unwrap(), a);
        }
    }
}
