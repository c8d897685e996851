//! Reference implementations used as oracles: plain machine-integer
//! arithmetic written independently of the library.
#![allow(dead_code)]

use affaut::autgroup::TruncPoly;
use affaut::rings::Zmod;

pub fn trim(mut v: Vec<i128>) -> Vec<i128> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.len() == 1 && v[0] == 0 {
        v.clear();
    }
    v
}

pub fn mul_mod(a: &[i128], b: &[i128], m: i128) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y).rem_euclid(m);
        }
    }
    trim(out)
}

/// `f(g(T))` modulo `m` by Horner's rule.
pub fn compose_mod(f: &[i128], g: &[i128], m: i128) -> Vec<i128> {
    let mut acc: Vec<i128> = Vec::new();
    for c in f.iter().rev() {
        acc = mul_mod(&acc, g, m);
        if acc.is_empty() {
            acc.push(0);
        }
        acc[0] = (acc[0] + c).rem_euclid(m);
        acc = trim(acc);
    }
    acc
}

pub fn coeffs(f: &TruncPoly<Zmod>) -> Vec<i128> {
    trim(f.coeffs().iter().map(|&c| c as i128).collect())
}

pub fn zpoly(ring: &Zmod, c: &[i128]) -> TruncPoly<Zmod> {
    let m = ring.modulus() as i128;
    TruncPoly::new(ring, c.iter().map(|x| x.rem_euclid(m) as u64).collect())
}

/// Degree of `f` after reducing its coefficients modulo `m`.
pub fn degree_mod(f: &[i128], m: i128) -> usize {
    f.iter().rposition(|c| c.rem_euclid(m) != 0).unwrap_or(0)
}

/// `sum_i p^i x_i^(p^(n-i)) mod p^(n+1)` for components `x_0..x_n`.
pub fn witt_residue(p: u64, x: &[u64]) -> u64 {
    let n = x.len() as u32 - 1;
    let m = (p as u128).pow(n + 1);
    let mut acc = 0u128;
    for (i, &xi) in x.iter().enumerate() {
        let mut pw = 1u128;
        for _ in 0..p.pow(n - i as u32) {
            pw = pw * xi as u128 % m;
        }
        acc = (acc + (p as u128).pow(i as u32) * pw) % m;
    }
    acc as u64
}

/// Ghost components of an integer vector.
pub fn ghost(p: u64, x: &[num_bigint::BigInt]) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    (0..x.len())
        .map(|j| {
            (0..=j).fold(BigInt::from(0), |acc, i| {
                acc + BigInt::from(p).pow(i as u32) * x[i].pow(p.pow((j - i) as u32) as u32)
            })
        })
        .collect()
}

/// Prime factorisation by trial division.
pub fn factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// A polynomial is invertible under composition over `Z/m` iff over each
/// `Z/p^e` the linear coefficient is a unit and higher ones are divisible
/// by `p`.
pub fn is_automorphism_crt(f: &[i128], m: u64) -> bool {
    factor(m).iter().all(|&(p, _)| {
        let p = p as i128;
        f.get(1).is_some_and(|a| a.rem_euclid(p) != 0) && f.iter().skip(2).all(|c| c.rem_euclid(p) == 0)
    })
}
