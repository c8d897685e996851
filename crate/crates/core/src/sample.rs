//! Random elements of the automorphism group and its subgroups.

use crate::autgroup::TruncPoly;
use crate::error::{Error, Result};
use crate::rings::Ring;

const NILPOTENT_TRIES: usize = 10_000;

/// A random nilpotent element: `q` times a random element when the ring is
/// q-adic, otherwise by rejection.
pub fn random_nilpotent<R: Ring, G: rand::Rng + ?Sized>(ring: &R, rng: &mut G) -> Result<R::Elem> {
    if ring.precision().is_some() {
        return Ok(ring.mul(&ring.q()?, &ring.random_elem(rng)));
    }
    for _ in 0..NILPOTENT_TRIES {
        let x = ring.random_elem(rng);
        if ring.is_nilpotent(&x) {
            return Ok(x);
        }
    }
    Ok(ring.zero())
}

/// `a_0 + a_1 T + ... + a_d T^d` with `a_1` a unit and nilpotent `a_i`,
/// `i >= 2`.
pub fn random_automorphism<R: Ring, G: rand::Rng + ?Sized>(ring: &R, degree: usize, rng: &mut G) -> Result<TruncPoly<R>> {
    let mut c = vec![ring.random_elem(rng), ring.random_unit(rng)];
    for _ in 2..=degree {
        c.push(random_nilpotent(ring, rng)?);
    }
    Ok(TruncPoly::new(ring, c))
}

fn precision<R: Ring>(ring: &R) -> Result<u32> {
    ring.precision()
        .ok_or_else(|| Error::UnsupportedRing(format!("{} is not truncated", ring.descriptor())))
}

/// A random element of `A_d`: `a_i` divisible by `q^(i-1)`, degree at most `d`.
pub fn random_a_d<R: Ring, G: rand::Rng + ?Sized>(ring: &R, d: u32, rng: &mut G) -> Result<TruncPoly<R>> {
    let n = precision(ring)?;
    let mut c = vec![ring.random_elem(rng), ring.random_unit(rng)];
    for i in 2..=d {
        c.push(if i > n { ring.zero() } else { ring.mul(&ring.q_pow(i - 1)?, &ring.random_elem(rng)) });
    }
    Ok(TruncPoly::new(ring, c))
}

/// Least valuation a degree-`k` coefficient needs for membership in
/// `Atilde_d(n)`; `n` or more means the coefficient vanishes.
pub fn atilde_valuation(k: u64, d: u32, n: u32) -> u32 {
    if k <= 1 {
        return 0;
    }
    let mut v = 1;
    for m in 2..=n {
        if k > d as u64 * (1u64 << (m - 2)) {
            v = m;
        }
    }
    v
}

/// A random element of `Atilde_d(n)`, of degree up to `2^(n-2) d`. Each
/// coefficient is zeroed with probability `sparsity`.
pub fn random_atilde<R: Ring, G: rand::Rng + ?Sized>(ring: &R, d: u32, sparsity: f64, rng: &mut G) -> Result<TruncPoly<R>> {
    let n = precision(ring)?;
    let top = if n >= 2 { d as u64 * (1u64 << (n - 2)) } else { 1 };
    let mut c = vec![ring.random_elem(rng), ring.random_unit(rng)];
    for k in 2..=top {
        let v = atilde_valuation(k, d, n);
        if v >= n || rng.gen_bool(sparsity) {
            c.push(ring.zero());
        } else {
            c.push(ring.mul(&ring.q_pow(v)?, &ring.random_elem(rng)));
        }
    }
    Ok(TruncPoly::new(ring, c))
}

/// A random element `T + q^r h(T)` of `K_{n,r}` with `deg h <= degree`.
pub fn random_kernel<R: Ring, G: rand::Rng + ?Sized>(ring: &R, r: u32, degree: usize, rng: &mut G) -> Result<TruncPoly<R>> {
    let qr = ring.q_pow(r)?;
    let h: Vec<R::Elem> = (0..=degree).map(|_| ring.mul(&qr, &ring.random_elem(rng))).collect();
    Ok(TruncPoly::new(ring, h).add(&TruncPoly::identity(ring)))
}
