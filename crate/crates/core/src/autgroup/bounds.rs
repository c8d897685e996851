//! Degree bookkeeping for the subgroups `Atilde_d(n)`: the smallest `d` an
//! automorphism belongs to, iterate bounds, and the term-by-term estimates
//! used in the closure proof.

use num_bigint::BigInt;

use super::{degree_mod, TruncPoly};
use crate::error::{Error, Result};
use crate::rings::Ring;

fn precision_of<R: Ring>(f: &TruncPoly<R>) -> Result<u32> {
    f.ring()
        .precision()
        .ok_or_else(|| Error::UnsupportedRing(format!("{} is not truncated", f.ring().descriptor())))
}

/// Least `d >= 1` with `f` in `Atilde_d(n)`:
/// `max_m ceil(deg(f mod q^m) / 2^(m-2))` over `2 <= m <= n`.
pub fn min_atilde_degree<R: Ring>(f: &TruncPoly<R>) -> Result<u64> {
    let n = precision_of(f)?;
    let mut d = 1u64;
    for m in 2..=n {
        let deg = degree_mod(f, m)?.unwrap_or(0) as u64;
        d = d.max(deg.div_ceil(1u64 << (m - 2)));
    }
    Ok(d)
}

/// A bound on `deg(f^r)` valid for every `r >= 1`: every iterate stays in
/// `Atilde_D(n)` with `D = min_atilde_degree(f)`, so its degree is at most
/// `2^(n-2) D`.
pub fn iterate_degree_bound<R: Ring>(f: &TruncPoly<R>) -> Result<u64> {
    let n = precision_of(f)?;
    if n < 2 {
        return Ok(1);
    }
    Ok((1u64 << (n - 2)) * min_atilde_degree(f)?)
}

/// The bound `2^(n-2) deg(f mod q^2)` exactly as stated for iterates. It
/// only holds when `f` lies in `Atilde_{deg(f mod q^2)}(n)`; see the tests
/// for an automorphism violating it.
pub fn literal_iterate_bound<R: Ring>(f: &TruncPoly<R>) -> Result<u64> {
    let n = precision_of(f)?;
    if n < 2 {
        return Ok(1);
    }
    Ok((1u64 << (n - 2)) * degree_mod(f, 2)?.unwrap_or(0) as u64)
}

/// One term `q^(i+j) f_i^(j)(g_0)/j! A^j` of the expansion of `psi ∘ psi~`,
/// with its degree and the predicted bound `d_{n-j-1} - j + j d_{n-i-j}`.
#[derive(Clone, Debug)]
pub struct BoundTerm<R: Ring> {
    pub i: u32,
    pub j: u32,
    pub term: TruncPoly<R>,
    pub degree: Option<usize>,
    pub bound: i64,
}

/// Splits `psi = sum_i q^i f_i` (the level of `c T^k`, `k >= 2`, being
/// `min(v(c), k-1)`; the affine part is level 0), expands
/// `psi(g_0 + qA)` with `g_0` the affine part of `psi~`, and returns every
/// term with `0 <= i < n`, `0 <= j < n - i`. The terms sum to the
/// composition.
pub fn bound_terms<R: Ring>(psi: &TruncPoly<R>, psi_t: &TruncPoly<R>) -> Result<Vec<BoundTerm<R>>> {
    let ring = psi.ring();
    if ring != psi_t.ring() {
        return Err(Error::RingMismatch("bound_terms needs a common ring".into()));
    }
    let n = precision_of(psi)?;
    let mut levels: Vec<Vec<(usize, R::Elem)>> = vec![Vec::new(); n as usize];
    for (k, c) in psi.coeffs().iter().enumerate() {
        if ring.is_zero(c) {
            continue;
        }
        let level = if k <= 1 {
            0
        } else {
            let v = ring.q_valuation(c)?.finite().expect("nonzero coefficient");
            v.min(k as u32 - 1)
        };
        levels[level as usize].push((k, c.clone()));
    }
    // d[k] bounds deg mod q^(k+1)
    let mut d = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let a = degree_mod(psi, m)?.unwrap_or(0);
        let b = degree_mod(psi_t, m)?.unwrap_or(0);
        d.push(a.max(b) as i64);
    }
    let dk = |k: i64| -> i64 { d[(k.max(0) as usize).min(d.len() - 1)] };
    let affine = TruncPoly::new(ring, vec![psi_t.coeff(0), psi_t.coeff(1)]);
    let a_part = psi_t.sub(&affine);
    let mut out = Vec::new();
    for i in 0..n {
        let monos = &levels[i as usize];
        let mut a_pow = TruncPoly::constant(ring, ring.one());
        for j in 0..(n - i) {
            let delta: Vec<(usize, R::Elem)> = monos
                .iter()
                .filter(|(k, _)| *k >= j as usize)
                .map(|(k, c)| {
                    let b = num_integer::binomial(BigInt::from(*k), BigInt::from(j));
                    (*k - j as usize, ring.mul(&ring.from_bigint(&b), c))
                })
                .collect();
            let top = delta.iter().map(|(e, _)| *e).max();
            let mut coeffs = vec![ring.zero(); top.map_or(0, |t| t + 1)];
            for (e, c) in delta {
                coeffs[e] = ring.add(&coeffs[e], &c);
            }
            let h = TruncPoly::new(ring, coeffs).compose_unchecked(&affine);
            let term = h.mul(&a_pow);
            let bound = dk(n as i64 - j as i64 - 1) - j as i64 + j as i64 * dk(n as i64 - i as i64 - j as i64);
            out.push(BoundTerm { i, j, degree: term.degree(), term, bound });
            a_pow = a_pow.mul(&a_part);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zmod;

    #[test]
    fn literal_iterate_bound_fails_on_high_valuation_terms() {
        // T + p^2 T^5 mod p^3: degree 1 mod p^2, yet degree 5 itself
        let z = Zmod::prime_power(2, 3).unwrap();
        let f = TruncPoly::from_i64s(&z, &[0, 1, 0, 0, 0, 4]);
        assert_eq!(literal_iterate_bound(&f).unwrap(), 2);
        assert_eq!(f.degree(), Some(5));
        assert_eq!(min_atilde_degree(&f).unwrap(), 3);
        assert_eq!(iterate_degree_bound(&f).unwrap(), 6);
    }

    #[test]
    fn terms_sum_to_composition() {
        let z = Zmod::prime_power(3, 4).unwrap();
        let psi = TruncPoly::from_i64s(&z, &[2, 4, 3, 9, 0, 27, 27]);
        let psi_t = TruncPoly::from_i64s(&z, &[1, 2, 6, 0, 9]);
        let terms = bound_terms(&psi, &psi_t).unwrap();
        let total = terms.iter().fold(TruncPoly::zero(&z), |acc, t| acc.add(&t.term));
        assert_eq!(total, psi.compose(&psi_t).unwrap());
        for t in &terms {
            if let Some(deg) = t.degree {
                assert!(deg as i64 <= t.bound, "term ({}, {}) degree {deg} > {}", t.i, t.j, t.bound);
            }
        }
    }
}
