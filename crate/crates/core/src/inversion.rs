//! Compositional inverses: a recursion through square-zero quotients, and
//! an independent q-adic Newton lifting used to cross-check it.

use crate::autgroup::{is_automorphism, iterate_degree_bound, AutMap, TruncPoly};
use crate::error::{Error, Result};
use crate::rings::Ring;

/// The inverse of an affine map `a_0 + a_1 T`.
pub fn affine_inverse<R: Ring>(ring: &R, a0: &R::Elem, a1: &R::Elem) -> Result<TruncPoly<R>> {
    let u = ring.inv(a1)?;
    Ok(TruncPoly::new(ring, vec![ring.neg(&ring.mul(&u, a0)), u]))
}

/// Reinterprets `f` over `target`, coefficient by coefficient, through
/// canonical representatives.
pub fn lift_aut<R: Ring>(f: &AutMap<R>, target: &R) -> Result<AutMap<R>> {
    AutMap::new(f.change_ring(target))
}

/// Reduction of `f` to precision `r`.
pub fn reduce_aut<R: Ring>(f: &AutMap<R>, r: u32) -> Result<AutMap<R>> {
    AutMap::new(f.reduce_precision(r)?)
}

/// Inverse of an automorphism.
pub fn invert<R: Ring>(f: &TruncPoly<R>) -> Result<TruncPoly<R>> {
    invert_traced(f).map(|(g, _)| g)
}

/// Inverse together with the recursion depth, which is the number of
/// square-zero quotients taken before the ring becomes reduced
/// (`ceil(log2 n)` over `R/q^n`).
pub fn invert_traced<R: Ring>(f: &TruncPoly<R>) -> Result<(TruncPoly<R>, u32)> {
    if !is_automorphism(f) {
        return Err(Error::NotAnAutomorphism(f.display()));
    }
    Ok(recurse(f))
}

fn recurse<R: Ring>(f: &TruncPoly<R>) -> (TruncPoly<R>, u32) {
    let ring = f.ring();
    let Some(hq) = ring.half_quotient() else {
        let g = affine_inverse(ring, &f.coeff(0), &f.coeff(1)).expect("linear coefficient is a unit");
        return (g, 0);
    };
    let (phi, depth) = recurse(&f.change_ring(&hq.quotient));
    let phi = phi.change_ring(ring);
    let k = f.compose_unchecked(&phi);
    (phi.compose_unchecked(&kernel_inverse(&k)), depth + 1)
}

/// `T - h` for `k = T + h` with `h` in a square-zero ideal.
fn kernel_inverse<R: Ring>(k: &TruncPoly<R>) -> TruncPoly<R> {
    let t = TruncPoly::identity(k.ring());
    t.add(&t).sub(k)
}

/// Inverse of `f = T + q^r h` in `K_{n,r}` by negation, valid for `2r >= n`.
pub fn invert_kernel<R: Ring>(f: &TruncPoly<R>, r: u32) -> Result<TruncPoly<R>> {
    let ring = f.ring();
    let n = ring
        .precision()
        .ok_or_else(|| Error::UnsupportedRing(format!("{} is not truncated", ring.descriptor())))?;
    if 2 * r < n {
        return Err(Error::NotAbelian { n, r });
    }
    let h = f.sub(&TruncPoly::identity(ring));
    for c in h.coeffs() {
        if !ring.q_valuation(c)?.at_least(r) {
            return Err(Error::KernelMismatch(format!("{} is not T mod q^{r}", f.display())));
        }
    }
    Ok(kernel_inverse(f))
}

/// Inverse by Newton lifting: start from the affine inverse mod `q` and fix
/// one power of `q` at a time, `g <- g - q^k a_1^{-1} ((f∘g - T)/q^k mod q)`.
/// The candidate degree is capped by the iterate bound of `f`.
pub fn oracle_invert<R: Ring>(f: &TruncPoly<R>) -> Result<TruncPoly<R>> {
    if !is_automorphism(f) {
        return Err(Error::NotAnAutomorphism(f.display()));
    }
    let ring = f.ring();
    let n = ring
        .precision()
        .ok_or_else(|| Error::UnsupportedRing(format!("{} is not truncated", ring.descriptor())))?;
    let residue = ring.with_precision(1)?;
    let a1 = residue.coerce_from(ring, &f.coeff(1));
    let a0 = residue.coerce_from(ring, &f.coeff(0));
    let u = ring.coerce_from(&residue, &residue.inv(&a1)?);
    let bound = iterate_degree_bound(f)? as usize;
    let mut g = affine_inverse(&residue, &a0, &a1)?.change_ring(ring);
    let t = TruncPoly::identity(ring);
    for k in 1..n {
        let err = f.compose_unchecked(&g).sub(&t);
        let mut delta = Vec::with_capacity(err.coeffs().len());
        for c in err.coeffs() {
            let e = ring
                .exact_div_by_q(c, k)
                .map_err(|_| Error::NoSolution(format!("error term not divisible by q^{k}")))?;
            let e = ring.coerce_from(&residue, &residue.coerce_from(ring, &e));
            delta.push(ring.neg(&ring.mul(&u, &e)));
        }
        let step = TruncPoly::new(ring, delta).scale(&ring.q_pow(k)?);
        g = g.add(&step);
        if g.degree().unwrap_or(0) > bound {
            return Err(Error::NoSolution(format!("candidate degree exceeds {bound}")));
        }
    }
    if !f.compose_unchecked(&g).is_identity() || !g.compose_unchecked(f).is_identity() {
        return Err(Error::NoSolution(format!("lifted candidate does not invert {}", f.display())));
    }
    Ok(g)
}

impl<R: Ring> AutMap<R> {
    pub fn inverse(&self) -> AutMap<R> {
        AutMap::new(recurse(self.poly()).0).expect("inverse of an automorphism")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zmod;

    #[test]
    fn affine_and_self_inverse_examples() {
        let z25 = Zmod::new(25).unwrap();
        let f = TruncPoly::from_i64s(&z25, &[3, 2]);
        assert_eq!(invert(&f).unwrap(), TruncPoly::from_i64s(&z25, &[11, 13]));
        let z4 = Zmod::new(4).unwrap();
        let f = TruncPoly::from_i64s(&z4, &[1, 1, 2]);
        assert_eq!(invert(&f).unwrap(), f);
        assert_eq!(oracle_invert(&f).unwrap(), f);
    }

    #[test]
    fn depth_is_ceil_log2() {
        for (n, depth) in [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)] {
            let z = Zmod::prime_power(3, n).unwrap();
            let f = TruncPoly::from_i64s(&z, &[1, 2, 3, 3]);
            let (g, d) = invert_traced(&f).unwrap();
            assert_eq!(d, depth, "n = {n}");
            assert!(f.compose(&g).unwrap().is_identity());
        }
    }

    #[test]
    fn composite_modulus() {
        let z = Zmod::new(72).unwrap();
        let f = TruncPoly::from_i64s(&z, &[5, 7, 6, 12, 30]);
        let g = invert(&f).unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        assert!(g.compose(&f).unwrap().is_identity());
    }

    #[test]
    fn kernel_negation() {
        let z = Zmod::prime_power(2, 4).unwrap();
        let f = TruncPoly::from_i64s(&z, &[4, 1, 12]);
        assert_eq!(invert_kernel(&f, 2).unwrap(), TruncPoly::from_i64s(&z, &[12, 1, 4]));
        assert!(matches!(invert_kernel(&f, 1), Err(Error::NotAbelian { .. })));
    }
}
