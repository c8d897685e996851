//! Coordinates on `N_d = ker(A_d -> A_{d-1})`: the element
//! `T + q^(d-1) (a_0 + a_1 T + ... + a_d T^d) mod q^d` has coordinates
//! `(a_0, ..., a_d)` in `R/q`, and composition becomes addition.

use super::TruncPoly;
use crate::error::{Error, Result};
use crate::rings::Ring;

fn check_precision<R: Ring>(ring: &R, d: u32) -> Result<R> {
    if d < 2 {
        return Err(Error::OutOfRange("N_d coordinates need d >= 2".into()));
    }
    if ring.precision() != Some(d) {
        return Err(Error::PreconditionFailed(format!("N_{d} lives over R/q^{d}, got {}", ring.descriptor())));
    }
    ring.with_precision(1)
}

/// The `d + 1` coordinates of `f` in `R/q`.
pub fn kernel_coordinates<R: Ring>(f: &TruncPoly<R>, d: u32) -> Result<Vec<R::Elem>> {
    let ring = f.ring();
    let residue = check_precision(ring, d)?;
    let diff = f.sub(&TruncPoly::identity(ring));
    if diff.degree().is_some_and(|deg| deg > d as usize) {
        return Err(Error::KernelMismatch(format!("{} has degree above {d}", f.display())));
    }
    (0..=d as usize)
        .map(|i| {
            let c = diff.coeff(i);
            let h = ring
                .exact_div_by_q(&c, d - 1)
                .map_err(|_| Error::KernelMismatch(format!("{} is not T mod q^{}", f.display(), d - 1)))?;
            Ok(residue.coerce_from(ring, &h))
        })
        .collect()
}

/// Inverse of [`kernel_coordinates`].
pub fn from_kernel_coordinates<R: Ring>(ring: &R, d: u32, coords: &[R::Elem]) -> Result<TruncPoly<R>> {
    let residue = check_precision(ring, d)?;
    if coords.len() != d as usize + 1 {
        return Err(Error::ShapeMismatch(format!("expected {} coordinates, got {}", d + 1, coords.len())));
    }
    let qd = ring.q_pow(d - 1)?;
    let h: Vec<R::Elem> = coords.iter().map(|c| ring.mul(&qd, &ring.coerce_from(&residue, c))).collect();
    Ok(TruncPoly::new(ring, h).add(&TruncPoly::identity(ring)))
}
