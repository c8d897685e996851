//! Polynomial automorphisms of the affine line over `R/q^n` and `Z/m`
//! under composition.

mod bounds;
mod filtration;
mod kernel;
mod poly;

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

pub use bounds::{iterate_degree_bound, bound_terms, literal_iterate_bound, min_atilde_degree, BoundTerm};
pub use filtration::{
    check_abelian_ideal_kernel, check_abelian_kernel, composition_series, FiltrationStep, KernelCheck, KernelVerdict,
    Level,
};
pub use kernel::{from_kernel_coordinates, kernel_coordinates};
pub use poly::TruncPoly;

use crate::error::{Error, Result};
use crate::rings::Ring;

/// Default cap for [`order`].
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// `f` is invertible under composition iff its linear coefficient is a unit
/// and every coefficient of degree at least two is nilpotent.
pub fn is_automorphism<R: Ring>(f: &TruncPoly<R>) -> bool {
    let ring = f.ring();
    let c = f.coeffs();
    c.len() >= 2 && ring.is_unit(&c[1]) && c[2..].iter().all(|x| ring.is_nilpotent(x))
}

/// A polynomial validated by [`is_automorphism`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutMap<R: Ring>(TruncPoly<R>);

impl<R: Ring> AutMap<R> {
    pub fn new(f: TruncPoly<R>) -> Result<Self> {
        if is_automorphism(&f) {
            Ok(AutMap(f))
        } else {
            Err(Error::NotAnAutomorphism(f.display()))
        }
    }

    pub fn identity(ring: &R) -> Self {
        AutMap(TruncPoly::identity(ring))
    }

    pub fn poly(&self) -> &TruncPoly<R> {
        &self.0
    }

    pub fn into_poly(self) -> TruncPoly<R> {
        self.0
    }

    /// Group product `self ∘ other`.
    pub fn then_apply(&self, other: &Self) -> Result<Self> {
        Ok(AutMap(self.0.compose(&other.0)?))
    }
}

impl<R: Ring> Deref for AutMap<R> {
    type Target = TruncPoly<R>;

    fn deref(&self) -> &TruncPoly<R> {
        &self.0
    }
}

/// Degree of `f mod q^m`; `None` when that reduction is zero.
pub fn degree_mod<R: Ring>(f: &TruncPoly<R>, m: u32) -> Result<Option<usize>> {
    let ring = f.ring();
    if let Some(n) = ring.precision() {
        if m == 0 || m > n {
            return Err(Error::OutOfRange(format!("m = {m} outside 1..={n}")));
        }
    } else if m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if !ring.q_valuation(c)?.at_least(m) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Subgroups of the automorphism group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    Full,
    /// `a_0 + a_1 T + q a_2 T^2 + ... + q^(d-1) a_d T^d`.
    A(u32),
    /// `deg(f mod q^m) <= d 2^(m-2)` for `2 <= m <= n`.
    Atilde(u32),
    /// Kernel of `A_n(R/q^n) -> A_n(R/q^r)`.
    N { n: u32, r: u32 },
    /// Kernel of `Aut(R/q^n) -> Aut(R/q^r)`.
    K { n: u32, r: u32 },
}

impl SubgroupSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SubgroupSpec::A(0) | SubgroupSpec::Atilde(0) => Err(Error::OutOfRange("d must be at least 1".into())),
            SubgroupSpec::N { n, r } | SubgroupSpec::K { n, r } if r == 0 || r > n => {
                Err(Error::OutOfRange(format!("kernel parameters need 1 <= r <= n (n={n}, r={r})")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::Full => write!(f, "full"),
            SubgroupSpec::A(d) => write!(f, "A:{d}"),
            SubgroupSpec::Atilde(d) => write!(f, "Atilde:{d}"),
            SubgroupSpec::N { n, r } => write!(f, "N:{n}:{r}"),
            SubgroupSpec::K { n, r } => write!(f, "K:{n}:{r}"),
        }
    }
}

impl FromStr for SubgroupSpec {
    type Err = Error;

    /// `full`, `A:<d>`, `Atilde:<d>`, `N:<n>:<r>`, `K:<n>:<r>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad subgroup spec {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.parse::<u32>().map_err(|_| bad());
        let spec = match parts.as_slice() {
            ["full" | "Full"] => SubgroupSpec::Full,
            ["A", d] => SubgroupSpec::A(num(d)?),
            ["Atilde", d] => SubgroupSpec::Atilde(num(d)?),
            ["N", n, r] => SubgroupSpec::N { n: num(n)?, r: num(r)? },
            ["K", n, r] => SubgroupSpec::K { n: num(n)?, r: num(r)? },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn has_a_shape<R: Ring>(f: &TruncPoly<R>, d: u32) -> Result<bool> {
    if f.degree().unwrap_or(0) > d as usize {
        return Ok(false);
    }
    for (i, c) in f.coeffs().iter().enumerate().skip(2) {
        if !f.ring().q_valuation(c)?.at_least(i as u32 - 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn congruent_to_identity<R: Ring>(f: &TruncPoly<R>, r: u32) -> Result<bool> {
    let ring = f.ring();
    let diff = f.sub(&TruncPoly::identity(ring));
    for c in diff.coeffs() {
        if !ring.q_valuation(c)?.at_least(r) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of an automorphism in a subgroup.
pub fn member<R: Ring>(f: &TruncPoly<R>, spec: SubgroupSpec) -> Result<bool> {
    spec.validate()?;
    if !is_automorphism(f) {
        return Err(Error::PreconditionFailed(format!("{} is not an automorphism", f.display())));
    }
    let precision = f.ring().precision();
    match spec {
        SubgroupSpec::Full => Ok(true),
        SubgroupSpec::A(d) => has_a_shape(f, d),
        SubgroupSpec::Atilde(d) => {
            let n = precision.ok_or_else(|| Error::UnsupportedRing("Atilde needs a truncated ring".into()))?;
            for m in 2..=n {
                let bound = d as u64 * (1u64 << (m - 2));
                if degree_mod(f, m)?.unwrap_or(0) as u64 > bound {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        SubgroupSpec::N { n, r } | SubgroupSpec::K { n, r } => {
            if precision.is_some_and(|p| n > p) {
                return Err(Error::OutOfRange(format!("n = {n} exceeds the ring precision")));
            }
            if matches!(spec, SubgroupSpec::N { .. }) && !has_a_shape(f, n)? {
                return Ok(false);
            }
            congruent_to_identity(f, r)
        }
    }
}

/// `f^r` under composition, by repeated squaring; `f^0 = T`.
pub fn iterate<R: Ring>(f: &TruncPoly<R>, mut r: u64) -> TruncPoly<R> {
    let mut acc = TruncPoly::identity(f.ring());
    let mut base = f.clone();
    while r > 0 {
        if r & 1 == 1 {
            acc = acc.compose_unchecked(&base);
        }
        r >>= 1;
        if r > 0 {
            base = base.compose_unchecked(&base);
        }
    }
    acc
}

/// Least `k >= 1` with `f^k = T`, or `NotFoundWithinCap`.
///
/// Over `R/q^n` with residue field `F_p` the order is `k0 * p^s` where `k0`
/// is the order of the affine reduction mod `q`; `p^s` is found by repeated
/// `p`-th powers inside the `p`-group `K_{n,1}`. Other finite rings fall
/// back to plain iteration.
pub fn order<R: Ring>(f: &TruncPoly<R>, cap: u64) -> Result<u64> {
    let ring = f.ring();
    if ring.cardinality().is_none() {
        return Err(Error::InfiniteCoefficientRing(ring.descriptor().to_string()));
    }
    if !is_automorphism(f) {
        return Err(Error::NotAnAutomorphism(f.display()));
    }
    if cap == 0 {
        return Err(Error::OutOfRange("cap must be at least 1".into()));
    }
    match (ring.residue_characteristic(), ring.precision()) {
        (Some(p), Some(_)) => {
            let reduced = f.reduce_precision(1)?;
            let mut k0 = 1u64;
            let mut g = reduced.clone();
            while !g.is_identity() {
                g = g.compose_unchecked(&reduced);
                k0 += 1;
                if k0 > cap {
                    return Err(Error::NotFoundWithinCap { cap });
                }
            }
            let mut k = k0;
            let mut h = iterate(f, k0);
            while !h.is_identity() {
                h = iterate(&h, p);
                k = k.checked_mul(p).ok_or(Error::NotFoundWithinCap { cap })?;
                if k > cap {
                    return Err(Error::NotFoundWithinCap { cap });
                }
            }
            Ok(k)
        }
        _ => {
            let mut g = f.clone();
            let mut k = 1u64;
            while !g.is_identity() {
                k += 1;
                if k > cap {
                    return Err(Error::NotFoundWithinCap { cap });
                }
                g = g.compose_unchecked(f);
            }
            Ok(k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{TruncSeries, Zmod};

    #[test]
    fn degree_mod_examples() {
        let z8 = Zmod::new(8).unwrap();
        let f = TruncPoly::from_i64s(&z8, &[1, 1, 0, 2]);
        assert_eq!(degree_mod(&f, 1).unwrap(), Some(1));
        assert_eq!(degree_mod(&f, 2).unwrap(), Some(3));
        assert!(degree_mod(&f, 4).is_err());
        let z27 = Zmod::new(27).unwrap();
        let g = TruncPoly::from_i64s(&z27, &[0, 1, 0, 0, 0, 9]);
        assert_eq!(degree_mod(&g, 2).unwrap(), Some(1));
    }

    #[test]
    fn automorphism_examples() {
        for p in [2i64, 3, 5] {
            let z = Zmod::new((p * p * p * p) as u64).unwrap();
            let f = TruncPoly::from_i64s(&z, &[1, 1, p, p * p, p * p * p]);
            assert!(is_automorphism(&f));
        }
        let z9 = Zmod::new(9).unwrap();
        assert!(!is_automorphism(&TruncPoly::from_i64s(&z9, &[0, 1, 1])));
        assert!(is_automorphism(&TruncPoly::identity(&z9)));
        assert!(AutMap::new(TruncPoly::zero(&z9)).is_err());
    }

    #[test]
    fn translation_orders() {
        for (p, n) in [(2u64, 3u32), (3, 2), (5, 2)] {
            let z = Zmod::prime_power(p, n).unwrap();
            let f = TruncPoly::from_i64s(&z, &[1, 1]);
            assert_eq!(order(&f, DEFAULT_ORDER_CAP).unwrap(), p.pow(n));
            assert_eq!(iterate(&f, 7), TruncPoly::from_i64s(&z, &[7, 1]));
        }
        let z16 = Zmod::new(16).unwrap();
        let f = TruncPoly::from_i64s(&z16, &[1, 1, 2, 4, 8]);
        let k = order(&f, DEFAULT_ORDER_CAP).unwrap();
        assert!(iterate(&f, k).is_identity());
        let brute = (1..=k).find(|&j| iterate(&f, j).is_identity()).unwrap();
        assert_eq!(brute, k);
    }

    #[test]
    fn order_errors() {
        let q = TruncSeries::rationals(3).unwrap();
        let f = TruncPoly::identity(&q);
        assert!(matches!(order(&f, 10), Err(Error::InfiniteCoefficientRing(_))));
        let z = Zmod::new(1 << 20).unwrap();
        let f = TruncPoly::from_i64s(&z, &[1, 1]);
        assert!(matches!(order(&f, 1000), Err(Error::NotFoundWithinCap { cap: 1000 })));
    }

    #[test]
    fn membership_examples() {
        let z4 = Zmod::new(4).unwrap();
        let f = TruncPoly::from_i64s(&z4, &[0, 1, 0, 2]);
        assert!(!member(&f, SubgroupSpec::Atilde(2)).unwrap());
        assert!(member(&f, SubgroupSpec::Atilde(3)).unwrap());
        assert!(member(&TruncPoly::identity(&z4), SubgroupSpec::A(1)).unwrap());
        let bad = TruncPoly::from_i64s(&z4, &[0, 2]);
        assert!(matches!(member(&bad, SubgroupSpec::Full), Err(Error::PreconditionFailed(_))));
        assert_eq!("N:4:2".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::N { n: 4, r: 2 });
        assert!("K:2:3".parse::<SubgroupSpec>().is_err());
    }
}
