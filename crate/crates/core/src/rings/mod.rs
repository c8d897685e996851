//! Exact coefficient rings.
//!
//! Every ring implements [`Ring`], which carries both plain ring arithmetic
//! and the q-adic structure (the distinguished element `q`, valuations,
//! exact division by powers of `q`, and change of precision `R/q^n`).
//! Concrete rings are zero-cost to use directly; [`AnyRing`] wraps them for
//! the serialized and command-line surfaces.

mod any;
mod descriptor;
mod integers;
mod rationals;
mod series;
mod symbolic;
mod zmod;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use serde_json::Value;

pub use any::{ring_add, ring_inv, ring_mul, AnyElem, AnyRing};
pub use descriptor::{RingDescriptor, SeriesBase};
pub use integers::Integers;
pub use rationals::Rationals;
pub use series::TruncSeries;
pub use symbolic::{SymElem, SymQ, Symbolic};
pub use zmod::Zmod;

use crate::error::{Error, Result};

/// q-adic valuation: a finite exponent or infinity (for zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinity,
}

impl Valuation {
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinity => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("infinity"),
        }
    }
}

/// A square-zero reduction step `R -> R/I` with `I = (generator)` and
/// `I^2 = 0`. Kernel elements of the induced map on automorphism groups are
/// `T + generator * h(T)` with `h` read in `annihilator_quotient`.
#[derive(Clone, Debug)]
pub struct HalfQuotient<R: Ring> {
    pub quotient: R,
    pub generator: R::Elem,
    pub annihilator_quotient: R,
}

#[allow(clippy::wrong_self_convention)]
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn descriptor(&self) -> RingDescriptor;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `acc <- acc * m + a`, in place where the representation allows.
    fn mul_add_assign(&self, acc: &mut Self::Elem, m: &Self::Elem, a: &Self::Elem) {
        *acc = self.add(&self.mul(acc, m), a);
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplicative inverse; `NotAUnit` otherwise.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inv(a).is_ok()
    }
    fn is_nilpotent(&self, a: &Self::Elem) -> bool;

    /// Whether `a` is a canonical element of this ring.
    fn contains(&self, a: &Self::Elem) -> bool;

    /// The distinguished element `q`.
    fn q(&self) -> Result<Self::Elem>;
    fn q_pow(&self, k: u32) -> Result<Self::Elem> {
        Ok(self.pow(&self.q()?, k as u64))
    }
    /// `Some(n)` when the ring is `R/q^n`; `None` when `q` is not nilpotent.
    fn precision(&self) -> Option<u32>;
    fn q_valuation(&self, a: &Self::Elem) -> Result<Valuation>;
    /// `a / q^k`, checked. In truncated rings the result is the canonical
    /// lift of the quotient, which is only determined modulo `q^(n-k)`.
    fn exact_div_by_q(&self, a: &Self::Elem, k: u32) -> Result<Self::Elem>;
    /// The same ring at precision `n` (`R/q^n`).
    fn with_precision(&self, n: u32) -> Result<Self>;
    /// Moves a canonical element of `from` (same family, any precision) into
    /// this ring: reduction when this ring is coarser, canonical lift when
    /// finer.
    fn coerce_from(&self, from: &Self, a: &Self::Elem) -> Self::Elem;
    /// Characteristic of the residue ring `R/q` when that ring is a finite
    /// field of prime order (the order algorithm relies on it).
    fn residue_characteristic(&self) -> Option<u64>;
    /// Next step of the square-zero filtration, `None` once reduced.
    fn half_quotient(&self) -> Option<HalfQuotient<Self>>;

    /// Number of elements, when finite and small enough to count in a `u64`.
    fn cardinality(&self) -> Option<u64>;
    /// Every element, for finite rings with at most `limit` elements.
    fn elements(&self, limit: u64) -> Option<Vec<Self::Elem>>;
    /// A random element (bounded-height sample for infinite rings).
    fn random_elem<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem;
    fn random_unit<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem {
        loop {
            let a = self.random_elem(rng);
            if self.is_unit(&a) {
                return a;
            }
        }
    }

    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
    fn display(&self, a: &Self::Elem) -> String;

    /// Product of dense coefficient vectors. Rings with a cheaper kernel
    /// override this.
    fn poly_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &t);
            }
        }
        out
    }
}

/// Sum of a slice of elements.
pub fn sum<R: Ring>(ring: &R, items: impl IntoIterator<Item = R::Elem>) -> R::Elem {
    items.into_iter().fold(ring.zero(), |acc, x| ring.add(&acc, &x))
}

/// Random element with probability `zero_bias` of being zero; used to make
/// sampled polynomials sparse.
pub fn random_sparse<R: Ring, G: rand::Rng + ?Sized>(ring: &R, rng: &mut G, zero_bias: f64) -> R::Elem {
    if rng.gen_bool(zero_bias) {
        ring.zero()
    } else {
        ring.random_elem(rng)
    }
}

pub(crate) fn parse_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        Value::Number(n) => n.to_string().parse().map_err(|_| Error::Parse(format!("bad integer {n}"))),
        other => Err(Error::Parse(format!("expected integer string, got {other}"))),
    }
}

/// Trial-division factorisation of a machine-size integer.
pub(crate) fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && factorize(p) == vec![(p, 1)]
}
