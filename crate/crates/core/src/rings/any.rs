use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use super::{
    HalfQuotient, Integers, Rationals, Ring, RingDescriptor, SeriesBase, SymElem, Symbolic, TruncSeries, Valuation,
    Zmod,
};
use crate::error::{Error, Result};

/// Any supported coefficient ring, chosen at run time from a
/// [`RingDescriptor`].
#[derive(Clone, Debug, PartialEq)]
pub enum AnyRing {
    Integers(Integers),
    Zmod(Zmod),
    Rationals(Rationals),
    SeriesFp(TruncSeries<Zmod>),
    SeriesQ(TruncSeries<Rationals>),
    Symbolic(Symbolic),
}

/// An element of an [`AnyRing`]; the variant must match the ring's.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnyElem {
    Integers(BigInt),
    Zmod(u64),
    Rationals(BigRational),
    SeriesFp(Vec<u64>),
    SeriesQ(Vec<BigRational>),
    Symbolic(SymElem),
}

/// Runs `$body` with the concrete ring bound to `$r`.
macro_rules! on_ring {
    ($self:expr, |$r:ident| $body:expr) => {
        match $self {
            AnyRing::Integers($r) => $body,
            AnyRing::Zmod($r) => $body,
            AnyRing::Rationals($r) => $body,
            AnyRing::SeriesFp($r) => $body,
            AnyRing::SeriesQ($r) => $body,
            AnyRing::Symbolic($r) => $body,
        }
    };
}

/// Like `on_ring!`, wrapping an element result back into `AnyElem`.
macro_rules! ring_elem {
    ($self:expr, |$r:ident| $body:expr) => {
        match $self {
            AnyRing::Integers($r) => AnyElem::Integers($body),
            AnyRing::Zmod($r) => AnyElem::Zmod($body),
            AnyRing::Rationals($r) => AnyElem::Rationals($body),
            AnyRing::SeriesFp($r) => AnyElem::SeriesFp($body),
            AnyRing::SeriesQ($r) => AnyElem::SeriesQ($body),
            AnyRing::Symbolic($r) => AnyElem::Symbolic($body),
        }
    };
}

/// Destructures a ring and one element of the same kind.
macro_rules! unary {
    ($self:expr, $a:expr, |$r:ident, $x:ident| $body:expr, $wrap:ident) => {
        match ($self, $a) {
            (AnyRing::Integers($r), AnyElem::Integers($x)) => $wrap!(Integers, $body),
            (AnyRing::Zmod($r), AnyElem::Zmod($x)) => $wrap!(Zmod, $body),
            (AnyRing::Rationals($r), AnyElem::Rationals($x)) => $wrap!(Rationals, $body),
            (AnyRing::SeriesFp($r), AnyElem::SeriesFp($x)) => $wrap!(SeriesFp, $body),
            (AnyRing::SeriesQ($r), AnyElem::SeriesQ($x)) => $wrap!(SeriesQ, $body),
            (AnyRing::Symbolic($r), AnyElem::Symbolic($x)) => $wrap!(Symbolic, $body),
            (r, x) => panic!("element {x:?} does not belong to {}", r.descriptor()),
        }
    };
}

/// Destructures a ring and two elements of the same kind.
macro_rules! binary {
    ($self:expr, $a:expr, $b:expr, |$r:ident, $x:ident, $y:ident| $body:expr, $wrap:ident) => {
        match ($self, $a, $b) {
            (AnyRing::Integers($r), AnyElem::Integers($x), AnyElem::Integers($y)) => $wrap!(Integers, $body),
            (AnyRing::Zmod($r), AnyElem::Zmod($x), AnyElem::Zmod($y)) => $wrap!(Zmod, $body),
            (AnyRing::Rationals($r), AnyElem::Rationals($x), AnyElem::Rationals($y)) => $wrap!(Rationals, $body),
            (AnyRing::SeriesFp($r), AnyElem::SeriesFp($x), AnyElem::SeriesFp($y)) => $wrap!(SeriesFp, $body),
            (AnyRing::SeriesQ($r), AnyElem::SeriesQ($x), AnyElem::SeriesQ($y)) => $wrap!(SeriesQ, $body),
            (AnyRing::Symbolic($r), AnyElem::Symbolic($x), AnyElem::Symbolic($y)) => $wrap!(Symbolic, $body),
            (r, x, y) => panic!("elements {x:?}, {y:?} do not both belong to {}", r.descriptor()),
        }
    };
}

macro_rules! elem {
    ($v:ident, $e:expr) => {
        AnyElem::$v($e)
    };
}
macro_rules! elem_res {
    ($v:ident, $e:expr) => {
        ($e).map(AnyElem::$v)
    };
}
macro_rules! plain {
    ($v:ident, $e:expr) => {
        $e
    };
}

fn unwrap_slice<'a>(ring: &AnyRing, xs: &'a [AnyElem]) -> Vec<&'a AnyElem> {
    for x in xs {
        let ok = matches!(
            (ring, x),
            (AnyRing::Integers(_), AnyElem::Integers(_))
                | (AnyRing::Zmod(_), AnyElem::Zmod(_))
                | (AnyRing::Rationals(_), AnyElem::Rationals(_))
                | (AnyRing::SeriesFp(_), AnyElem::SeriesFp(_))
                | (AnyRing::SeriesQ(_), AnyElem::SeriesQ(_))
                | (AnyRing::Symbolic(_), AnyElem::Symbolic(_))
        );
        assert!(ok, "element {x:?} does not belong to {}", ring.descriptor());
    }
    xs.iter().collect()
}

impl AnyRing {
    pub fn from_descriptor(d: &RingDescriptor) -> Result<Self> {
        let int = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::InvalidRing(format!("{s:?} is not a machine-size integer")))
        };
        match d {
            RingDescriptor::Integers { p: None } => Ok(AnyRing::Integers(Integers::new())),
            RingDescriptor::Integers { p: Some(p) } => Ok(AnyRing::Integers(Integers::with_q(int(p)?)?)),
            RingDescriptor::Zmod { m, p, n } => {
                let ring = Zmod::new(int(m)?)?;
                if let Some(p) = p {
                    if ring.prime() != Some(int(p)?) || n.is_some_and(|n| ring.precision() != Some(n)) {
                        return Err(Error::InvalidRing(format!("Z/{m} does not carry q = {p} with the stated n")));
                    }
                }
                Ok(AnyRing::Zmod(ring))
            }
            RingDescriptor::Rationals => Ok(AnyRing::Rationals(Rationals)),
            RingDescriptor::TruncSeries { base: SeriesBase::Rationals, e, .. } => {
                Ok(AnyRing::SeriesQ(TruncSeries::rationals(*e)?))
            }
            RingDescriptor::TruncSeries { base: SeriesBase::PrimeField, p, e } => {
                let p = p.as_deref().ok_or_else(|| Error::InvalidRing("prime field series without p".into()))?;
                Ok(AnyRing::SeriesFp(TruncSeries::fp(int(p)?, *e)?))
            }
            RingDescriptor::Symbolic { .. } => Ok(AnyRing::Symbolic(Symbolic::from_descriptor(d)?)),
        }
    }

    pub fn parse_flag(s: &str) -> Result<Self> {
        Self::from_descriptor(&RingDescriptor::parse_flag(s)?)
    }

    /// Whether `a` is a canonical element of this ring (right kind, reduced).
    pub fn owns(&self, a: &AnyElem) -> bool {
        match (self, a) {
            (AnyRing::Integers(r), AnyElem::Integers(x)) => r.contains(x),
            (AnyRing::Zmod(r), AnyElem::Zmod(x)) => r.contains(x),
            (AnyRing::Rationals(r), AnyElem::Rationals(x)) => r.contains(x),
            (AnyRing::SeriesFp(r), AnyElem::SeriesFp(x)) => r.contains(x),
            (AnyRing::SeriesQ(r), AnyElem::SeriesQ(x)) => r.contains(x),
            (AnyRing::Symbolic(r), AnyElem::Symbolic(x)) => r.contains(x),
            _ => false,
        }
    }

    fn check(&self, a: &AnyElem) -> Result<()> {
        if self.owns(a) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{a:?} is not an element of {}", self.descriptor())))
        }
    }
}

/// `a + b`, checking that both operands live in `ring`.
pub fn ring_add(ring: &AnyRing, a: &AnyElem, b: &AnyElem) -> Result<AnyElem> {
    ring.check(a)?;
    ring.check(b)?;
    Ok(ring.add(a, b))
}

/// `a * b`, checking that both operands live in `ring`.
pub fn ring_mul(ring: &AnyRing, a: &AnyElem, b: &AnyElem) -> Result<AnyElem> {
    ring.check(a)?;
    ring.check(b)?;
    Ok(ring.mul(a, b))
}

/// Multiplicative inverse, checking membership first.
pub fn ring_inv(ring: &AnyRing, a: &AnyElem) -> Result<AnyElem> {
    ring.check(a)?;
    ring.inv(a)
}

impl Ring for AnyRing {
    type Elem = AnyElem;

    fn descriptor(&self) -> RingDescriptor {
        on_ring!(self, |r| r.descriptor())
    }

    fn zero(&self) -> AnyElem {
        ring_elem!(self, |r| r.zero())
    }

    fn one(&self) -> AnyElem {
        ring_elem!(self, |r| r.one())
    }

    fn from_bigint(&self, n: &BigInt) -> AnyElem {
        ring_elem!(self, |r| r.from_bigint(n))
    }

    fn from_i64(&self, n: i64) -> AnyElem {
        ring_elem!(self, |r| r.from_i64(n))
    }

    fn is_zero(&self, a: &AnyElem) -> bool {
        unary!(self, a, |r, x| r.is_zero(x), plain)
    }

    fn is_one(&self, a: &AnyElem) -> bool {
        unary!(self, a, |r, x| r.is_one(x), plain)
    }

    fn add(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        binary!(self, a, b, |r, x, y| r.add(x, y), elem)
    }

    fn neg(&self, a: &AnyElem) -> AnyElem {
        unary!(self, a, |r, x| r.neg(x), elem)
    }

    fn sub(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        binary!(self, a, b, |r, x, y| r.sub(x, y), elem)
    }

    fn mul(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        binary!(self, a, b, |r, x, y| r.mul(x, y), elem)
    }

    fn pow(&self, a: &AnyElem, e: u64) -> AnyElem {
        unary!(self, a, |r, x| r.pow(x, e), elem)
    }

    fn inv(&self, a: &AnyElem) -> Result<AnyElem> {
        unary!(self, a, |r, x| r.inv(x), elem_res)
    }

    fn is_unit(&self, a: &AnyElem) -> bool {
        unary!(self, a, |r, x| r.is_unit(x), plain)
    }

    fn is_nilpotent(&self, a: &AnyElem) -> bool {
        unary!(self, a, |r, x| r.is_nilpotent(x), plain)
    }

    fn contains(&self, a: &AnyElem) -> bool {
        self.owns(a)
    }

    fn q(&self) -> Result<AnyElem> {
        match self {
            AnyRing::Integers(r) => r.q().map(AnyElem::Integers),
            AnyRing::Zmod(r) => r.q().map(AnyElem::Zmod),
            AnyRing::Rationals(r) => r.q().map(AnyElem::Rationals),
            AnyRing::SeriesFp(r) => r.q().map(AnyElem::SeriesFp),
            AnyRing::SeriesQ(r) => r.q().map(AnyElem::SeriesQ),
            AnyRing::Symbolic(r) => r.q().map(AnyElem::Symbolic),
        }
    }

    fn precision(&self) -> Option<u32> {
        on_ring!(self, |r| r.precision())
    }

    fn q_valuation(&self, a: &AnyElem) -> Result<Valuation> {
        unary!(self, a, |r, x| r.q_valuation(x), plain)
    }

    fn exact_div_by_q(&self, a: &AnyElem, k: u32) -> Result<AnyElem> {
        unary!(self, a, |r, x| r.exact_div_by_q(x, k), elem_res)
    }

    fn with_precision(&self, n: u32) -> Result<Self> {
        Ok(match self {
            AnyRing::Integers(r) => AnyRing::Integers(r.with_precision(n)?),
            AnyRing::Zmod(r) => AnyRing::Zmod(r.with_precision(n)?),
            AnyRing::Rationals(r) => AnyRing::Rationals(r.with_precision(n)?),
            AnyRing::SeriesFp(r) => AnyRing::SeriesFp(r.with_precision(n)?),
            AnyRing::SeriesQ(r) => AnyRing::SeriesQ(r.with_precision(n)?),
            AnyRing::Symbolic(r) => AnyRing::Symbolic(r.with_precision(n)?),
        })
    }

    fn coerce_from(&self, from: &Self, a: &AnyElem) -> AnyElem {
        match (self, from, a) {
            (AnyRing::Integers(r), AnyRing::Integers(f), AnyElem::Integers(x)) => {
                AnyElem::Integers(r.coerce_from(f, x))
            }
            (AnyRing::Zmod(r), AnyRing::Zmod(f), AnyElem::Zmod(x)) => AnyElem::Zmod(r.coerce_from(f, x)),
            (AnyRing::Rationals(r), AnyRing::Rationals(f), AnyElem::Rationals(x)) => {
                AnyElem::Rationals(r.coerce_from(f, x))
            }
            (AnyRing::SeriesFp(r), AnyRing::SeriesFp(f), AnyElem::SeriesFp(x)) => {
                AnyElem::SeriesFp(r.coerce_from(f, x))
            }
            (AnyRing::SeriesQ(r), AnyRing::SeriesQ(f), AnyElem::SeriesQ(x)) => AnyElem::SeriesQ(r.coerce_from(f, x)),
            (AnyRing::Symbolic(r), AnyRing::Symbolic(f), AnyElem::Symbolic(x)) => {
                AnyElem::Symbolic(r.coerce_from(f, x))
            }
            _ => panic!("coerce_from across ring families"),
        }
    }

    fn residue_characteristic(&self) -> Option<u64> {
        on_ring!(self, |r| r.residue_characteristic())
    }

    fn half_quotient(&self) -> Option<HalfQuotient<Self>> {
        macro_rules! hq {
            ($v:ident, $r:expr) => {
                $r.half_quotient().map(|h| HalfQuotient {
                    quotient: AnyRing::$v(h.quotient),
                    generator: AnyElem::$v(h.generator),
                    annihilator_quotient: AnyRing::$v(h.annihilator_quotient),
                })
            };
        }
        match self {
            AnyRing::Integers(r) => hq!(Integers, r),
            AnyRing::Zmod(r) => hq!(Zmod, r),
            AnyRing::Rationals(r) => hq!(Rationals, r),
            AnyRing::SeriesFp(r) => hq!(SeriesFp, r),
            AnyRing::SeriesQ(r) => hq!(SeriesQ, r),
            AnyRing::Symbolic(r) => hq!(Symbolic, r),
        }
    }

    fn cardinality(&self) -> Option<u64> {
        on_ring!(self, |r| r.cardinality())
    }

    fn elements(&self, limit: u64) -> Option<Vec<AnyElem>> {
        match self {
            AnyRing::Integers(r) => r.elements(limit).map(|v| v.into_iter().map(AnyElem::Integers).collect()),
            AnyRing::Zmod(r) => r.elements(limit).map(|v| v.into_iter().map(AnyElem::Zmod).collect()),
            AnyRing::Rationals(r) => r.elements(limit).map(|v| v.into_iter().map(AnyElem::Rationals).collect()),
            AnyRing::SeriesFp(r) => r.elements(limit).map(|v| v.into_iter().map(AnyElem::SeriesFp).collect()),
            AnyRing::SeriesQ(r) => r.elements(limit).map(|v| v.into_iter().map(AnyElem::SeriesQ).collect()),
            AnyRing::Symbolic(r) => r.elements(limit).map(|v| v.into_iter().map(AnyElem::Symbolic).collect()),
        }
    }

    fn random_elem<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> AnyElem {
        ring_elem!(self, |r| r.random_elem(rng))
    }

    fn elem_to_json(&self, a: &AnyElem) -> Value {
        unary!(self, a, |r, x| r.elem_to_json(x), plain)
    }

    fn elem_from_json(&self, v: &Value) -> Result<AnyElem> {
        match self {
            AnyRing::Integers(r) => r.elem_from_json(v).map(AnyElem::Integers),
            AnyRing::Zmod(r) => r.elem_from_json(v).map(AnyElem::Zmod),
            AnyRing::Rationals(r) => r.elem_from_json(v).map(AnyElem::Rationals),
            AnyRing::SeriesFp(r) => r.elem_from_json(v).map(AnyElem::SeriesFp),
            AnyRing::SeriesQ(r) => r.elem_from_json(v).map(AnyElem::SeriesQ),
            AnyRing::Symbolic(r) => r.elem_from_json(v).map(AnyElem::Symbolic),
        }
    }

    fn display(&self, a: &AnyElem) -> String {
        unary!(self, a, |r, x| r.display(x), plain)
    }

    fn poly_mul(&self, a: &[AnyElem], b: &[AnyElem]) -> Vec<AnyElem> {
        let (xa, xb) = (unwrap_slice(self, a), unwrap_slice(self, b));
        macro_rules! go {
            ($v:ident, $r:expr) => {{
                let pick = |xs: Vec<&AnyElem>| -> Vec<_> {
                    xs.into_iter()
                        .map(|x| match x {
                            AnyElem::$v(x) => x.clone(),
                            _ => unreachable!(),
                        })
                        .collect()
                };
                $r.poly_mul(&pick(xa), &pick(xb)).into_iter().map(AnyElem::$v).collect()
            }};
        }
        match self {
            AnyRing::Integers(r) => go!(Integers, r),
            AnyRing::Zmod(r) => go!(Zmod, r),
            AnyRing::Rationals(r) => go!(Rationals, r),
            AnyRing::SeriesFp(r) => go!(SeriesFp, r),
            AnyRing::SeriesQ(r) => go!(SeriesQ, r),
            AnyRing::Symbolic(r) => go!(Symbolic, r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatch_is_reported() {
        let z25 = AnyRing::parse_flag("zmod:25:q=5").unwrap();
        let z8 = AnyRing::parse_flag("zmod:8").unwrap();
        let a = z25.from_i64(17);
        let b = z25.from_i64(13);
        assert_eq!(ring_add(&z25, &a, &b).unwrap(), AnyElem::Zmod(5));
        let out_of_range = AnyElem::Zmod(17);
        assert!(matches!(ring_mul(&z8, &out_of_range, &z8.one()), Err(Error::RingMismatch(_))));
        let series = AnyRing::parse_flag("tq:5:3").unwrap();
        assert!(matches!(ring_add(&series, &a, &series.one()), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn inverse_through_wrapper() {
        let z25 = AnyRing::parse_flag("zmod:25:q=5").unwrap();
        assert_eq!(ring_inv(&z25, &AnyElem::Zmod(7)).unwrap(), AnyElem::Zmod(18));
        let z9 = AnyRing::parse_flag("zmod:9").unwrap();
        assert!(matches!(ring_inv(&z9, &AnyElem::Zmod(3)), Err(Error::NotAUnit(_))));
    }
}
