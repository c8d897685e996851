use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use super::{HalfQuotient, Ring, RingDescriptor, Valuation};
use crate::error::{Error, Result};

/// The field of rationals. Used as the base of `Q[t]/(t^e)`; it has no
/// q-adic structure of its own.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

fn no_q() -> Error {
    Error::UnsupportedRing("Q has no distinguished nilpotent q".into())
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl Ring for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::NotAUnit("0".into()))
        } else {
            Ok(a.recip())
        }
    }

    fn is_nilpotent(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn contains(&self, _a: &BigRational) -> bool {
        true
    }

    fn q(&self) -> Result<BigRational> {
        Err(no_q())
    }

    fn precision(&self) -> Option<u32> {
        None
    }

    fn q_valuation(&self, _a: &BigRational) -> Result<Valuation> {
        Err(no_q())
    }

    fn exact_div_by_q(&self, _a: &BigRational, _k: u32) -> Result<BigRational> {
        Err(no_q())
    }

    fn with_precision(&self, _n: u32) -> Result<Self> {
        Err(no_q())
    }

    fn coerce_from(&self, _from: &Self, a: &BigRational) -> BigRational {
        a.clone()
    }

    fn residue_characteristic(&self) -> Option<u64> {
        None
    }

    fn half_quotient(&self) -> Option<HalfQuotient<Self>> {
        None
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }

    fn elements(&self, _limit: u64) -> Option<Vec<BigRational>> {
        None
    }

    fn random_elem<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> BigRational {
        let n = rng.gen_range(-20i64..=20);
        let d = rng.gen_range(1i64..=6);
        BigRational::new(n.into(), d.into())
    }

    fn elem_to_json(&self, a: &BigRational) -> Value {
        Value::String(self.display(a))
    }

    fn elem_from_json(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Parse(format!("expected rational string, got {other}"))),
        }
    }

    fn display(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let q = Rationals;
        let x = q.elem_from_json(&Value::String("6/-4".into())).unwrap();
        assert_eq!(q.display(&x), "-3/2");
        assert_eq!(q.elem_from_json(&q.elem_to_json(&x)).unwrap(), x);
        assert!(q.elem_from_json(&Value::String("1/0".into())).is_err());
    }
}
