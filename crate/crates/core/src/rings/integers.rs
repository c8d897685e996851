use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use super::{parse_bigint, HalfQuotient, Ring, RingDescriptor, Valuation};
use crate::error::{Error, Result};

/// The integers, optionally with a distinguished prime `q = p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integers {
    p: Option<BigInt>,
}

/// Height of randomly sampled integers.
const SAMPLE_BOUND: i64 = 1000;

impl Integers {
    pub fn new() -> Self {
        Integers { p: None }
    }

    pub fn with_q(p: u64) -> Result<Self> {
        if !super::is_prime(p) {
            return Err(Error::InvalidRing(format!("q = {p} is not prime")));
        }
        Ok(Integers { p: Some(BigInt::from(p)) })
    }

    pub fn prime(&self) -> Option<&BigInt> {
        self.p.as_ref()
    }

    fn require_q(&self) -> Result<&BigInt> {
        self.p.as_ref().ok_or_else(|| Error::UnsupportedRing("Z without a distinguished prime".into()))
    }
}

impl Default for Integers {
    fn default() -> Self {
        Self::new()
    }
}

impl Ring for Integers {
    type Elem = BigInt;

    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Integers { p: self.p.as_ref().map(|p| p.to_string()) }
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn mul_add_assign(&self, acc: &mut BigInt, m: &BigInt, a: &BigInt) {
        match m.to_i64() {
            Some(s) => *acc *= s,
            None => *acc *= m,
        }
        *acc += a;
    }

    fn inv(&self, a: &BigInt) -> Result<BigInt> {
        if a.abs().is_one() {
            Ok(a.clone())
        } else {
            Err(Error::NotAUnit(a.to_string()))
        }
    }

    fn is_nilpotent(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn contains(&self, _a: &BigInt) -> bool {
        true
    }

    fn q(&self) -> Result<BigInt> {
        self.require_q().cloned()
    }

    fn precision(&self) -> Option<u32> {
        None
    }

    fn q_valuation(&self, a: &BigInt) -> Result<Valuation> {
        let p = self.require_q()?;
        Ok(match crate::mpoly::int_valuation(a, p) {
            u32::MAX => Valuation::Infinity,
            v => Valuation::Finite(v),
        })
    }

    fn exact_div_by_q(&self, a: &BigInt, k: u32) -> Result<BigInt> {
        let p = self.require_q()?;
        let d = num_traits::pow(p.clone(), k as usize);
        let (quot, rem) = a.div_rem(&d);
        if !rem.is_zero() {
            return Err(Error::NotDivisible { element: a.to_string(), power: k });
        }
        Ok(quot)
    }

    fn with_precision(&self, n: u32) -> Result<Self> {
        Err(Error::UnsupportedRing(format!(
            "Z has no truncation; use Z/p^{n} for precision {n}"
        )))
    }

    fn coerce_from(&self, _from: &Self, a: &BigInt) -> BigInt {
        a.clone()
    }

    fn residue_characteristic(&self) -> Option<u64> {
        self.p.as_ref().and_then(|p| p.to_u64())
    }

    fn half_quotient(&self) -> Option<HalfQuotient<Self>> {
        None
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }

    fn elements(&self, _limit: u64) -> Option<Vec<BigInt>> {
        None
    }

    fn random_elem<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> BigInt {
        BigInt::from(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND))
    }

    fn elem_to_json(&self, a: &BigInt) -> Value {
        Value::String(a.to_string())
    }

    fn elem_from_json(&self, v: &Value) -> Result<BigInt> {
        parse_bigint(v)
    }

    fn display(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division() {
        let z2 = Integers::with_q(2).unwrap();
        assert_eq!(z2.exact_div_by_q(&BigInt::from(12), 2).unwrap(), BigInt::from(3));
        let z3 = Integers::with_q(3).unwrap();
        assert!(matches!(
            z3.exact_div_by_q(&BigInt::from(10), 1),
            Err(Error::NotDivisible { power: 1, .. })
        ));
        assert_eq!(z3.exact_div_by_q(&BigInt::from(-18), 2).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn units() {
        let z = Integers::new();
        assert_eq!(z.inv(&BigInt::from(-1)).unwrap(), BigInt::from(-1));
        assert!(z.inv(&BigInt::from(2)).is_err());
        assert!(z.q().is_err());
    }
}
