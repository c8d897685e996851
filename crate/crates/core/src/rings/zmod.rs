use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde_json::Value;

use super::{factorize, parse_bigint, HalfQuotient, Ring, RingDescriptor, Valuation};
use crate::error::{Error, Result};

/// `Z/m` with least non-negative residues. When `m = p^n` the ring carries
/// the q-adic structure `q = p`, precision `n`.
///
/// Moduli are limited to `m < 2^63` so that sums fit a machine word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zmod {
    m: u64,
    prime: Option<u64>,
    exponent: u32,
    factors: Arc<[(u64, u32)]>,
    radical: u64,
}

const MAX_MODULUS: u64 = 1 << 63;

impl Zmod {
    pub fn new(m: u64) -> Result<Self> {
        if !(2..MAX_MODULUS).contains(&m) {
            return Err(Error::InvalidRing(format!("modulus {m} outside [2, 2^63)")));
        }
        let factors = factorize(m);
        let radical = factors.iter().map(|(p, _)| p).product();
        let (prime, exponent) = if factors.len() == 1 { (Some(factors[0].0), factors[0].1) } else { (None, 0) };
        Ok(Zmod { m, prime, exponent, factors: factors.into(), radical })
    }

    /// `Z/p^n`; fails unless `p` is prime and `n >= 1`.
    pub fn prime_power(p: u64, n: u32) -> Result<Self> {
        if !super::is_prime(p) || n == 0 {
            return Err(Error::InvalidRing(format!("Z/p^n needs p prime and n >= 1 (p={p}, n={n})")));
        }
        let m = p
            .checked_pow(n)
            .filter(|&m| m < MAX_MODULUS)
            .ok_or_else(|| Error::InvalidRing(format!("{p}^{n} exceeds 2^63")))?;
        Self::new(m)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn radical(&self) -> u64 {
        self.radical
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        if self.m <= u32::MAX as u64 {
            (a * b) % self.m
        } else {
            ((a as u128 * b as u128) % self.m as u128) as u64
        }
    }

    fn val_p(&self, mut a: u64) -> Valuation {
        let p = match self.prime {
            Some(p) => p,
            None => return Valuation::Finite(0),
        };
        if a == 0 {
            return Valuation::Infinity;
        }
        let mut k = 0;
        while a.is_multiple_of(p) {
            a /= p;
            k += 1;
        }
        Valuation::Finite(k)
    }

    fn require_qadic(&self) -> Result<u64> {
        self.prime.ok_or_else(|| {
            Error::UnsupportedRing(format!("Z/{} has no q-adic structure (modulus is not a prime power)", self.m))
        })
    }
}

/// Extended Euclid on signed 128-bit values.
fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

impl Ring for Zmod {
    type Elem = u64;

    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Zmod {
            m: self.m.to_string(),
            p: self.prime.map(|p| p.to_string()),
            n: self.prime.map(|_| self.exponent),
        }
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.m)).to_u64().expect("residue fits")
    }

    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.m as i128) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.m - (b - a)
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        inverse_mod(*a, self.m).ok_or_else(|| Error::NotAUnit(format!("{a} mod {}", self.m)))
    }

    fn is_nilpotent(&self, a: &u64) -> bool {
        (*a).is_multiple_of(self.radical)
    }

    fn contains(&self, a: &u64) -> bool {
        *a < self.m
    }

    fn q(&self) -> Result<u64> {
        Ok(self.require_qadic()? % self.m)
    }

    fn precision(&self) -> Option<u32> {
        self.prime.map(|_| self.exponent)
    }

    fn q_valuation(&self, a: &u64) -> Result<Valuation> {
        self.require_qadic()?;
        Ok(self.val_p(*a))
    }

    fn exact_div_by_q(&self, a: &u64, k: u32) -> Result<u64> {
        let p = self.require_qadic()?;
        if !self.val_p(*a).at_least(k) {
            return Err(Error::NotDivisible { element: a.to_string(), power: k });
        }
        if *a == 0 {
            return Ok(0);
        }
        Ok(a / p.pow(k))
    }

    fn with_precision(&self, n: u32) -> Result<Self> {
        let p = self.require_qadic()?;
        Zmod::prime_power(p, n)
    }

    fn coerce_from(&self, _from: &Self, a: &u64) -> u64 {
        a % self.m
    }

    fn residue_characteristic(&self) -> Option<u64> {
        self.prime
    }

    fn half_quotient(&self) -> Option<HalfQuotient<Self>> {
        if self.factors.iter().all(|&(_, e)| e == 1) {
            return None;
        }
        let top: u64 = self.factors.iter().map(|&(p, e)| p.pow(e.div_ceil(2))).product();
        let quotient = Zmod::new(top).ok()?;
        let annihilator_quotient = Zmod::new(self.m / top).ok()?;
        Some(HalfQuotient { quotient, generator: top % self.m, annihilator_quotient })
    }

    fn cardinality(&self) -> Option<u64> {
        Some(self.m)
    }

    fn elements(&self, limit: u64) -> Option<Vec<u64>> {
        (self.m <= limit).then(|| (0..self.m).collect())
    }

    fn random_elem<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> u64 {
        rng.gen_range(0..self.m)
    }

    fn elem_to_json(&self, a: &u64) -> Value {
        Value::String(a.to_string())
    }

    fn elem_from_json(&self, v: &Value) -> Result<u64> {
        Ok(self.from_bigint(&parse_bigint(v)?))
    }

    fn display(&self, a: &u64) -> String {
        a.to_string()
    }

    fn poly_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let len = a.len() + b.len() - 1;
        if self.m <= u32::MAX as u64 {
            // products fit in u64, so a u128 accumulator never overflows here
            let mut acc = vec![0u128; len];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    acc[i + j] += (x * y) as u128;
                }
            }
            acc.into_iter().map(|c| (c % self.m as u128) as u64).collect()
        } else {
            let mut out = vec![0u64; len];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] = self.add(&out[i + j], &self.mulmod(*x, *y));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_examples() {
        let z25 = Zmod::new(25).unwrap();
        assert_eq!(z25.add(&17, &13), 5);
        let z8 = Zmod::new(8).unwrap();
        assert_eq!(z8.mul(&3, &5), 7);
        assert_eq!(z25.inv(&7).unwrap(), 18);
        let z9 = Zmod::new(9).unwrap();
        assert!(matches!(z9.inv(&3), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn inverse_agrees_with_brute_force() {
        for m in [2u64, 9, 12, 16, 25, 72] {
            let z = Zmod::new(m).unwrap();
            for a in 0..m {
                let brute = (0..m).find(|b| (a * b) % m == 1);
                assert_eq!(z.inv(&a).ok(), brute, "a={a} m={m}");
            }
        }
    }

    #[test]
    fn valuations() {
        let z27 = Zmod::new(27).unwrap();
        assert_eq!(z27.q_valuation(&18).unwrap(), Valuation::Finite(2));
        assert_eq!(z27.q_valuation(&0).unwrap(), Valuation::Infinity);
        assert_eq!(z27.exact_div_by_q(&18, 2).unwrap(), 2);
        assert!(z27.exact_div_by_q(&18, 3).is_err());
        let z12 = Zmod::new(12).unwrap();
        assert!(z12.q_valuation(&6).is_err());
        assert!(z12.is_nilpotent(&6));
        assert!(!z12.is_nilpotent(&4));
    }

    #[test]
    fn half_quotients() {
        let z72 = Zmod::new(72).unwrap();
        let h = z72.half_quotient().unwrap();
        assert_eq!(h.quotient.modulus(), 12);
        assert_eq!(h.generator, 12);
        assert_eq!(h.annihilator_quotient.modulus(), 6);
        let z12 = h.quotient;
        let h2 = z12.half_quotient().unwrap();
        assert_eq!(h2.quotient.modulus(), 6);
        assert!(h2.quotient.half_quotient().is_none());
        let z16 = Zmod::new(16).unwrap();
        assert_eq!(z16.half_quotient().unwrap().quotient.modulus(), 4);
    }

    #[test]
    fn poly_mul_kernels_agree() {
        let z = Zmod::new(15625).unwrap();
        let big = Zmod::new((1u64 << 40) + 15).unwrap();
        let a = [3u64, 15000, 7, 0, 12];
        let b = [15624u64, 2, 9999];
        for ring in [&z, &big] {
            let fast = ring.poly_mul(&a, &b);
            let mut slow = vec![0u64; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    slow[i + j] = ring.add(&slow[i + j], &ring.mul(x, y));
                }
            }
            assert_eq!(fast, slow);
        }
    }
}
