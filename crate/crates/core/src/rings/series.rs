use num_bigint::BigInt;
use serde_json::Value;

use super::{HalfQuotient, Rationals, Ring, RingDescriptor, SeriesBase, Valuation, Zmod};
use crate::error::{Error, Result};

/// `K[t]/(t^e)` over a field `K` (a prime field or `Q`), with `q = t`.
/// Elements are coefficient vectors of length exactly `e`, lowest degree
/// first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries<F: Ring> {
    base: F,
    e: u32,
}

impl TruncSeries<Zmod> {
    /// `F_p[t]/(t^e)`.
    pub fn fp(p: u64, e: u32) -> Result<Self> {
        Self::new(Zmod::prime_power(p, 1)?, e)
    }
}

impl TruncSeries<Rationals> {
    /// `Q[t]/(t^e)`.
    pub fn rationals(e: u32) -> Result<Self> {
        Self::new(Rationals, e)
    }
}

impl<F: Ring> TruncSeries<F> {
    pub fn new(base: F, e: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidRing("truncation exponent must be positive".into()));
        }
        Ok(TruncSeries { base, e })
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// `c * t^k` (zero once `k >= e`).
    pub fn monomial(&self, c: F::Elem, k: u32) -> Vec<F::Elem> {
        let mut v = self.zero();
        if k < self.e {
            v[k as usize] = c;
        }
        v
    }

    fn len(&self) -> usize {
        self.e as usize
    }
}

impl<F: Ring> Ring for TruncSeries<F> {
    type Elem = Vec<F::Elem>;

    fn descriptor(&self) -> RingDescriptor {
        match self.base.descriptor() {
            RingDescriptor::Zmod { m, .. } => {
                RingDescriptor::TruncSeries { base: SeriesBase::PrimeField, p: Some(m), e: self.e }
            }
            _ => RingDescriptor::TruncSeries { base: SeriesBase::Rationals, p: None, e: self.e },
        }
    }

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.len()]
    }

    fn one(&self) -> Self::Elem {
        self.monomial(self.base.one(), 0)
    }

    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.monomial(self.base.from_bigint(n), 0)
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.monomial(self.base.from_i64(n), 0)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.len();
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().take(n - i).enumerate() {
                out[i + j] = self.base.add(&out[i + j], &self.base.mul(x, y));
            }
        }
        out
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let c0 = self
            .base
            .inv(&a[0])
            .map_err(|_| Error::NotAUnit(format!("{} (constant term not a unit)", self.display(a))))?;
        // b_k = -c0 * sum_{i=1..k} a_i b_{k-i}
        let mut b = vec![c0.clone()];
        for k in 1..self.len() {
            let mut s = self.base.zero();
            for i in 1..=k {
                s = self.base.add(&s, &self.base.mul(&a[i], &b[k - i]));
            }
            b.push(self.base.neg(&self.base.mul(&c0, &s)));
        }
        Ok(b)
    }

    fn is_nilpotent(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a[0])
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.len() == self.len() && a.iter().all(|c| self.base.contains(c))
    }

    fn q(&self) -> Result<Self::Elem> {
        Ok(self.monomial(self.base.one(), 1))
    }

    fn precision(&self) -> Option<u32> {
        Some(self.e)
    }

    fn q_valuation(&self, a: &Self::Elem) -> Result<Valuation> {
        Ok(match a.iter().position(|c| !self.base.is_zero(c)) {
            Some(i) => Valuation::Finite(i as u32),
            None => Valuation::Infinity,
        })
    }

    fn exact_div_by_q(&self, a: &Self::Elem, k: u32) -> Result<Self::Elem> {
        if !self.q_valuation(a)?.at_least(k) {
            return Err(Error::NotDivisible { element: self.display(a), power: k });
        }
        let k = (k as usize).min(self.len());
        let mut out: Vec<F::Elem> = a[k..].to_vec();
        out.resize(self.len(), self.base.zero());
        Ok(out)
    }

    fn with_precision(&self, n: u32) -> Result<Self> {
        TruncSeries::new(self.base.clone(), n)
    }

    fn coerce_from(&self, _from: &Self, a: &Self::Elem) -> Self::Elem {
        let mut out: Vec<F::Elem> = a.iter().take(self.len()).cloned().collect();
        out.resize(self.len(), self.base.zero());
        out
    }

    fn residue_characteristic(&self) -> Option<u64> {
        self.base.residue_characteristic()
    }

    fn half_quotient(&self) -> Option<HalfQuotient<Self>> {
        if self.e < 2 {
            return None;
        }
        let r = self.e.div_ceil(2);
        Some(HalfQuotient {
            quotient: self.with_precision(r).ok()?,
            generator: self.monomial(self.base.one(), r),
            annihilator_quotient: self.with_precision(self.e - r).ok()?,
        })
    }

    fn cardinality(&self) -> Option<u64> {
        self.base.cardinality()?.checked_pow(self.e)
    }

    fn elements(&self, limit: u64) -> Option<Vec<Self::Elem>> {
        if self.cardinality()? > limit {
            return None;
        }
        let digits = self.base.elements(limit)?;
        let mut out: Vec<Self::Elem> = vec![Vec::new()];
        for _ in 0..self.e {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    digits.iter().map(move |d| {
                        let mut v = prefix.clone();
                        v.push(d.clone());
                        v
                    })
                })
                .collect();
        }
        Some(out)
    }

    fn random_elem<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem {
        (0..self.len()).map(|_| self.base.random_elem(rng)).collect()
    }

    fn elem_to_json(&self, a: &Self::Elem) -> Value {
        Value::Array(a.iter().map(|c| self.base.elem_to_json(c)).collect())
    }

    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem> {
        let arr = v.as_array().ok_or_else(|| Error::Parse(format!("expected coefficient array, got {v}")))?;
        if arr.len() > self.len() {
            return Err(Error::Parse(format!("series has {} coefficients, ring keeps {}", arr.len(), self.e)));
        }
        let mut out = arr.iter().map(|c| self.base.elem_from_json(c)).collect::<Result<Vec<_>>>()?;
        out.resize(self.len(), self.base.zero());
        Ok(out)
    }

    fn display(&self, a: &Self::Elem) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if self.base.is_zero(c) {
                continue;
            }
            let c = self.base.display(c);
            parts.push(match i {
                0 => c,
                1 if c == "1" => "t".into(),
                1 => format!("({c})*t"),
                _ if c == "1" => format!("t^{i}"),
                _ => format!("({c})*t^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let f5 = TruncSeries::fp(5, 3).unwrap();
        assert_eq!(f5.add(&vec![1, 2, 0], &vec![4, 3, 1]), vec![0, 0, 1]);
        let f3 = TruncSeries::fp(3, 2).unwrap();
        assert_eq!(f3.mul(&vec![1, 1], &vec![1, 2]), vec![1, 0]);
        let f2 = TruncSeries::fp(2, 3).unwrap();
        assert_eq!(f2.inv(&vec![1, 1, 0]).unwrap(), vec![1, 1, 1]);
        let f5_4 = TruncSeries::fp(5, 4).unwrap();
        assert_eq!(f5_4.q_valuation(&vec![0, 0, 1, 2]).unwrap(), Valuation::Finite(2));
        assert!(f5_4.inv(&vec![0, 1, 0, 0]).is_err());
    }

    #[test]
    fn enumeration_and_half_quotient() {
        let f2 = TruncSeries::fp(2, 3).unwrap();
        let all = f2.elements(100).unwrap();
        assert_eq!(all.len(), 8);
        let h = f2.half_quotient().unwrap();
        assert_eq!(h.quotient.exponent(), 2);
        assert_eq!(h.generator, vec![0, 0, 1]);
        assert_eq!(h.annihilator_quotient.exponent(), 1);
    }
}
