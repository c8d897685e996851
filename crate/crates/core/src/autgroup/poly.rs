use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::rings::{AnyRing, Ring, RingDescriptor, Valuation};

/// A univariate polynomial over a coefficient ring (typically `R/q^n`),
/// coefficient of `T^i` at index `i`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncPoly<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> TruncPoly<R> {
    /// Builds a polynomial from canonical coefficients; panics in debug
    /// builds on non-canonical input. Use [`TruncPoly::checked`] for
    /// untrusted data.
    pub fn new(ring: &R, coeffs: Vec<R::Elem>) -> Self {
        debug_assert!(coeffs.iter().all(|c| ring.contains(c)), "non-canonical coefficient");
        let mut p = TruncPoly { ring: ring.clone(), coeffs };
        p.trim();
        p
    }

    pub fn checked(ring: &R, coeffs: Vec<R::Elem>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !ring.contains(c)) {
            return Err(Error::RingMismatch(format!("{c:?} is not a canonical element of {}", ring.descriptor())));
        }
        Ok(Self::new(ring, coeffs))
    }

    pub fn from_i64s(ring: &R, coeffs: &[i64]) -> Self {
        Self::new(ring, coeffs.iter().map(|&c| ring.from_i64(c)).collect())
    }

    pub fn zero(ring: &R) -> Self {
        TruncPoly { ring: ring.clone(), coeffs: Vec::new() }
    }

    /// The identity automorphism `T`.
    pub fn identity(ring: &R) -> Self {
        Self::monomial(ring, ring.one(), 1)
    }

    pub fn constant(ring: &R, c: R::Elem) -> Self {
        Self::new(ring, vec![c])
    }

    /// `c * T^k`.
    pub fn monomial(ring: &R, c: R::Elem, k: usize) -> Self {
        let mut coeffs = vec![ring.zero(); k + 1];
        coeffs[k] = c;
        Self::new(ring, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| self.ring.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    /// Coefficient of `T^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.len() == 2 && self.ring.is_zero(&self.coeffs[0]) && self.ring.is_one(&self.coeffs[1])
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.ring.descriptor(), other.ring.descriptor())))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.ring.add(&self.coeff(i), &other.coeff(i))).collect();
        Self::new(&self.ring, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.ring.sub(&self.coeff(i), &other.coeff(i))).collect();
        Self::new(&self.ring, coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ring, self.coeffs.iter().map(|c| self.ring.neg(c)).collect())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self::new(&self.ring, self.coeffs.iter().map(|x| self.ring.mul(c, x)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.ring, self.ring.poly_mul(&self.coeffs, &other.coeffs))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.ring.mul(&self.ring.from_i64(i as i64), c))
            .collect();
        Self::new(&self.ring, coeffs)
    }

    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ring.add(&self.ring.mul(&acc, x), c);
        }
        acc
    }

    /// Moves every coefficient into `target` (reduction to a coarser
    /// precision, or canonical lift to a finer one).
    pub fn change_ring(&self, target: &R) -> Self {
        Self::new(target, self.coeffs.iter().map(|c| target.coerce_from(&self.ring, c)).collect())
    }

    /// The reduction modulo `q^m`, viewed in `R/q^m`.
    pub fn reduce_precision(&self, m: u32) -> Result<Self> {
        Ok(self.change_ring(&self.ring.with_precision(m)?))
    }

    /// `q`-adic valuation of every coefficient.
    pub fn valuations(&self) -> Result<Vec<Valuation>> {
        self.coeffs.iter().map(|c| self.ring.q_valuation(c)).collect()
    }

    /// `f(g(T))` with coefficients reduced in the common ring.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.same_ring(g)?;
        Ok(self.compose_unchecked(g))
    }

    /// `compose` without the ring equality check (callers guarantee it).
    pub fn compose_unchecked(&self, g: &Self) -> Self {
        let ring = &self.ring;
        match self.coeffs.len() {
            0 => return self.clone(),
            1 => return self.clone(),
            _ => {}
        }
        if g.coeffs.len() <= 2 {
            return Self::new(ring, subst_linear(ring, &self.coeffs, &g.coeff(0), &g.coeff(1)));
        }
        let rest: Vec<R::Elem> =
            g.coeffs.iter().enumerate().map(|(i, c)| if i < 2 { ring.zero() } else { c.clone() }).collect();
        if let Some(n) = ring.precision() {
            let divisible = rest.iter().all(|c| ring.q_valuation(c).map(|v| v.at_least(1)).unwrap_or(false));
            if divisible {
                return self.compose_taylor(g, rest, Some(n));
            }
        }
        if rest.iter().all(|c| ring.is_nilpotent(c)) {
            return self.compose_taylor(g, rest, None);
        }
        self.compose_horner(g)
    }

    fn compose_horner(&self, g: &Self) -> Self {
        let ring = &self.ring;
        let Some(top) = self.coeffs.last() else { return self.clone() };
        let mut acc: Vec<R::Elem> = vec![top.clone()];
        for c in self.coeffs.iter().rev().skip(1) {
            acc = ring.poly_mul(&acc, &g.coeffs);
            acc[0] = ring.add(&acc[0], c);
            while acc.len() > 1 && acc.last().is_some_and(|x| ring.is_zero(x)) {
                acc.pop();
            }
        }
        Self::new(ring, acc)
    }

    /// `f(L + N) = sum_j (Delta_j f)(L) * N^j` with `L` the affine part of
    /// `g` and `N` nilpotent. When `N` is divisible by `q` at precision `n`,
    /// the `j`-th term only sees coefficients of `f` of valuation `< n - j`.
    fn compose_taylor(&self, g: &Self, rest: Vec<R::Elem>, precision: Option<u32>) -> Self {
        let ring = &self.ring;
        let f = &self.coeffs;
        let deg = f.len() - 1;
        let vals: Option<Vec<u32>> = precision.map(|_| {
            f.iter()
                .map(|c| ring.q_valuation(c).ok().and_then(|v| v.finite()).unwrap_or(u32::MAX))
                .collect()
        });
        let rest = Self::new(ring, rest);
        let (g0, g1) = (g.coeff(0), g.coeff(1));
        let mut acc: Vec<R::Elem> = Vec::new();
        let mut rest_pow = Self::constant(ring, ring.one());
        // binom[k] = C(k, j) for the current j
        let mut binom: Vec<R::Elem> = vec![ring.one(); deg + 1];
        for j in 0..=deg {
            if rest_pow.is_zero() {
                break;
            }
            if let (Some(n), Some(_)) = (precision, &vals) {
                if j as u32 >= n {
                    break;
                }
            }
            let mut delta: Vec<R::Elem> = Vec::with_capacity(deg + 1 - j);
            let mut any = false;
            for k in j..=deg {
                let keep = match (&vals, precision) {
                    (Some(v), Some(n)) => v[k] < n - j as u32,
                    _ => true,
                };
                if keep && !ring.is_zero(&f[k]) {
                    delta.push(ring.mul(&binom[k], &f[k]));
                    any = true;
                } else {
                    delta.push(ring.zero());
                }
            }
            if any {
                let h = subst_linear(ring, &delta, &g0, &g1);
                let term = ring.poly_mul(&h, &rest_pow.coeffs);
                if acc.len() < term.len() {
                    acc.resize(term.len(), ring.zero());
                }
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a = ring.add(a, t);
                }
            }
            if j < deg {
                rest_pow = rest_pow.mul(&rest);
                let mut next = vec![ring.zero(); deg + 1];
                next[j + 1] = ring.one();
                for k in j + 2..=deg {
                    next[k] = ring.add(&binom[k - 1], &next[k - 1]);
                }
                binom = next;
            }
        }
        Self::new(ring, acc)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": serde_json::to_value(self.ring.descriptor()).expect("descriptor serializes"),
            "coeffs": self.coeffs.iter().map(|c| self.ring.elem_to_json(c)).collect::<Vec<_>>(),
        })
    }

    /// Reads `{"ring": ..., "coeffs": [...]}` (or a bare coefficient array)
    /// into `ring`, rejecting a mismatched ring descriptor.
    pub fn from_json_in(ring: &R, v: &Value) -> Result<Self> {
        let coeffs = match v {
            Value::Array(_) => v,
            Value::Object(o) => {
                if let Some(d) = o.get("ring") {
                    let d: RingDescriptor =
                        serde_json::from_value(d.clone()).map_err(|e| Error::Parse(format!("ring descriptor: {e}")))?;
                    if d != ring.descriptor() {
                        return Err(Error::RingMismatch(format!("polynomial over {d}, expected {}", ring.descriptor())));
                    }
                }
                o.get("coeffs").ok_or_else(|| Error::Parse("missing \"coeffs\"".into()))?
            }
            _ => return Err(Error::Parse("expected a polynomial object".into())),
        };
        let arr = coeffs.as_array().ok_or_else(|| Error::Parse("\"coeffs\" must be an array".into()))?;
        let coeffs = arr.iter().map(|c| ring.elem_from_json(c)).collect::<Result<Vec<_>>>()?;
        Self::checked(ring, coeffs)
    }

    /// Parses an expression in `T`, resolving every other identifier
    /// through `lookup` (for instance `q`, or symbolic generators).
    pub fn parse_in(ring: &R, s: &str, lookup: &dyn Fn(&str) -> Option<R::Elem>) -> Result<Self> {
        Self::from_expr(ring, &Expr::parse(s)?, lookup)
    }

    fn from_expr(ring: &R, e: &Expr, lookup: &dyn Fn(&str) -> Option<R::Elem>) -> Result<Self> {
        let rec = |x: &Expr| Self::from_expr(ring, x, lookup);
        Ok(match e {
            Expr::Int(n) => Self::constant(ring, ring.from_bigint(n)),
            Expr::Var(v) if v == "T" => Self::identity(ring),
            Expr::Var(v) => Self::constant(ring, lookup(v).ok_or_else(|| Error::Parse(format!("unknown name {v}")))?),
            Expr::Neg(a) => rec(a)?.neg(),
            Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
            Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
            Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
            Expr::Div(a, b) => {
                let d = rec(b)?;
                if d.degree().unwrap_or(0) > 0 {
                    return Err(Error::Parse("division by a polynomial in T".into()));
                }
                rec(a)?.scale(&ring.inv(&d.coeff(0))?)
            }
            Expr::Pow(a, k) => {
                let base = rec(a)?;
                let mut acc = Self::constant(ring, ring.one());
                for _ in 0..*k {
                    acc = acc.mul(&base);
                }
                acc
            }
        })
    }

    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            let s = self.ring.display(c);
            let s = if s.contains(' ') { format!("({s})") } else { s };
            parts.push(match (i, s.as_str()) {
                (0, _) => s,
                (1, "1") => "T".into(),
                (1, _) => format!("{s}*T"),
                (_, "1") => format!("T^{i}"),
                _ => format!("{s}*T^{i}"),
            });
        }
        parts.join(" + ")
    }
}

impl TruncPoly<AnyRing> {
    /// Reads a self-describing polynomial, building the ring from its
    /// descriptor.
    pub fn from_json(v: &Value) -> Result<Self> {
        let d = v.get("ring").ok_or_else(|| Error::Parse("missing \"ring\"".into()))?;
        let d: RingDescriptor =
            serde_json::from_value(d.clone()).map_err(|e| Error::Parse(format!("ring descriptor: {e}")))?;
        let ring = AnyRing::from_descriptor(&d)?;
        Self::from_json_in(&ring, v)
    }
}

impl<R: Ring> fmt::Debug for TruncPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncPoly[{}]({})", self.ring.descriptor(), self.display())
    }
}

/// `sum c_k (g0 + g1 T)^k` by Horner's rule on the affine substitution.
fn subst_linear<R: Ring>(ring: &R, c: &[R::Elem], g0: &R::Elem, g1: &R::Elem) -> Vec<R::Elem> {
    if c.is_empty() {
        return Vec::new();
    }
    if ring.is_zero(g0) {
        let mut pw = ring.one();
        let mut out = Vec::with_capacity(c.len());
        for x in c {
            out.push(ring.mul(x, &pw));
            pw = ring.mul(&pw, g1);
        }
        return out;
    }
    let top = c.len() - 1;
    let mut acc: Vec<R::Elem> = Vec::with_capacity(c.len());
    acc.push(c[top].clone());
    for x in c[..top].iter().rev() {
        // acc <- acc * (g0 + g1 T) + x
        let mut next = Vec::with_capacity(acc.len() + 1);
        next.push(ring.add(&ring.mul(&acc[0], g0), x));
        for i in 1..acc.len() {
            next.push(ring.add(&ring.mul(&acc[i], g0), &ring.mul(&acc[i - 1], g1)));
        }
        next.push(ring.mul(&acc[acc.len() - 1], g1));
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zmod;

    #[test]
    fn compose_examples() {
        let z25 = Zmod::new(25).unwrap();
        let f = TruncPoly::from_i64s(&z25, &[1, 2, 5]);
        let g = TruncPoly::from_i64s(&z25, &[3, 1, 5]);
        assert_eq!(f.compose(&g).unwrap(), TruncPoly::from_i64s(&z25, &[2, 7, 15]));
        let z16 = Zmod::new(16).unwrap();
        let f = TruncPoly::from_i64s(&z16, &[0, 1, 0, 4]);
        let g = TruncPoly::from_i64s(&z16, &[0, 1, 4]);
        assert_eq!(f.compose(&g).unwrap(), TruncPoly::from_i64s(&z16, &[0, 1, 4, 4]));
        let t = TruncPoly::identity(&z16);
        assert_eq!(t.compose(&g).unwrap(), g);
    }

    #[test]
    fn taylor_matches_horner() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for m in [8u64, 27, 625, 12, 72] {
            let z = Zmod::new(m).unwrap();
            let rad = z.radical();
            for _ in 0..200 {
                let df = rng.gen_range(0..9);
                let dg = rng.gen_range(2..9);
                let f = TruncPoly::new(&z, (0..=df).map(|_| rng.gen_range(0..m)).collect());
                let mut gc: Vec<u64> = (0..=dg).map(|_| rng.gen_range(0..m / rad) * rad).collect();
                gc[0] = rng.gen_range(0..m);
                gc[1] = rng.gen_range(0..m);
                let g = TruncPoly::new(&z, gc);
                assert_eq!(f.compose(&g).unwrap(), f.compose_horner(&g), "m={m}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let z = AnyRing::parse_flag("zmod:25:q=5").unwrap();
        let f = TruncPoly::from_i64s(&z, &[1, 2, 5]);
        let v = f.to_json();
        assert_eq!(v["coeffs"], json!(["1", "2", "5"]));
        assert_eq!(TruncPoly::from_json(&v).unwrap(), f);
        let other = AnyRing::parse_flag("zmod:125:q=5").unwrap();
        assert!(matches!(TruncPoly::from_json_in(&other, &v), Err(Error::RingMismatch(_))));
    }
}
