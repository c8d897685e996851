//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Variables are positional; naming is left to the caller (see
//! [`crate::rings::Symbolic`]). Terms are kept sorted by exponent vector with
//! no zero coefficients, so structural equality is polynomial equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use serde_json::{json, Map, Value};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rings::{parse_bigint, Ring};

pub type Monomial = SmallVec<[u32; 8]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    nvars: usize,
    terms: Vec<(Monomial, BigInt)>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::from_elem(0, nvars), c));
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::monomial(nvars, index, 1, BigInt::one())
    }

    /// `coeff * x_index^exp`.
    pub fn monomial(nvars: usize, index: usize, exp: u32, coeff: BigInt) -> Self {
        assert!(index < nvars, "variable index {index} out of range {nvars}");
        let mut m = Monomial::from_elem(0, nvars);
        m[index] = exp;
        Self::from_terms(nvars, vec![(m, coeff)])
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity mismatch");
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: FxHashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        IntPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one() && self.terms[0].0.iter().all(|&e| e == 0)
    }

    /// Constant term.
    pub fn constant_term(&self) -> BigInt {
        match self.terms.first() {
            Some((m, c)) if m.iter().all(|&e| e == 0) => c.clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.iter().all(|&e| e == 0))
    }

    /// Re-embeds into a ring with more variables (new ones appended).
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2.resize(nvars, 0);
                (m2, c.clone())
            })
            .collect();
        IntPoly { nvars, terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        // merge of two sorted lists
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((ma.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        IntPoly { nvars: self.nvars, terms: out }
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        let mut acc: FxHashMap<Monomial, BigInt> =
            FxHashMap::with_capacity_and_hasher(self.terms.len() * 2, Default::default());
        let mut prod = BigInt::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(a, b)| a + b).collect();
                prod.clone_from(ca);
                prod *= cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += &prod,
                    None => {
                        acc.insert(m, prod.clone());
                    }
                }
            }
        }
        Self::from_map(self.nvars, acc)
    }

    fn mul_term(&self, m: &Monomial, c: &BigInt) -> Self {
        IntPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(ma, ca)| (ma.iter().zip(m.iter()).map(|(a, b)| a + b).collect(), ca * c))
                .collect(),
        }
    }

    /// Power by repeated multiplication with the base; cheap when the base is
    /// small, which is the common case for Witt-law derivation.
    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Power by binary exponentiation.
    pub fn pow_binary(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides every coefficient by `d`, failing if any remainder is nonzero.
    pub fn exact_div_int(&self, d: &BigInt) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let (quo, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            terms.push((m.clone(), quo));
        }
        Some(IntPoly { nvars: self.nvars, terms })
    }

    /// Largest k with `p^k` dividing every coefficient; `None` for zero.
    pub fn int_valuation(&self, p: &BigInt) -> Option<u32> {
        self.terms.iter().map(|(_, c)| int_valuation(c, p)).min()
    }

    /// Minimum exponent of variable `v` over all terms; `None` for zero.
    pub fn min_exponent(&self, v: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m[v]).min()
    }

    pub fn max_exponent(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m[v]).max().unwrap_or(0)
    }

    /// Multiplies by `x_v^k` (k may be negative if every term allows it).
    pub fn shift_var(&self, v: usize, k: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = m.clone();
                let e = m2[v] as i64 + k;
                assert!(e >= 0, "negative exponent after shift");
                m2[v] = e as u32;
                (m2, c.clone())
            })
            .collect();
        // shifting one variable preserves lexicographic order
        IntPoly { nvars: self.nvars, terms }
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial, &BigInt) -> bool) -> Self {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, c)| keep(m, c)).cloned().collect(),
        }
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, mut f: impl FnMut(&BigInt) -> BigInt) -> Self {
        IntPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let c2 = f(c);
                    (!c2.is_zero()).then(|| (m.clone(), c2))
                })
                .collect(),
        }
    }

    /// Applies `f` to every monomial and re-collects.
    pub fn map_monomials(&self, nvars: usize, mut f: impl FnMut(&Monomial) -> Monomial) -> Self {
        Self::from_terms(nvars, self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.iter().sum()).max()
    }

    /// Evaluates at `values` in an arbitrary ring.
    pub fn eval<R: Ring>(&self, ring: &R, values: &[R::Elem]) -> R::Elem {
        assert_eq!(values.len(), self.nvars, "wrong number of values");
        // power tables up to the max exponent actually used
        let mut powers: Vec<Vec<R::Elem>> = Vec::with_capacity(self.nvars);
        for (v, x) in values.iter().enumerate() {
            let top = self.max_exponent(v) as usize;
            let mut row = Vec::with_capacity(top + 1);
            row.push(ring.one());
            for e in 1..=top {
                let next = ring.mul(&row[e - 1], x);
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = ring.from_bigint(c);
            for (v, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = ring.mul(&t, &powers[v][e as usize]);
                }
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    /// Evaluates at integer values.
    pub fn eval_int(&self, values: &[BigInt]) -> BigInt {
        assert_eq!(values.len(), self.nvars);
        let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(self.nvars);
        for (v, x) in values.iter().enumerate() {
            let top = self.max_exponent(v) as usize;
            let mut row = Vec::with_capacity(top + 1);
            row.push(BigInt::one());
            for e in 1..=top {
                let next = &row[e - 1] * x;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = BigInt::zero();
        let mut t = BigInt::zero();
        for (m, c) in &self.terms {
            t.clone_from(c);
            for (v, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            acc += &t;
        }
        acc
    }

    /// Substitutes `x_v -> values[v]` where the values are themselves
    /// polynomials (possibly in a different number of variables).
    pub fn substitute(&self, nvars: usize, values: &[IntPoly]) -> IntPoly {
        assert_eq!(values.len(), self.nvars);
        let mut powers: Vec<Vec<IntPoly>> = Vec::with_capacity(self.nvars);
        for (v, x) in values.iter().enumerate() {
            let top = self.max_exponent(v) as usize;
            let mut row = Vec::with_capacity(top + 1);
            row.push(IntPoly::one(nvars));
            for e in 1..=top {
                let next = row[e - 1].mul(x);
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = IntPoly::zero(nvars);
        for (m, c) in &self.terms {
            let mut t = IntPoly::constant(nvars, c.clone());
            for (v, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[v][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Reduction to the canonical representative of the induced function on
    /// `F_p`-points: coefficients in `[0, p)` and every positive exponent
    /// brought into `[1, p-1]` via `x^p = x`.
    pub fn reduce_fp_function(&self, p: u64) -> IntPoly {
        let pb = BigInt::from(p);
        let terms = self.terms.iter().map(|(m, c)| {
            let m2: Monomial = m
                .iter()
                .map(|&e| if e == 0 { 0 } else { ((e - 1) as u64 % (p - 1)) as u32 + 1 })
                .collect();
            (m2, c.mod_floor(&pb))
        });
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        let acc = acc.into_iter().map(|(m, c)| (m, c.mod_floor(&pb))).collect();
        Self::from_map(self.nvars, acc)
    }

    /// Coefficients reduced into `[0, p)` without touching exponents.
    pub fn reduce_coeffs_mod(&self, p: &BigInt) -> IntPoly {
        self.map_coeffs(|c| c.mod_floor(p))
    }

    /// Term list `[{"coeff": "3", "exponents": {"x0": 2}}, ...]`.
    pub fn to_json(&self, names: &[String]) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let exps: Map<String, Value> = m
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (names[i].clone(), json!(e)))
                        .collect();
                    json!({ "coeff": c.to_string(), "exponents": exps })
                })
                .collect(),
        )
    }

    /// Inverse of [`IntPoly::to_json`].
    pub fn from_json(names: &[String], v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse(format!("expected term list, got {v}")))?;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let coeff = parse_bigint(t.get("coeff").ok_or_else(|| Error::Parse("term without coeff".into()))?)?;
            let mut m = Monomial::from_elem(0, names.len());
            if let Some(exps) = t.get("exponents").and_then(Value::as_object) {
                for (name, e) in exps {
                    let i = names
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                    m[i] = e.as_u64().ok_or_else(|| Error::Parse(format!("bad exponent for {name}")))? as u32;
                }
            }
            terms.push((m, coeff));
        }
        Ok(Self::from_terms(names.len(), terms))
    }

    /// Formats with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest monomials first reads more naturally
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = format_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&abs.to_string());
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

pub(crate) fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[v].clone()),
            _ => parts.push(format!("{}^{}", names[v], e)),
        }
    }
    parts.join("*")
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        write!(f, "IntPoly({})", self.display_with(&names))
    }
}

/// A polynomial in nested Horner form with coefficients already mapped into
/// a ring, for repeated evaluation at many points.
#[derive(Clone, Debug)]
pub struct CompiledPoly<R: Ring> {
    nvars: usize,
    root: Option<HornerNode<R::Elem>>,
    max_exp: Vec<u32>,
}

#[derive(Clone, Debug)]
enum HornerNode<E> {
    Leaf(E),
    // children sorted by decreasing exponent of `var`
    Branch { var: usize, children: Vec<(u32, HornerNode<E>)> },
}

impl<R: Ring> CompiledPoly<R> {
    pub fn new(ring: &R, poly: &IntPoly) -> Self {
        let max_exp = (0..poly.nvars).map(|v| poly.max_exponent(v)).collect();
        let root = (!poly.terms.is_empty()).then(|| Self::build(ring, &poly.terms, 0, poly.nvars));
        CompiledPoly { nvars: poly.nvars, root, max_exp }
    }

    fn build(ring: &R, terms: &[(Monomial, BigInt)], var: usize, nvars: usize) -> HornerNode<R::Elem> {
        let mut var = var;
        while var < nvars && terms.iter().all(|(m, _)| m[var] == 0) {
            var += 1;
        }
        if var == nvars {
            let c = terms.iter().fold(BigInt::zero(), |acc, (_, c)| acc + c);
            return HornerNode::Leaf(ring.from_bigint(&c));
        }
        let mut groups: Vec<(u32, Vec<(Monomial, BigInt)>)> = Vec::new();
        let mut sorted: Vec<&(Monomial, BigInt)> = terms.iter().collect();
        let v = var;
        sorted.sort_by(|a, b| b.0[v].cmp(&a.0[v]));
        for t in sorted {
            match groups.last_mut() {
                Some((e, g)) if *e == t.0[v] => g.push(t.clone()),
                _ => groups.push((t.0[v], vec![t.clone()])),
            }
        }
        let children = groups.into_iter().map(|(e, g)| (e, Self::build(ring, &g, var + 1, nvars))).collect();
        HornerNode::Branch { var: v, children }
    }

    pub fn eval(&self, ring: &R, values: &[R::Elem]) -> R::Elem {
        assert_eq!(values.len(), self.nvars, "wrong number of values");
        let Some(root) = &self.root else { return ring.zero() };
        let powers: Vec<Vec<R::Elem>> = values
            .iter()
            .zip(&self.max_exp)
            .map(|(x, &top)| {
                let mut row = vec![ring.one()];
                for e in 1..=top as usize {
                    let next = ring.mul(&row[e - 1], x);
                    row.push(next);
                }
                row
            })
            .collect();
        let mut scratch = vec![ring.zero(); self.nvars + 1];
        Self::eval_node(ring, root, &powers, &mut scratch);
        scratch.swap_remove(0)
    }

    /// Writes the value of `node` into `scratch[0]`, using the rest of
    /// `scratch` for children so buffers are reused across terms.
    fn eval_node(ring: &R, node: &HornerNode<R::Elem>, powers: &[Vec<R::Elem>], scratch: &mut [R::Elem]) {
        let (out, rest) = scratch.split_first_mut().expect("scratch depth");
        match node {
            HornerNode::Leaf(c) => out.clone_from(c),
            HornerNode::Branch { var, children } => {
                let row = &powers[*var];
                let (e0, first) = &children[0];
                match first {
                    HornerNode::Leaf(c) => out.clone_from(c),
                    _ => {
                        Self::eval_node(ring, first, powers, rest);
                        std::mem::swap(out, &mut rest[0]);
                    }
                }
                let mut prev = *e0;
                for (e, child) in &children[1..] {
                    let m = &row[(prev - e) as usize];
                    match child {
                        HornerNode::Leaf(c) => ring.mul_add_assign(out, m, c),
                        _ => {
                            Self::eval_node(ring, child, powers, rest);
                            ring.mul_add_assign(out, m, &rest[0]);
                        }
                    }
                    prev = *e;
                }
                if prev != 0 {
                    let zero = ring.zero();
                    ring.mul_add_assign(out, &row[prev as usize], &zero);
                }
            }
        }
    }
}

/// p-adic valuation of a nonzero integer; `u32::MAX` for zero.
pub fn int_valuation(c: &BigInt, p: &BigInt) -> u32 {
    if c.is_zero() {
        return u32::MAX;
    }
    let mut k = 0;
    let mut x = c.clone();
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        x = q;
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> IntPoly {
        IntPoly::var(3, i)
    }

    #[test]
    fn binomial_square() {
        let s = x(0).add(&x(1));
        let sq = s.pow(2);
        let expect = x(0).mul(&x(0)).add(&x(0).mul(&x(1)).scale(&BigInt::from(2))).add(&x(1).mul(&x(1)));
        assert_eq!(sq, expect);
        assert_eq!(s.pow_binary(5), s.pow(5));
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = x(0).add(&x(1)).sub(&x(0));
        assert_eq!(p, x(1));
        assert!(x(2).sub(&x(2)).is_zero());
    }

    #[test]
    fn exact_division() {
        let p = x(0).mul(&x(1)).scale(&BigInt::from(6));
        assert_eq!(p.exact_div_int(&BigInt::from(3)).unwrap(), x(0).mul(&x(1)).scale(&BigInt::from(2)));
        assert!(p.exact_div_int(&BigInt::from(4)).is_none());
        assert_eq!(p.int_valuation(&BigInt::from(2)), Some(1));
    }

    #[test]
    fn fermat_reduction() {
        // x^4 * y^3 over F_3 reduces to x^2 * y
        let m = IntPoly::monomial(3, 0, 4, BigInt::from(4)).mul(&IntPoly::monomial(3, 1, 3, BigInt::one()));
        let r = m.reduce_fp_function(3);
        let expect = IntPoly::monomial(3, 0, 2, BigInt::one()).mul(&x(1));
        assert_eq!(r, expect);
    }

    #[test]
    fn substitution_matches_evaluation() {
        let p = x(0).mul(&x(0)).add(&x(1).scale(&BigInt::from(-3))).add(&IntPoly::one(3));
        let vals = [x(1).add(&x(2)), x(2), IntPoly::zero(3)];
        let s = p.substitute(3, &vals);
        let point = [BigInt::from(5), BigInt::from(-2), BigInt::from(7)];
        let inner: Vec<BigInt> = vals.iter().map(|v| v.eval_int(&point)).collect();
        assert_eq!(s.eval_int(&point), p.eval_int(&inner));
    }
}
