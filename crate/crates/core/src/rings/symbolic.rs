use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::{parse_bigint, HalfQuotient, Ring, RingDescriptor, Valuation};
use crate::error::{Error, Result};
use crate::mpoly::{int_valuation, IntPoly, Monomial};

/// The distinguished element of a symbolic ring: one of the generators, or
/// an integer prime (for polynomial rings over `Z` with `q = p`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymQ {
    Generator(usize),
    Integer(u64),
}

/// `Z[x_1..x_k][1/b]`, optionally truncated at `q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbolic {
    names: Arc<[String]>,
    inverted: Option<usize>,
    q: SymQ,
    truncation: Option<u32>,
}

/// `num / b^den`, with `b` not dividing `num` whenever `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymElem {
    num: IntPoly,
    den: u32,
}

impl SymElem {
    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator_exponent(&self) -> u32 {
        self.den
    }
}

/// One term `coeff * monomial / b^den` after cancelling powers of `b`.
struct LaurentTerm {
    coeff: BigInt,
    exponents: BTreeMap<String, u32>,
    den: u32,
}

impl LaurentTerm {
    fn sort_key(&self) -> (Vec<(&str, u32)>, u32) {
        (self.exponents.iter().map(|(k, v)| (k.as_str(), *v)).collect(), self.den)
    }
}

impl Symbolic {
    pub fn new(names: Vec<String>, inverted: Option<&str>, q: SymQ, truncation: Option<u32>) -> Result<Self> {
        let inverted = match inverted {
            Some(b) => Some(
                names
                    .iter()
                    .position(|n| n == b)
                    .ok_or_else(|| Error::InvalidRing(format!("inverted generator {b} not among generators")))?,
            ),
            None => None,
        };
        match q {
            SymQ::Generator(i) if i >= names.len() => {
                return Err(Error::InvalidRing("q generator index out of range".into()))
            }
            SymQ::Generator(i) if Some(i) == inverted => {
                return Err(Error::InvalidRing("q cannot be the inverted generator".into()))
            }
            SymQ::Integer(p) if !super::is_prime(p) => {
                return Err(Error::InvalidRing(format!("q = {p} is not prime")))
            }
            _ => {}
        }
        if truncation == Some(0) {
            return Err(Error::InvalidRing("truncation exponent must be positive".into()));
        }
        Ok(Symbolic { names: names.into(), inverted, q, truncation })
    }

    /// `Z[a,b,c,d,e,1/b][q]`, truncated at `q^n` when given.
    pub fn generic(truncation: Option<u32>) -> Self {
        let names = ["a", "b", "c", "d", "e", "q"].iter().map(|s| s.to_string()).collect();
        Symbolic::new(names, Some("b"), SymQ::Generator(5), truncation).expect("static ring is valid")
    }

    /// `Z[names]` with `q = p`.
    pub fn integer_polys(names: Vec<String>, p: u64) -> Result<Self> {
        Symbolic::new(names, None, SymQ::Integer(p), None)
    }

    pub fn from_descriptor(d: &RingDescriptor) -> Result<Self> {
        match d {
            RingDescriptor::Symbolic { generators, inverted, q, truncation } => {
                let sq = match generators.iter().position(|g| g == q) {
                    Some(i) => SymQ::Generator(i),
                    None => SymQ::Integer(
                        q.parse().map_err(|_| Error::InvalidRing(format!("q = {q:?} is neither a generator nor an integer")))?,
                    ),
                };
                Symbolic::new(generators.clone(), inverted.as_deref(), sq, *truncation)
            }
            other => Err(Error::InvalidRing(format!("not a symbolic descriptor: {other}"))),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn q_kind(&self) -> &SymQ {
        &self.q
    }

    pub fn inverted(&self) -> Option<usize> {
        self.inverted
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var(&self, index: usize) -> SymElem {
        self.from_poly(IntPoly::var(self.nvars(), index))
    }

    pub fn gen(&self, name: &str) -> Result<SymElem> {
        let i = self.index_of(name).ok_or_else(|| Error::Parse(format!("unknown generator {name}")))?;
        Ok(self.var(i))
    }

    pub fn from_poly(&self, p: IntPoly) -> SymElem {
        assert_eq!(p.nvars(), self.nvars(), "polynomial arity does not match ring");
        self.normalize(p, 0)
    }

    /// The numerator polynomial of an element with no denominator.
    pub fn to_poly(&self, a: &SymElem) -> Option<IntPoly> {
        (a.den == 0).then(|| a.num.clone())
    }

    fn q_power_modulus(&self) -> Option<BigInt> {
        match (&self.q, self.truncation) {
            (SymQ::Integer(p), Some(n)) => Some(num_traits::pow(BigInt::from(*p), n as usize)),
            _ => None,
        }
    }

    fn normalize(&self, mut num: IntPoly, mut den: u32) -> SymElem {
        if let Some(n) = self.truncation {
            match self.q {
                SymQ::Generator(qi) => {
                    if num.max_exponent(qi) >= n {
                        num = num.filter_terms(|m, _| m[qi] < n);
                    }
                }
                SymQ::Integer(_) => {
                    let modulus = self.q_power_modulus().expect("truncated");
                    num = num.reduce_coeffs_mod(&modulus);
                }
            }
        }
        if num.is_zero() {
            return SymElem { num, den: 0 };
        }
        if let Some(b) = self.inverted {
            let k = num.min_exponent(b).unwrap_or(0).min(den);
            if k > 0 {
                num = num.shift_var(b, -(k as i64));
                den -= k;
            }
        }
        SymElem { num, den }
    }

    fn rescale(&self, a: &SymElem, den: u32) -> IntPoly {
        match self.inverted {
            Some(b) if den > a.den => a.num.shift_var(b, (den - a.den) as i64),
            _ => a.num.clone(),
        }
    }

    /// Evaluates at values of the generators in another ring; the inverted
    /// generator must map to a unit.
    pub fn eval_in<R: Ring>(&self, a: &SymElem, ring: &R, values: &[R::Elem]) -> Result<R::Elem> {
        let num = a.num.eval(ring, values);
        if a.den == 0 {
            return Ok(num);
        }
        let b = self.inverted.expect("denominator implies an inverted generator");
        let binv = ring.inv(&values[b])?;
        Ok(ring.mul(&num, &ring.pow(&binv, a.den as u64)))
    }

    fn laurent_terms(&self, a: &SymElem) -> Vec<LaurentTerm> {
        let mut out: Vec<LaurentTerm> = a
            .num
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut den = a.den;
                let mut exponents = BTreeMap::new();
                for (v, &e) in m.iter().enumerate() {
                    let mut e = e;
                    if Some(v) == self.inverted {
                        let k = e.min(den);
                        e -= k;
                        den -= k;
                    }
                    if e > 0 {
                        exponents.insert(self.names[v].clone(), e);
                    }
                }
                LaurentTerm { coeff: c.clone(), exponents, den }
            })
            .collect();
        out.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
        out
    }

    fn unit_monomial_inverse(&self, a: &SymElem) -> Option<SymElem> {
        if a.num.len() != 1 {
            return None;
        }
        let (m, c) = &a.num.terms()[0];
        let only_b = m.iter().enumerate().all(|(v, &e)| e == 0 || Some(v) == self.inverted);
        if !only_b {
            return None;
        }
        let cinv = match self.q_power_modulus() {
            Some(modulus) => {
                let g = c.extended_gcd(&modulus);
                if !g.gcd.is_one() {
                    return None;
                }
                g.x.mod_floor(&modulus)
            }
            None if c.abs().is_one() => c.clone(),
            None => return None,
        };
        let bexp = self.inverted.map(|b| m[b]).unwrap_or(0);
        let mut num = IntPoly::constant(self.nvars(), cinv);
        if let Some(b) = self.inverted {
            num = num.shift_var(b, a.den as i64);
        }
        Some(self.normalize(num, bexp))
    }
}

impl Ring for Symbolic {
    type Elem = SymElem;

    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Symbolic {
            generators: self.names.to_vec(),
            inverted: self.inverted.map(|b| self.names[b].clone()),
            q: match self.q {
                SymQ::Generator(i) => self.names[i].clone(),
                SymQ::Integer(p) => p.to_string(),
            },
            truncation: self.truncation,
        }
    }

    fn zero(&self) -> SymElem {
        SymElem { num: IntPoly::zero(self.nvars()), den: 0 }
    }

    fn one(&self) -> SymElem {
        SymElem { num: IntPoly::one(self.nvars()), den: 0 }
    }

    fn from_bigint(&self, n: &BigInt) -> SymElem {
        self.normalize(IntPoly::constant(self.nvars(), n.clone()), 0)
    }

    fn is_zero(&self, a: &SymElem) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &SymElem, b: &SymElem) -> SymElem {
        if a.den == b.den {
            return self.normalize(a.num.add(&b.num), a.den);
        }
        let d = a.den.max(b.den);
        self.normalize(self.rescale(a, d).add(&self.rescale(b, d)), d)
    }

    fn neg(&self, a: &SymElem) -> SymElem {
        let num = a.num.neg();
        match self.q_power_modulus() {
            Some(_) => self.normalize(num, a.den),
            None => SymElem { num, den: a.den },
        }
    }

    fn mul(&self, a: &SymElem, b: &SymElem) -> SymElem {
        self.normalize(a.num.mul(&b.num), a.den + b.den)
    }

    fn inv(&self, a: &SymElem) -> Result<SymElem> {
        let not_unit = || Error::NotAUnit(self.display(a));
        let (unit, nil) = match (&self.q, self.truncation) {
            (SymQ::Generator(qi), Some(_)) => {
                let qi = *qi;
                let u = SymElem { num: a.num.filter_terms(|m, _| m[qi] == 0), den: a.den };
                let n = SymElem { num: a.num.filter_terms(|m, _| m[qi] > 0), den: a.den };
                (self.normalize(u.num, u.den), self.normalize(n.num, n.den))
            }
            _ => (a.clone(), self.zero()),
        };
        let u = self.unit_monomial_inverse(&unit).ok_or_else(not_unit)?;
        if self.is_zero(&nil) {
            return Ok(u);
        }
        // a = unit * (1 + x) with x nilpotent
        let x = self.mul(&u, &nil);
        let minus_x = self.neg(&x);
        let mut term = self.one();
        let mut acc = self.zero();
        while !self.is_zero(&term) {
            acc = self.add(&acc, &term);
            term = self.mul(&term, &minus_x);
        }
        Ok(self.mul(&u, &acc))
    }

    fn is_nilpotent(&self, a: &SymElem) -> bool {
        match (&self.q, self.truncation) {
            (SymQ::Generator(qi), Some(_)) => a.num.terms().iter().all(|(m, _)| m[*qi] > 0),
            (SymQ::Integer(p), Some(_)) => {
                let p = BigInt::from(*p);
                a.num.terms().iter().all(|(_, c)| c.is_multiple_of(&p))
            }
            _ => a.num.is_zero(),
        }
    }

    fn contains(&self, a: &SymElem) -> bool {
        a.num.nvars() == self.nvars() && self.normalize(a.num.clone(), a.den) == *a
    }

    fn q(&self) -> Result<SymElem> {
        Ok(match self.q {
            SymQ::Generator(i) => self.var(i),
            SymQ::Integer(p) => self.from_bigint(&BigInt::from(p)),
        })
    }

    fn precision(&self) -> Option<u32> {
        self.truncation
    }

    fn q_valuation(&self, a: &SymElem) -> Result<Valuation> {
        if a.num.is_zero() {
            return Ok(Valuation::Infinity);
        }
        Ok(Valuation::Finite(match self.q {
            SymQ::Generator(qi) => a.num.min_exponent(qi).unwrap_or(0),
            SymQ::Integer(p) => {
                let p = BigInt::from(p);
                a.num.terms().iter().map(|(_, c)| int_valuation(c, &p)).min().unwrap_or(0)
            }
        }))
    }

    fn exact_div_by_q(&self, a: &SymElem, k: u32) -> Result<SymElem> {
        if !self.q_valuation(a)?.at_least(k) {
            return Err(Error::NotDivisible { element: self.display(a), power: k });
        }
        if a.num.is_zero() {
            return Ok(self.zero());
        }
        let num = match self.q {
            SymQ::Generator(qi) => a.num.shift_var(qi, -(k as i64)),
            SymQ::Integer(p) => {
                let d = num_traits::pow(BigInt::from(p), k as usize);
                a.num.exact_div_int(&d).expect("valuation checked")
            }
        };
        Ok(self.normalize(num, a.den))
    }

    fn with_precision(&self, n: u32) -> Result<Self> {
        Symbolic::new(
            self.names.to_vec(),
            self.inverted.map(|b| self.names[b].as_str()),
            self.q.clone(),
            Some(n),
        )
    }

    fn coerce_from(&self, _from: &Self, a: &SymElem) -> SymElem {
        self.normalize(a.num.clone(), a.den)
    }

    fn residue_characteristic(&self) -> Option<u64> {
        None
    }

    fn half_quotient(&self) -> Option<HalfQuotient<Self>> {
        let n = self.truncation?;
        if n < 2 {
            return None;
        }
        let r = n.div_ceil(2);
        Some(HalfQuotient {
            quotient: self.with_precision(r).ok()?,
            generator: self.q_pow(r).ok()?,
            annihilator_quotient: self.with_precision(n - r).ok()?,
        })
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }

    fn elements(&self, _limit: u64) -> Option<Vec<SymElem>> {
        None
    }

    fn random_elem<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> SymElem {
        let nv = self.nvars();
        let nterms = rng.gen_range(0..=3);
        let terms: Vec<(Monomial, BigInt)> = (0..nterms)
            .map(|_| {
                let mut m = Monomial::from_elem(0, nv);
                for _ in 0..2 {
                    m[rng.gen_range(0..nv)] += rng.gen_range(0..=2);
                }
                let mut c = rng.gen_range(-3i64..=3);
                if c == 0 {
                    c = 1;
                }
                (m, BigInt::from(c))
            })
            .collect();
        let den = if self.inverted.is_some() { rng.gen_range(0..=1) } else { 0 };
        self.normalize(IntPoly::from_terms(nv, terms), den)
    }

    fn elem_to_json(&self, a: &SymElem) -> Value {
        Value::Array(
            self.laurent_terms(a)
                .into_iter()
                .map(|t| {
                    json!({
                        "coeff": t.coeff.to_string(),
                        "exponents": t.exponents,
                        "b_denominator": t.den,
                    })
                })
                .collect(),
        )
    }

    fn elem_from_json(&self, v: &Value) -> Result<SymElem> {
        let arr = v.as_array().ok_or_else(|| Error::Parse(format!("expected term list, got {v}")))?;
        let mut parsed = Vec::with_capacity(arr.len());
        for t in arr {
            let coeff = parse_bigint(t.get("coeff").ok_or_else(|| Error::Parse("term without coeff".into()))?)?;
            let mut m = Monomial::from_elem(0, self.nvars());
            if let Some(exps) = t.get("exponents").and_then(Value::as_object) {
                for (name, e) in exps {
                    let i = self.index_of(name).ok_or_else(|| Error::Parse(format!("unknown generator {name}")))?;
                    m[i] = e.as_u64().ok_or_else(|| Error::Parse(format!("bad exponent for {name}")))? as u32;
                }
            }
            let den = t.get("b_denominator").and_then(Value::as_u64).unwrap_or(0) as u32;
            if den > 0 && self.inverted.is_none() {
                return Err(Error::Parse("denominator in a ring without an inverted generator".into()));
            }
            parsed.push((m, coeff, den));
        }
        let top = parsed.iter().map(|t| t.2).max().unwrap_or(0);
        let terms = parsed.into_iter().map(|(mut m, c, den)| {
            if let Some(b) = self.inverted {
                m[b] += top - den;
            }
            (m, c)
        });
        Ok(self.normalize(IntPoly::from_terms(self.nvars(), terms), top))
    }

    fn display(&self, a: &SymElem) -> String {
        let terms = self.laurent_terms(a);
        if terms.is_empty() {
            return "0".into();
        }
        let bname = self.inverted.map(|b| self.names[b].as_str()).unwrap_or("b");
        let mut out = String::new();
        for (idx, t) in terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = t.coeff.abs();
            let mono: Vec<String> = t
                .exponents
                .iter()
                .map(|(n, &e)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            let mut body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono.join("*")
            } else {
                format!("{abs}*{}", mono.join("*"))
            };
            match t.den {
                0 => {}
                1 => body = format!("{body}/{bname}"),
                k => body = format!("{body}/{bname}^{k}"),
            }
            out.push_str(&body);
        }
        out
    }
}

impl Symbolic {
    /// Total order on elements via their canonical JSON term lists; handy for
    /// deterministic output.
    pub fn cmp_elems(&self, a: &SymElem, b: &SymElem) -> Ordering {
        self.elem_to_json(a).to_string().cmp(&self.elem_to_json(b).to_string())
    }
}
