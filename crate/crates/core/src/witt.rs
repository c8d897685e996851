//! p-typical Witt vectors of finite length: the universal addition and
//! multiplication polynomials, derived from the ghost map, and arithmetic
//! with them over any base ring.

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rustc_hash::FxHashMap;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mpoly::{CompiledPoly, IntPoly, Monomial};
use crate::rings::{is_prime, Ring};

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{p} is not prime")))
    }
}

/// `w_j = sum_{i <= j} p^i x_i^(p^(j-i))` in variables
/// `x_offset, ..., x_(offset+j)` of an `nvars`-variable ring.
pub fn witt_polynomial_in(p: u64, j: u32, nvars: usize, offset: usize) -> IntPoly {
    let pb = BigInt::from(p);
    let mut acc = IntPoly::zero(nvars);
    for i in 0..=j {
        let e = p.pow(j - i) as u32;
        acc = acc.add(&IntPoly::monomial(nvars, offset + i as usize, e, pb.pow(i)));
    }
    acc
}

/// `w_j` in the variables `x_0, ..., x_j`.
pub fn witt_polynomial(p: u64, j: u32) -> IntPoly {
    witt_polynomial_in(p, j, j as usize + 1, 0)
}

/// How the defining system is solved. `Mirrored` exchanges the roles of
/// the two input vectors and subtracts known components from the top down,
/// then swaps the variables back; uniqueness forces the same answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EliminationOrder {
    Standard,
    Mirrored,
}

/// The polynomials `s_0..s_n` and `m_0..m_n` in `x_0..x_n, y_0..y_n` with
/// `w_j(s) = w_j(x) + w_j(y)` and `w_j(m) = w_j(x) w_j(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalWittLaw {
    p: u64,
    level: u32,
    sum: Vec<IntPoly>,
    prod: Vec<IntPoly>,
}

impl UniversalWittLaw {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.level as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self) -> &[IntPoly] {
        &self.sum
    }

    pub fn prod(&self) -> &[IntPoly] {
        &self.prod
    }

    /// `x0..xn` followed by `y0..yn`.
    pub fn var_names(&self) -> Vec<String> {
        let n = self.len();
        (0..n).map(|i| format!("x{i}")).chain((0..n).map(|i| format!("y{i}"))).collect()
    }

    pub fn to_json(&self) -> Value {
        let names = self.var_names();
        json!({
            "p": self.p,
            "level": self.level,
            "variables": names,
            "sum": self.sum.iter().map(|s| s.to_json(&names)).collect::<Vec<_>>(),
            "prod": self.prod.iter().map(|m| m.to_json(&names)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("Witt law without {k}")));
        let p = field("p")?.as_u64().ok_or_else(|| Error::Parse("bad p".into()))?;
        let level = field("level")?.as_u64().ok_or_else(|| Error::Parse("bad level".into()))? as u32;
        let mut law = UniversalWittLaw { p, level, sum: Vec::new(), prod: Vec::new() };
        let names = law.var_names();
        let polys = |k: &str| -> Result<Vec<IntPoly>> {
            let arr = field(k)?.as_array().ok_or_else(|| Error::Parse(format!("{k} is not a list")))?;
            if arr.len() != level as usize + 1 {
                return Err(Error::ShapeMismatch(format!("{k} has {} entries", arr.len())));
            }
            arr.iter().map(|t| IntPoly::from_json(&names, t)).collect()
        };
        law.sum = polys("sum")?;
        law.prod = polys("prod")?;
        Ok(law)
    }
}

/// Solves `p^j u_j = target_j - sum_{i<j} p^i u_i^(p^(j-i))` for each `j`.
pub(crate) fn solve_ghost_system(
    p: u64,
    targets: impl Iterator<Item = IntPoly>,
    order: EliminationOrder,
) -> Result<Vec<IntPoly>> {
    let pb = BigInt::from(p);
    let mut out: Vec<IntPoly> = Vec::new();
    // powers[i] = u_i^(p^k) for the current k = j - i
    let mut powers: Vec<IntPoly> = Vec::new();
    for (j, target) in targets.enumerate() {
        for pw in powers.iter_mut() {
            *pw = pw.pow_binary(p);
        }
        let mut known: Vec<usize> = (0..j).collect();
        if order == EliminationOrder::Mirrored {
            known.reverse();
        }
        let mut rest = target;
        for i in known {
            rest = rest.sub(&powers[i].scale(&pb.pow(i as u32)));
        }
        let u = rest.exact_div_int(&pb.pow(j as u32)).ok_or_else(|| Error::IntegralityViolation {
            component: j,
            detail: format!("coefficients not divisible by {p}^{j}"),
        })?;
        powers.push(u.clone());
        out.push(u);
    }
    Ok(out)
}

/// Derives the universal laws from the ghost equations with exact integer
/// division at every step.
pub fn derive_witt_laws(p: u64, level: u32) -> Result<UniversalWittLaw> {
    derive_witt_laws_with(p, level, EliminationOrder::Standard)
}

pub fn derive_witt_laws_with(p: u64, level: u32, order: EliminationOrder) -> Result<UniversalWittLaw> {
    check_prime(p)?;
    let len = level as usize + 1;
    let nv = 2 * len;
    let (xo, yo) = match order {
        EliminationOrder::Standard => (0, len),
        EliminationOrder::Mirrored => (len, 0),
    };
    let wx = |j: u32| witt_polynomial_in(p, j, nv, xo);
    let wy = |j: u32| witt_polynomial_in(p, j, nv, yo);
    let sum = solve_ghost_system(p, (0..=level).map(|j| wy(j).add(&wx(j))), order)?;
    let prod = solve_ghost_system(p, (0..=level).map(|j| wy(j).mul(&wx(j))), order)?;
    let (sum, prod) = if order == EliminationOrder::Mirrored {
        let swap = |q: &IntPoly| {
            q.map_monomials(nv, |m| {
                let mut out = Monomial::from_elem(0, nv);
                for i in 0..len {
                    out[i] = m[i + len];
                    out[i + len] = m[i];
                }
                out
            })
        };
        (sum.iter().map(swap).collect(), prod.iter().map(swap).collect())
    } else {
        (sum, prod)
    };
    Ok(UniversalWittLaw { p, level, sum, prod })
}

type LawCache = Mutex<FxHashMap<(u64, u32), Arc<UniversalWittLaw>>>;

/// The laws for `(p, level)`, derived once per process and shared.
pub fn universal_law(p: u64, level: u32) -> Result<Arc<UniversalWittLaw>> {
    static CACHE: OnceLock<LawCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(law) = cache.lock().expect("law cache").get(&(p, level)) {
        return Ok(law.clone());
    }
    let law = Arc::new(derive_witt_laws(p, level)?);
    Ok(cache.lock().expect("law cache").entry((p, level)).or_insert(law).clone())
}

/// A Witt vector `[x_0, ..., x_n]` over a base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVec<E> {
    pub p: u64,
    pub components: Vec<E>,
}

impl<E> WittVec<E> {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// `W_n(B)` for a base ring `B`, arithmetic through the universal laws.
#[derive(Clone, Debug)]
pub struct WittRing<R: Ring> {
    base: R,
    law: Arc<UniversalWittLaw>,
    sum: Vec<CompiledPoly<R>>,
    prod: Vec<CompiledPoly<R>>,
}

impl<R: Ring> WittRing<R> {
    pub fn new(base: R, p: u64, level: u32) -> Result<Self> {
        Ok(Self::with_law(base, universal_law(p, level)?))
    }

    pub fn with_law(base: R, law: Arc<UniversalWittLaw>) -> Self {
        let sum = law.sum.iter().map(|s| CompiledPoly::new(&base, s)).collect();
        let prod = law.prod.iter().map(|m| CompiledPoly::new(&base, m)).collect();
        WittRing { base, law, sum, prod }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn law(&self) -> &UniversalWittLaw {
        &self.law
    }

    pub fn p(&self) -> u64 {
        self.law.p
    }

    pub fn len(&self) -> usize {
        self.law.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vector(&self, components: Vec<R::Elem>) -> Result<WittVec<R::Elem>> {
        if components.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} components, got {}",
                self.len(),
                components.len()
            )));
        }
        if let Some(c) = components.iter().find(|c| !self.base.contains(c)) {
            return Err(Error::RingMismatch(format!("{c:?} is not in {}", self.base.descriptor())));
        }
        Ok(WittVec { p: self.p(), components })
    }

    pub fn zero(&self) -> WittVec<R::Elem> {
        WittVec { p: self.p(), components: vec![self.base.zero(); self.len()] }
    }

    pub fn one(&self) -> WittVec<R::Elem> {
        let mut c = vec![self.base.zero(); self.len()];
        c[0] = self.base.one();
        WittVec { p: self.p(), components: c }
    }

    fn check(&self, u: &WittVec<R::Elem>) -> Result<()> {
        if u.p != self.p() || u.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "Witt vector (p = {}, length {}) used in W_{} with p = {}",
                u.p,
                u.len(),
                self.law.level,
                self.p()
            )));
        }
        Ok(())
    }

    fn apply(&self, polys: &[CompiledPoly<R>], u: &WittVec<R::Elem>, v: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.check(u)?;
        self.check(v)?;
        let values: Vec<R::Elem> = u.components.iter().chain(&v.components).cloned().collect();
        let components = polys.iter().map(|s| s.eval(&self.base, &values)).collect();
        Ok(WittVec { p: self.p(), components })
    }

    pub fn add(&self, u: &WittVec<R::Elem>, v: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.apply(&self.sum, u, v)
    }

    pub fn mul(&self, u: &WittVec<R::Elem>, v: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.apply(&self.prod, u, v)
    }

    pub fn to_json(&self, u: &WittVec<R::Elem>) -> Value {
        json!({
            "p": u.p,
            "components": u.components.iter().map(|c| self.base.elem_to_json(c)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(&self, v: &Value) -> Result<WittVec<R::Elem>> {
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| Error::Parse("Witt vector without p".into()))?;
        if p != self.p() {
            return Err(Error::ShapeMismatch(format!("Witt vector has p = {p}, expected {}", self.p())));
        }
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("Witt vector without components".into()))?;
        let comps = comps.iter().map(|c| self.base.elem_from_json(c)).collect::<Result<Vec<_>>>()?;
        self.vector(comps)
    }
}

/// Ghost components `[w_0(u), ..., w_n(u)]` evaluated in the base ring.
pub fn ghost_map<R: Ring>(ring: &R, p: u64, components: &[R::Elem]) -> Vec<R::Elem> {
    let pe = ring.from_i64(p as i64);
    // frob[i] = x_i^(p^(j-i)) for the current j
    let mut frob: Vec<R::Elem> = Vec::with_capacity(components.len());
    let mut out = Vec::with_capacity(components.len());
    for (j, x) in components.iter().enumerate() {
        for f in frob.iter_mut() {
            *f = ring.pow(f, p);
        }
        frob.push(x.clone());
        let mut acc = ring.zero();
        let mut pi = ring.one();
        for f in frob.iter().take(j + 1) {
            acc = ring.add(&acc, &ring.mul(&pi, f));
            pi = ring.mul(&pi, &pe);
        }
        out.push(acc);
    }
    out
}

/// `W_n(F_p) -> Z/p^(n+1)`: the last ghost component of any lift.
pub fn witt_to_residue_from_lifts(p: u64, lifts: &[BigInt]) -> BigInt {
    let n = lifts.len() as u32;
    let modulus = BigInt::from(p).pow(n);
    let mut acc = BigInt::zero();
    let pb = BigInt::from(p);
    for (i, x) in lifts.iter().enumerate() {
        let e = BigInt::from(p).pow(n - 1 - i as u32);
        acc += pb.pow(i as u32) * x.modpow(&e, &modulus);
    }
    acc.mod_floor(&modulus)
}

/// `W_n(F_p) -> Z/p^(n+1)` using the representatives in `[0, p)`.
pub fn witt_to_residue(p: u64, components: &[u64]) -> BigInt {
    let lifts: Vec<BigInt> = components.iter().map(|&c| BigInt::from(c % p)).collect();
    witt_to_residue_from_lifts(p, &lifts)
}

/// Inverse of [`witt_to_residue`]: peels off `x_0 = x mod p`, then recurses
/// on `(x - x_0^(p^n)) / p` at one level lower.
pub fn residue_to_witt(p: u64, level: u32, x: &BigInt) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out = Vec::with_capacity(level as usize + 1);
    let mut cur = x.mod_floor(&pb.pow(level + 1));
    for k in (0..=level).rev() {
        let modulus = pb.pow(k + 1);
        let x0 = cur.mod_floor(&pb);
        let lead = x0.modpow(&pb.pow(k), &modulus);
        let rest = (&cur - lead).mod_floor(&modulus);
        debug_assert!(rest.is_multiple_of(&pb));
        out.push(u64::try_from(&x0).expect("digit below p"));
        cur = rest / &pb;
    }
    out
}

/// The Witt vector of an integer: the unique `[c_0, ...]` over `Z` whose
/// ghost components all equal `c`.
pub fn integer_witt_vector(p: u64, level: u32, c: &BigInt) -> Result<Vec<BigInt>> {
    let pb = BigInt::from(p);
    let mut out: Vec<BigInt> = Vec::new();
    let mut powers: Vec<BigInt> = Vec::new();
    for j in 0..=level {
        for pw in powers.iter_mut() {
            *pw = pw.pow(p as u32);
        }
        let mut rest = c.clone();
        for (i, pw) in powers.iter().enumerate() {
            rest -= pb.pow(i as u32) * pw;
        }
        let (q, r) = rest.div_rem(&pb.pow(j));
        if !r.is_zero() {
            return Err(Error::IntegralityViolation { component: j as usize, detail: format!("integer {c}") });
        }
        powers.push(q.clone());
        out.push(q);
    }
    Ok(out)
}

/// `p` as an integer power, for callers sizing residue rings.
pub fn residue_modulus(p: u64, level: u32) -> BigInt {
    BigInt::from(p).pow(level + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{Integers, Zmod};

    fn names(law: &UniversalWittLaw) -> Vec<String> {
        law.var_names()
    }

    #[test]
    fn low_level_laws() {
        let law = derive_witt_laws(2, 1).unwrap();
        let n = names(&law);
        assert_eq!(law.sum()[0].display_with(&n), "x0 + y0");
        assert_eq!(law.prod()[0].display_with(&n), "x0*y0");
        let expected_s1 = IntPoly::var(4, 1).add(&IntPoly::var(4, 3)).sub(&IntPoly::var(4, 0).mul(&IntPoly::var(4, 2)));
        assert_eq!(law.sum()[1], expected_s1);
        let x = |i| IntPoly::var(4, i);
        let expected_m1 = x(0)
            .pow(2)
            .mul(&x(3))
            .add(&x(1).mul(&x(2).pow(2)))
            .add(&x(1).mul(&x(3)).scale(&BigInt::from(2)));
        assert_eq!(law.prod()[1], expected_m1);
    }

    #[test]
    fn witt_polynomials() {
        assert_eq!(witt_polynomial(2, 2).display_with(&["x0".into(), "x1".into(), "x2".into()]), "x0^4 + 2*x1^2 + 4*x2");
    }

    #[test]
    fn arithmetic_over_f2() {
        let w = WittRing::new(Zmod::new(2).unwrap(), 2, 1).unwrap();
        let one = w.vector(vec![1, 0]).unwrap();
        assert_eq!(w.add(&one, &one).unwrap().components, vec![0, 1]);
        let three = w.vector(vec![1, 1]).unwrap();
        assert_eq!(w.mul(&three, &three).unwrap().components, vec![1, 0]);
    }

    #[test]
    fn residue_bijection_p2_n1() {
        let table = [([0, 0], 0), ([1, 0], 1), ([0, 1], 2), ([1, 1], 3)];
        for (v, x) in table {
            assert_eq!(witt_to_residue(2, &v), BigInt::from(x));
            assert_eq!(residue_to_witt(2, 1, &BigInt::from(x)), v.to_vec());
        }
    }

    #[test]
    fn ghost_examples() {
        let z = Integers::new();
        let g = ghost_map(&z, 2, &[BigInt::from(3), BigInt::from(5)]);
        assert_eq!(g, vec![BigInt::from(3), BigInt::from(19)]);
    }

    #[test]
    fn integer_vectors_have_constant_ghosts() {
        let z = Integers::new();
        for c in [-7i64, 0, 1, 2, 10] {
            let v = integer_witt_vector(3, 3, &BigInt::from(c)).unwrap();
            assert!(ghost_map(&z, 3, &v).iter().all(|g| *g == BigInt::from(c)));
        }
    }

    #[test]
    fn mirrored_elimination_agrees() {
        for (p, n) in [(2, 2), (3, 2)] {
            assert_eq!(
                derive_witt_laws(p, n).unwrap(),
                derive_witt_laws_with(p, n, EliminationOrder::Mirrored).unwrap()
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let law = derive_witt_laws(3, 1).unwrap();
        assert_eq!(UniversalWittLaw::from_json(&law.to_json()).unwrap(), law);
    }
}
