//! Group laws over `F_p` whose points are `A_d(Z/p^d)` or the automorphisms
//! of `A^1` over `Z/p^(n+1)` with bounded degree.
//!
//! A coefficient of `T^k` is a Witt vector whose first `v(k)` components are
//! pinned to zero, `v(k)` being the p-adic valuation the subgroup imposes.
//! The unprimed coordinates describe `f`, the primed ones `g`, and the
//! relations give the coordinates of `f∘g`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::autgroup::TruncPoly;
use crate::error::{Error, Result};
use crate::mpoly::{CompiledPoly, IntPoly};
use crate::rings::{Ring, Zmod};
use crate::sample::atilde_valuation;
use crate::witt::{residue_to_witt, solve_ghost_system, witt_to_residue, EliminationOrder};

/// How the degree cap of the full group is imposed: `Graded` uses the
/// valuations `deg(f mod p^m) <= D 2^(m-2)`, a subgroup at every precision;
/// `Uniform` allows any nilpotent coefficient up to degree `D`, which is
/// closed under composition only at precision 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapMode {
    Graded,
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "snake_case")]
pub enum LawKind {
    Ad { d: u32 },
    Full { precision: u32, cap: u32, mode: CapMode },
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawKind::Ad { d } => write!(f, "A_{d}"),
            LawKind::Full { precision, cap, mode } => {
                write!(f, "Aut mod p^{precision}, degree cap {cap} ({})", match mode {
                    CapMode::Graded => "graded",
                    CapMode::Uniform => "uniform",
                })
            }
        }
    }
}

/// `Integral` keeps the integer polynomials; `ModP` reduces coefficients
/// mod p, dropping every term with a factor p; `Fermat` also rewrites
/// `x^p` as `x`, giving the canonical form of the function on `F_p`-points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Simplification {
    Integral,
    ModP,
    Fermat,
}

/// Component `component` of the Witt vector carrying the coefficient of
/// `T^degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub degree: usize,
    pub component: u32,
}

fn letter(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("t{k}")
    }
}

impl Coordinate {
    pub fn name(&self) -> String {
        format!("{}_{}", letter(self.degree), self.component)
    }
}

/// Witt level and the pinned valuation of each coefficient slot.
fn shape(kind: &LawKind) -> Result<(u32, Vec<u32>)> {
    match *kind {
        LawKind::Ad { d } => {
            if d == 0 {
                return Err(Error::OutOfRange("A_d needs d >= 1".into()));
            }
            let vals = (0..=d as usize).map(|k| (k as u32).saturating_sub(1)).collect();
            Ok((d - 1, vals))
        }
        LawKind::Full { precision, cap, mode } => {
            if precision == 0 || cap == 0 {
                return Err(Error::OutOfRange("precision and degree cap must be positive".into()));
            }
            if precision == 1 || cap == 1 {
                return Ok((precision - 1, vec![0, 0]));
            }
            let vals = match mode {
                CapMode::Uniform => (0..=cap as usize).map(|k| if k < 2 { 0 } else { 1 }).collect(),
                CapMode::Graded => {
                    let top = cap as u64 * (1u64 << (precision - 2));
                    (0..=top).map(|k| atilde_valuation(k, cap, precision)).collect()
                }
            };
            Ok((precision - 1, vals))
        }
    }
}

/// `f∘g` truncated above `top`, coefficients lowest degree first.
fn compose_truncated(f: &[IntPoly], g: &[IntPoly], top: usize, nvars: usize) -> Vec<IntPoly> {
    let mut acc: Vec<IntPoly> = vec![IntPoly::zero(nvars); top + 1];
    for fj in f.iter().rev() {
        let mut next = vec![IntPoly::zero(nvars); top + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.iter().enumerate() {
                if i + j > top {
                    break;
                }
                if !b.is_zero() {
                    next[i + j] = next[i + j].add(&a.mul(b));
                }
            }
        }
        next[0] = next[0].add(fj);
        acc = next;
    }
    acc
}

fn simplify_poly(poly: &IntPoly, p: u64, level: Simplification) -> IntPoly {
    match level {
        Simplification::Integral => poly.clone(),
        Simplification::ModP => poly.reduce_coeffs_mod(&BigInt::from(p)),
        Simplification::Fermat => poly.reduce_fp_function(p),
    }
}

/// The multiplication of a group over `F_p` as one polynomial per output
/// coordinate, in the variables `coords, coords', y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLaw {
    p: u64,
    kind: LawKind,
    level: u32,
    valuations: Vec<u32>,
    coords: Vec<Coordinate>,
    relations: Vec<IntPoly>,
    pinned: Vec<(Coordinate, IntPoly)>,
    simplification: Simplification,
}

/// The law of `A_d(Z, p)`, realized over `Z/p^d`.
pub fn group_law_ad(p: u64, d: u32, simplification: Simplification) -> Result<GroupLaw> {
    GroupLaw::generate(p, LawKind::Ad { d }, simplification)
}

/// The law of automorphisms mod `p^precision` with degree cap `cap`.
pub fn group_law_full(p: u64, precision: u32, cap: u32, mode: CapMode, simplification: Simplification) -> Result<GroupLaw> {
    GroupLaw::generate(p, LawKind::Full { precision, cap, mode }, simplification)
}

impl GroupLaw {
    pub fn generate(p: u64, kind: LawKind, simplification: Simplification) -> Result<GroupLaw> {
        if !crate::rings::is_prime(p) {
            return Err(Error::OutOfRange(format!("{p} is not prime")));
        }
        let (level, valuations) = shape(&kind)?;
        let coords = coordinates(level, &valuations);
        let n = coords.len();
        let nv = 2 * n + 1;
        let top = valuations.len() - 1;
        let index = |k: usize, i: u32| coords.iter().position(|c| c.degree == k && c.component == i);
        let pb = BigInt::from(p);
        let ghost = |offset: usize, k: usize, i: u32| {
            let mut acc = IntPoly::zero(nv);
            for j in valuations[k]..=i {
                let v = index(k, j).expect("unpinned coordinate") + offset;
                acc = acc.add(&IntPoly::monomial(nv, v, p.pow(i - j) as u32, pb.pow(j)));
            }
            acc
        };
        let mut targets: Vec<Vec<IntPoly>> = vec![Vec::new(); top + 1];
        for i in 0..=level {
            let f: Vec<IntPoly> = (0..=top).map(|k| ghost(0, k, i)).collect();
            let g: Vec<IntPoly> = (0..=top).map(|k| ghost(n, k, i)).collect();
            for (k, c) in compose_truncated(&f, &g, top, nv).into_iter().enumerate() {
                targets[k].push(c);
            }
        }
        let mut relations = Vec::with_capacity(n);
        let mut pinned = Vec::new();
        for (k, t) in targets.into_iter().enumerate() {
            let comps = solve_ghost_system(p, t.into_iter(), EliminationOrder::Standard)?;
            for (i, c) in comps.into_iter().enumerate() {
                let c = simplify_poly(&c, p, simplification);
                let coord = Coordinate { degree: k, component: i as u32 };
                if (i as u32) < valuations[k] {
                    pinned.push((coord, c));
                } else {
                    relations.push(c);
                }
            }
        }
        Ok(GroupLaw { p, kind, level, valuations, coords, relations, pinned, simplification })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    /// Witt level; the points realize a group over `Z/p^(level+1)`.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn max_degree(&self) -> usize {
        self.valuations.len() - 1
    }

    /// Pinned valuation of each coefficient slot.
    pub fn valuations(&self) -> &[u32] {
        &self.valuations
    }

    pub fn coordinates(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn relations(&self) -> &[IntPoly] {
        &self.relations
    }

    /// Output components that the subgroup pins to zero, as polynomials
    /// that must vanish on all points.
    pub fn pinned(&self) -> &[(Coordinate, IntPoly)] {
        &self.pinned
    }

    pub fn simplification(&self) -> Simplification {
        self.simplification
    }

    pub fn coordinate_names(&self) -> Vec<String> {
        self.coords.iter().map(Coordinate::name).collect()
    }

    /// `coords, coords', y`.
    pub fn variable_names(&self) -> Vec<String> {
        let mut names = self.coordinate_names();
        names.extend(self.coords.iter().map(|c| format!("{}'", c.name())));
        names.push("y".into());
        names
    }

    pub fn relation_names(&self) -> Vec<String> {
        self.coords.iter().map(|c| format!("{}''", c.name())).collect()
    }

    /// Index of the unit coordinate `b_0`.
    pub fn unit_index(&self) -> usize {
        self.coords.iter().position(|c| c.degree == 1 && c.component == 0).expect("b_0 is never pinned")
    }

    /// `b_0 y - 1`, whose zero locus is `b_0 != 0`.
    pub fn unit_relation(&self) -> IntPoly {
        let nv = 2 * self.dimension() + 1;
        let b0 = IntPoly::var(nv, self.unit_index());
        b0.mul(&IntPoly::var(nv, nv - 1)).sub(&IntPoly::one(nv))
    }

    /// The relation for the output coordinate called `name` (e.g. `"c_1"`).
    /// The relation for a coordinate, named either `c_1` or `c_1''`.
    pub fn relation(&self, name: &str) -> Option<&IntPoly> {
        let name = name.trim_end_matches('\'');
        self.coords.iter().position(|c| c.name() == name).map(|i| &self.relations[i])
    }

    /// Further simplification; a law cannot be made less simplified.
    pub fn simplify(&self, level: Simplification) -> Result<GroupLaw> {
        if level < self.simplification {
            return Err(Error::PreconditionFailed(format!(
                "law is already simplified to {:?}",
                self.simplification
            )));
        }
        let mut out = self.clone();
        out.relations = self.relations.iter().map(|r| simplify_poly(r, self.p, level)).collect();
        out.pinned = self.pinned.iter().map(|(c, r)| (*c, simplify_poly(r, self.p, level))).collect();
        out.simplification = level;
        Ok(out)
    }

    /// A copy with the sign of one term of one relation flipped.
    pub fn with_flipped_sign(&self, relation: usize, term: usize) -> Result<GroupLaw> {
        let r = self
            .relations
            .get(relation)
            .ok_or_else(|| Error::OutOfRange(format!("relation {relation} of {}", self.relations.len())))?;
        if term >= r.len() {
            return Err(Error::OutOfRange(format!("term {term} of {}", r.len())));
        }
        let (m, c) = &r.terms()[term];
        let flip = IntPoly::from_terms(r.nvars(), [(m.clone(), -2 * c)]);
        let mut out = self.clone();
        let flipped = r.add(&flip);
        out.relations[relation] = match self.simplification {
            Simplification::Integral => flipped,
            _ => flipped.reduce_coeffs_mod(&BigInt::from(self.p)),
        };
        Ok(out)
    }

    /// The number of `F_p`-points, `p^(N-1) (p-1)`.
    pub fn point_count(&self) -> Option<u64> {
        self.p.checked_pow(self.dimension() as u32 - 1).and_then(|c| c.checked_mul(self.p - 1))
    }

    pub fn identity_point(&self) -> Vec<u64> {
        let mut x = vec![0; self.dimension()];
        x[self.unit_index()] = 1;
        x
    }

    pub fn is_point(&self, x: &[u64]) -> bool {
        x.len() == self.dimension() && x.iter().all(|&c| c < self.p) && x[self.unit_index()] != 0
    }

    /// Every point, in lexicographic order; `None` above `limit`.
    pub fn points(&self, limit: u64) -> Option<Vec<Vec<u64>>> {
        let count = self.point_count().filter(|&c| c <= limit)?;
        let n = self.dimension();
        let mut out = Vec::with_capacity(count as usize);
        let mut x = vec![0u64; n];
        loop {
            if x[self.unit_index()] != 0 {
                out.push(x.clone());
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return Some(out);
                }
                k -= 1;
                x[k] += 1;
                if x[k] < self.p {
                    break;
                }
                x[k] = 0;
            }
        }
    }

    pub fn random_point<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Vec<u64> {
        let b0 = self.unit_index();
        (0..self.dimension())
            .map(|i| if i == b0 { rng.gen_range(1..self.p) } else { rng.gen_range(0..self.p) })
            .collect()
    }

    /// `Z/p^(level+1)`, where the points live as polynomials.
    pub fn residue_ring(&self) -> Result<Zmod> {
        Zmod::prime_power(self.p, self.level + 1)
    }

    /// The polynomial over `Z/p^(level+1)` with the given coordinates.
    pub fn point_to_poly(&self, x: &[u64]) -> Result<TruncPoly<Zmod>> {
        if !self.is_point(x) {
            return Err(Error::ShapeMismatch(format!("{x:?} is not a point of the {} law", self.kind)));
        }
        let ring = self.residue_ring()?;
        let len = self.level as usize + 1;
        let mut comps = vec![vec![0u64; len]; self.valuations.len()];
        for (c, &v) in self.coords.iter().zip(x) {
            comps[c.degree][c.component as usize] = v;
        }
        let coeffs = comps
            .iter()
            .map(|w| witt_to_residue(self.p, w).to_u64().expect("residue fits a word"))
            .collect();
        Ok(TruncPoly::new(&ring, coeffs))
    }

    /// Coordinates of a polynomial over `Z/p^(level+1)`; fails outside the
    /// subgroup.
    pub fn poly_to_point(&self, f: &TruncPoly<Zmod>) -> Result<Vec<u64>> {
        if f.ring().modulus() != self.residue_ring()?.modulus() {
            return Err(Error::RingMismatch(format!("expected Z/{}^{}", self.p, self.level + 1)));
        }
        if f.degree().is_some_and(|d| d > self.max_degree()) {
            return Err(Error::PreconditionFailed(format!("{} exceeds the degree cap", f.display())));
        }
        let mut x = vec![0u64; self.dimension()];
        for k in 0..=self.max_degree() {
            let w = residue_to_witt(self.p, self.level, &BigInt::from(f.coeff(k)));
            for (i, &digit) in w.iter().enumerate() {
                match self.coords.iter().position(|c| c.degree == k && c.component == i as u32) {
                    Some(j) => x[j] = digit,
                    None if digit != 0 => {
                        return Err(Error::PreconditionFailed(format!(
                            "coefficient of T^{k} in {} is not divisible by p^{}",
                            f.display(),
                            self.valuations[k]
                        )))
                    }
                    None => {}
                }
            }
        }
        if !self.is_point(&x) {
            return Err(Error::NotAnAutomorphism(f.display()));
        }
        Ok(x)
    }

    pub fn evaluator(&self) -> Result<LawEvaluator> {
        LawEvaluator::new(self)
    }

    pub fn to_json(&self) -> Value {
        let names = self.variable_names();
        let rel_names = self.relation_names();
        json!({
            "p": self.p,
            "kind": self.kind,
            "level": self.level,
            "simplification": self.simplification,
            "coordinates": self.coords.iter().map(|c| json!({
                "name": c.name(),
                "degree": c.degree,
                "component": c.component,
            })).collect::<Vec<_>>(),
            "variables": names,
            "relations": self.relations.iter().zip(&rel_names).map(|(r, n)| json!({
                "coordinate": n,
                "terms": r.to_json(&names),
            })).collect::<Vec<_>>(),
            "pinned": self.pinned.iter().map(|(c, r)| json!({
                "coordinate": format!("{}''", c.name()),
                "terms": r.to_json(&names),
            })).collect::<Vec<_>>(),
            "unit_relation": self.unit_relation().to_json(&names),
        })
    }

    pub fn from_json(v: &Value) -> Result<GroupLaw> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("group law without {k}")));
        let p = field("p")?.as_u64().ok_or_else(|| Error::Parse("p must be an integer".into()))?;
        let kind: LawKind = serde_json::from_value(field("kind")?.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let simplification: Simplification =
            serde_json::from_value(field("simplification")?.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if !crate::rings::is_prime(p) {
            return Err(Error::OutOfRange(format!("{p} is not prime")));
        }
        let (level, valuations) = shape(&kind)?;
        let coords = coordinates(level, &valuations);
        let mut law = GroupLaw { p, kind, level, valuations, coords, relations: Vec::new(), pinned: Vec::new(), simplification };
        let names = law.variable_names();
        let declared: Vec<String> = field("coordinates")?
            .as_array()
            .ok_or_else(|| Error::Parse("coordinates must be a list".into()))?
            .iter()
            .map(|c| c.get("name").and_then(Value::as_str).unwrap_or_default().to_string())
            .collect();
        if declared != law.coordinate_names() {
            return Err(Error::ShapeMismatch(format!("coordinates {declared:?} do not match {}", kind)));
        }
        let parse_list = |key: &str| -> Result<Vec<(String, IntPoly)>> {
            field(key)?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{key} must be a list")))?
                .iter()
                .map(|r| {
                    let name = r.get("coordinate").and_then(Value::as_str).unwrap_or_default().to_string();
                    let terms = r.get("terms").ok_or_else(|| Error::Parse(format!("{name} without terms")))?;
                    Ok((name, IntPoly::from_json(&names, terms)?))
                })
                .collect()
        };
        let relations = parse_list("relations")?;
        if relations.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>() != law.relation_names() {
            return Err(Error::ShapeMismatch("relations do not match the coordinates".into()));
        }
        law.relations = relations.into_iter().map(|(_, r)| r).collect();
        let expected_pinned: Vec<Coordinate> = (0..law.valuations.len())
            .flat_map(|k| (0..law.valuations[k].min(level + 1)).map(move |i| Coordinate { degree: k, component: i }))
            .collect();
        let pinned = parse_list("pinned")?;
        if pinned.len() != expected_pinned.len()
            || pinned.iter().zip(&expected_pinned).any(|((n, _), c)| *n != format!("{}''", c.name()))
        {
            return Err(Error::ShapeMismatch("pinned components do not match the subgroup".into()));
        }
        law.pinned = expected_pinned.into_iter().zip(pinned).map(|(c, (_, r))| (c, r)).collect();
        Ok(law)
    }

    /// One line per relation, `a_0'' = a_0 + b_0*a_0'`, then the pinned
    /// components and the unit relation.
    pub fn to_text(&self) -> String {
        let names = self.variable_names();
        let mut out = format!(
            "# group law of {} over F_{} (Witt level {}, {:?}), {} coordinates\n",
            self.kind,
            self.p,
            self.level,
            self.simplification,
            self.dimension()
        );
        for (r, n) in self.relations.iter().zip(self.relation_names()) {
            out += &format!("{n} = {}\n", r.display_with(&names));
        }
        for (c, r) in &self.pinned {
            out += &format!("# pinned {}'' = {}\n", c.name(), r.display_with(&names));
        }
        out += &format!("# unit: {} = 0\n", self.unit_relation().display_with(&names));
        out
    }
}

fn coordinates(level: u32, valuations: &[u32]) -> Vec<Coordinate> {
    let mut out = Vec::new();
    for (k, &v) in valuations.iter().enumerate() {
        for i in v..=level {
            out.push(Coordinate { degree: k, component: i });
        }
    }
    out
}

/// A law compiled for fast evaluation at `F_p`-points.
#[derive(Clone, Debug)]
pub struct LawEvaluator {
    field: Zmod,
    dimension: usize,
    unit: usize,
    relations: Vec<CompiledPoly<Zmod>>,
    pinned: Vec<CompiledPoly<Zmod>>,
}

impl LawEvaluator {
    pub fn new(law: &GroupLaw) -> Result<Self> {
        let field = Zmod::new(law.p)?;
        let relations = law.relations.iter().map(|r| CompiledPoly::new(&field, r)).collect();
        let pinned = law.pinned.iter().map(|(_, r)| CompiledPoly::new(&field, r)).collect();
        Ok(LawEvaluator { field, dimension: law.dimension(), unit: law.unit_index(), relations, pinned })
    }

    fn values(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        debug_assert!(x.len() == self.dimension && y.len() == self.dimension);
        let inv = self.field.inv(&x[self.unit]).unwrap_or(0);
        x.iter().chain(y).copied().chain([inv]).collect()
    }

    /// Coordinates of the product.
    pub fn compose(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let v = self.values(x, y);
        self.relations.iter().map(|r| r.eval(&self.field, &v)).collect()
    }

    /// Whether the pinned output components vanish and the product's unit
    /// coordinate is nonzero.
    pub fn closes(&self, x: &[u64], y: &[u64]) -> bool {
        let v = self.values(x, y);
        self.pinned.iter().all(|r| r.eval(&self.field, &v) == 0)
            && self.relations[self.unit].eval(&self.field, &v) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::greenberg::greenberg_transform;
    use crate::rings::Symbolic;

    fn poly_in(law: &GroupLaw, s: &str) -> IntPoly {
        let names = law.variable_names();
        let ring = Symbolic::integer_polys(names, law.p()).unwrap();
        let v = Expr::parse(s).unwrap().eval(&ring, &|n| ring.gen(n).ok()).unwrap();
        ring.to_poly(&v).unwrap()
    }

    #[test]
    fn a2_anchor_relations() {
        let law = group_law_ad(3, 2, Simplification::Fermat).unwrap();
        assert_eq!(law.coordinate_names(), ["a_0", "a_1", "b_0", "b_1", "c_1"]);
        assert_eq!(law.relation("a_0").unwrap(), &poly_in(&law, "a_0 + b_0 a_0'"));
        assert_eq!(law.relation("b_0").unwrap(), &poly_in(&law, "b_0 b_0'"));
        assert_eq!(law.relation("c_1").unwrap(), &poly_in(&law, "b_0 c_1' + (b_0')^2 c_1"));
    }

    #[test]
    fn coordinate_counts() {
        for d in 1..=3u32 {
            let law = group_law_ad(2, d, Simplification::ModP).unwrap();
            assert_eq!(law.dimension() as u32, d + d * (d + 1) / 2);
        }
    }

    #[test]
    fn affine_cap() {
        let law = group_law_full(3, 2, 1, CapMode::Graded, Simplification::Fermat).unwrap();
        assert_eq!(law.coordinate_names(), ["a_0", "a_1", "b_0", "b_1"]);
        assert_eq!(law.relation("a_0").unwrap(), &poly_in(&law, "a_0 + b_0 a_0'"));
    }

    #[test]
    fn witt_route_agrees_for_a2() {
        // P_k of f∘g for f = A0 + A1 T + A2 T^2 and likewise g, transformed
        // generically and then restricted to the pinned shape
        let names: Vec<String> = ["A0", "A1", "A2", "B0", "B1", "B2"].iter().map(|s| s.to_string()).collect();
        let ring = Symbolic::integer_polys(names.clone(), 2).unwrap();
        let g = |s: &str| ring.gen(s).unwrap();
        let inner = |k: usize| -> Vec<_> {
            let (b0, b1, b2) = (g("B0"), g("B1"), g("B2"));
            let sq = ring.poly_mul(&[b0.clone(), b1.clone(), b2.clone()], &[b0, b1, b2]);
            sq.get(k).cloned().into_iter().collect()
        };
        for p in [2u64, 3] {
            let law = group_law_ad(p, 2, Simplification::Integral).unwrap();
            let lnames = law.variable_names();
            for k in 0..=2 {
                let lin = [g("B0"), g("B1"), g("B2")];
                let mut e = ring.mul(&g("A1"), &lin[k]);
                if k == 0 {
                    e = ring.add(&e, &g("A0"));
                }
                for s in inner(k) {
                    e = ring.add(&e, &ring.mul(&g("A2"), &s));
                }
                let pk = ring.to_poly(&e).unwrap();
                let sys = greenberg_transform(&pk, &names, p, 1).unwrap();
                // component variables A00, A01, ..., B21
                let nv = lnames.len();
                let subst: Vec<IntPoly> = sys
                    .component_names
                    .iter()
                    .map(|c| {
                        let (v, i) = c.split_at(2);
                        let letter = match &v[1..] {
                            "0" => "a",
                            "1" => "b",
                            _ => "c",
                        };
                        let name = format!("{letter}_{i}{}", if v.starts_with('B') { "'" } else { "" });
                        match lnames.iter().position(|n| *n == name) {
                            Some(j) => IntPoly::var(nv, j),
                            None => IntPoly::zero(nv),
                        }
                    })
                    .collect();
                let letter = ["a", "b", "c"][k];
                for (i, comp) in sys.components.iter().enumerate() {
                    let got = comp.substitute(nv, &subst);
                    let name = format!("{letter}_{i}");
                    match law.relation(&name) {
                        Some(r) => assert_eq!(&got, r, "p = {p}, {name}"),
                        None => {
                            let pinned = law.pinned().iter().find(|(c, _)| c.name() == name).unwrap();
                            assert_eq!(got, pinned.1);
                        }
                    }
                }
            }
        }
    }
}
