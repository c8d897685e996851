//! Checks that a generated law defines a group on its `F_p`-points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::law::{GroupLaw, LawEvaluator};
use crate::error::{Error, Result};
use crate::inversion::invert;

/// Above this many points the exhaustive check is refused.
pub const EXHAUSTIVE_LIMIT: u64 = 128;
const INVERSE_SEARCH_LIMIT: u64 = 20_000;
const INVERSE_SAMPLES: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum VerifyMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub passed: bool,
    pub checked: u64,
    pub counterexample: Option<Vec<Vec<u64>>>,
}

impl AxiomVerdict {
    fn new() -> Self {
        AxiomVerdict { passed: true, checked: 0, counterexample: None }
    }

    /// Records one check; returns false once a failure has been seen.
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<Vec<u64>>) -> bool {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.counterexample = Some(witness());
        }
        ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub mode: VerifyMode,
    pub elements: Option<u64>,
    pub closure: AxiomVerdict,
    pub identity: AxiomVerdict,
    pub inverses: AxiomVerdict,
    pub associativity: AxiomVerdict,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.closure.passed && self.identity.passed && self.inverses.passed && self.associativity.passed
    }
}

struct Checker<'a> {
    law: &'a GroupLaw,
    ev: LawEvaluator,
    e: Vec<u64>,
}

impl Checker<'_> {
    fn closure(&self, v: &mut AxiomVerdict, x: &[u64], y: &[u64]) -> bool {
        v.record(self.ev.closes(x, y), || vec![x.to_vec(), y.to_vec()])
    }

    fn identity(&self, v: &mut AxiomVerdict, x: &[u64]) -> bool {
        let ok = self.ev.compose(&self.e, x) == x && self.ev.compose(x, &self.e) == x;
        v.record(ok, || vec![x.to_vec()])
    }

    fn assoc(&self, v: &mut AxiomVerdict, x: &[u64], y: &[u64], z: &[u64]) -> bool {
        let left = self.ev.compose(&self.ev.compose(x, y), z);
        let right = self.ev.compose(x, &self.ev.compose(y, z));
        v.record(left == right, || vec![x.to_vec(), y.to_vec(), z.to_vec()])
    }

    fn is_inverse(&self, x: &[u64], y: &[u64]) -> bool {
        self.ev.compose(x, y) == self.e && self.ev.compose(y, x) == self.e
    }

    /// A two-sided inverse of `x`, by search over `all` when given, else
    /// from the polynomial inverse over `Z/p^(n+1)`.
    fn inverse(&self, v: &mut AxiomVerdict, x: &[u64], all: Option<&[Vec<u64>]>) -> bool {
        let found = match all {
            Some(all) => all.iter().any(|y| self.is_inverse(x, y)),
            None => self
                .law
                .point_to_poly(x)
                .and_then(|f| invert(&f))
                .and_then(|g| self.law.poly_to_point(&g))
                .is_ok_and(|y| self.is_inverse(x, &y)),
        };
        v.record(found, || vec![x.to_vec()])
    }
}

/// Closure, identity, inverses and associativity on all points, or on
/// `samples` random ones (triples for associativity).
pub fn verify_group_axioms(law: &GroupLaw, mode: VerifyMode) -> Result<AxiomReport> {
    let ck = Checker { law, ev: law.evaluator()?, e: law.identity_point() };
    let mut report = AxiomReport {
        mode,
        elements: law.point_count(),
        closure: AxiomVerdict::new(),
        identity: AxiomVerdict::new(),
        inverses: AxiomVerdict::new(),
        associativity: AxiomVerdict::new(),
    };
    match mode {
        VerifyMode::Exhaustive => {
            let all = law.points(EXHAUSTIVE_LIMIT).ok_or_else(|| {
                Error::OutOfRange(format!(
                    "{} points exceed the exhaustive limit {EXHAUSTIVE_LIMIT}",
                    law.point_count().map_or("too many".into(), |c| c.to_string())
                ))
            })?;
            'closure: for x in &all {
                for y in &all {
                    if !ck.closure(&mut report.closure, x, y) {
                        break 'closure;
                    }
                }
            }
            for x in &all {
                if !ck.identity(&mut report.identity, x) {
                    break;
                }
            }
            for x in &all {
                if !ck.inverse(&mut report.inverses, x, Some(&all)) {
                    break;
                }
            }
            'assoc: for x in &all {
                for y in &all {
                    for z in &all {
                        if !ck.assoc(&mut report.associativity, x, y, z) {
                            break 'assoc;
                        }
                    }
                }
            }
        }
        VerifyMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let all = law.points(INVERSE_SEARCH_LIMIT);
            for i in 0..samples {
                let x = law.random_point(&mut rng);
                let y = law.random_point(&mut rng);
                let z = law.random_point(&mut rng);
                if report.closure.passed {
                    ck.closure(&mut report.closure, &x, &y);
                }
                if report.identity.passed {
                    ck.identity(&mut report.identity, &x);
                }
                if report.inverses.passed && i < INVERSE_SAMPLES {
                    ck.inverse(&mut report.inverses, &x, all.as_deref());
                }
                if report.associativity.passed {
                    ck.assoc(&mut report.associativity, &x, &y, &z);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greenberg::{group_law_ad, Simplification};

    #[test]
    fn a2_is_a_group_at_p2() {
        let law = group_law_ad(2, 2, Simplification::Fermat).unwrap();
        let r = verify_group_axioms(&law, VerifyMode::Exhaustive).unwrap();
        assert_eq!(r.elements, Some(16));
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.associativity.checked, 16 * 16 * 16);
    }

    #[test]
    fn flipped_sign_breaks_associativity() {
        let law = group_law_ad(3, 2, Simplification::Fermat).unwrap();
        let c1 = law.coordinate_names().iter().position(|n| n == "c_1").unwrap();
        let bad = law.with_flipped_sign(c1, 0).unwrap();
        let r = verify_group_axioms(&bad, VerifyMode::Sampled { samples: 10_000, seed: 7 }).unwrap();
        assert!(!r.associativity.passed);
        let w = r.associativity.counterexample.unwrap();
        let ev = bad.evaluator().unwrap();
        assert_ne!(ev.compose(&ev.compose(&w[0], &w[1]), &w[2]), ev.compose(&w[0], &ev.compose(&w[1], &w[2])));
    }
}
