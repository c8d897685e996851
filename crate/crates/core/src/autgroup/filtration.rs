//! Solvability: the chain of reductions `R -> R/I -> ...` with square-zero
//! ideals `I`, and commutativity checks for the kernels along the way.

use serde::Serialize;

use super::TruncPoly;
use crate::error::{Error, Result};
use crate::rings::Ring;

/// Where a ring sits in a filtration: its q-adic precision, or its size for
/// rings such as composite `Z/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Level {
    Precision(u32),
    Modulus(u64),
}

impl Level {
    pub fn of<R: Ring>(ring: &R) -> Result<Level> {
        match (ring.precision(), ring.cardinality()) {
            (Some(n), _) => Ok(Level::Precision(n)),
            (None, Some(m)) => Ok(Level::Modulus(m)),
            _ => Err(Error::UnsupportedRing(format!("{} has no finite filtration", ring.descriptor()))),
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Level::Precision(n) => write!(f, "q^{n}"),
            Level::Modulus(m) => write!(f, "Z/{m}"),
        }
    }
}

/// How a kernel is tested: elements `T + g h(T)` with `deg h <= degree_cap`
/// are enumerated when there are at most `exhaustive_limit` of them, and
/// otherwise `samples` random pairs are drawn.
#[derive(Clone, Copy, Debug)]
pub struct KernelCheck {
    pub degree_cap: usize,
    pub samples: u64,
    pub exhaustive_limit: u64,
}

impl Default for KernelCheck {
    fn default() -> Self {
        KernelCheck { degree_cap: 4, samples: 10_000, exhaustive_limit: 1024 }
    }
}

#[derive(Clone, Debug)]
pub struct KernelVerdict<R: Ring> {
    pub abelian: bool,
    pub exhaustive: bool,
    pub elements: Option<u64>,
    pub pairs_checked: u64,
    pub counterexample: Option<(TruncPoly<R>, TruncPoly<R>)>,
}

#[derive(Clone, Debug)]
pub struct FiltrationStep<R: Ring> {
    pub from: Level,
    pub to: Level,
    pub generator: R::Elem,
    pub verdict: KernelVerdict<R>,
}

fn kernel_element<R: Ring>(ring: &R, generator: &R::Elem, ann: &R, h: &[R::Elem]) -> TruncPoly<R> {
    let coeffs = h.iter().map(|c| ring.mul(generator, &ring.coerce_from(ann, c))).collect();
    TruncPoly::new(ring, coeffs).add(&TruncPoly::identity(ring))
}

fn commute<R: Ring>(f: &TruncPoly<R>, g: &TruncPoly<R>) -> bool {
    f.compose_unchecked(g) == g.compose_unchecked(f)
}

/// Tests whether the elements `T + g h(T)` of `ker(Aut(R) -> Aut(R/(g)))`
/// commute, where `ann = R/Ann(g)` parametrizes the multiples of `g`.
pub fn check_abelian_ideal_kernel<R: Ring, G: rand::Rng + ?Sized>(
    ring: &R,
    generator: &R::Elem,
    ann: &R,
    opts: &KernelCheck,
    rng: &mut G,
) -> KernelVerdict<R> {
    let width = opts.degree_cap + 1;
    let count = ann.cardinality().and_then(|c| c.checked_pow(width as u32));
    let mut verdict = KernelVerdict {
        abelian: true,
        exhaustive: false,
        elements: count,
        pairs_checked: 0,
        counterexample: None,
    };
    if let Some(n) = count.filter(|&n| n <= opts.exhaustive_limit) {
        let base = ann.elements(n).expect("finite ring");
        let mut all = Vec::with_capacity(n as usize);
        let mut digits = vec![0usize; width];
        loop {
            let h: Vec<R::Elem> = digits.iter().map(|&i| base[i].clone()).collect();
            all.push(kernel_element(ring, generator, ann, &h));
            let mut k = 0;
            while k < width {
                digits[k] += 1;
                if digits[k] < base.len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == width {
                break;
            }
        }
        verdict.exhaustive = true;
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                verdict.pairs_checked += 1;
                if !commute(&all[i], &all[j]) {
                    verdict.abelian = false;
                    verdict.counterexample = Some((all[i].clone(), all[j].clone()));
                    return verdict;
                }
            }
        }
        return verdict;
    }
    for _ in 0..opts.samples {
        let mut draw = || {
            let h: Vec<R::Elem> = (0..width).map(|_| ann.random_elem(rng)).collect();
            kernel_element(ring, generator, ann, &h)
        };
        let f = draw();
        let g = draw();
        verdict.pairs_checked += 1;
        if !commute(&f, &g) {
            verdict.abelian = false;
            verdict.counterexample = Some((f, g));
            break;
        }
    }
    verdict
}

/// Tests whether `K_{n,r} = ker(Aut(R/q^n) -> Aut(R/q^r))` is abelian on
/// elements of bounded degree. Any `r` is accepted; commutativity is only
/// guaranteed for `2r >= n`.
pub fn check_abelian_kernel<R: Ring, G: rand::Rng + ?Sized>(
    ring: &R,
    r: u32,
    opts: &KernelCheck,
    rng: &mut G,
) -> Result<KernelVerdict<R>> {
    let n = ring
        .precision()
        .ok_or_else(|| Error::UnsupportedRing(format!("{} is not truncated", ring.descriptor())))?;
    if r == 0 {
        return Err(Error::OutOfRange("kernel level must be at least 1".into()));
    }
    if r >= n {
        return Ok(KernelVerdict { abelian: true, exhaustive: true, elements: Some(1), pairs_checked: 0, counterexample: None });
    }
    let generator = ring.q_pow(r)?;
    let ann = ring.with_precision(n - r)?;
    Ok(check_abelian_ideal_kernel(ring, &generator, &ann, opts, rng))
}

/// Reduces by square-zero ideals until the ring is reduced, checking each
/// kernel. `Z/p^n` runs through precisions `n -> ceil(n/2) -> ... -> 1`;
/// composite `Z/m` halves every prime exponent at once.
pub fn composition_series<R: Ring, G: rand::Rng + ?Sized>(
    ring: &R,
    opts: &KernelCheck,
    rng: &mut G,
) -> Result<Vec<FiltrationStep<R>>> {
    let mut cur = ring.clone();
    let mut steps = Vec::new();
    let mut from = Level::of(&cur)?;
    while let Some(hq) = cur.half_quotient() {
        let verdict = check_abelian_ideal_kernel(&cur, &hq.generator, &hq.annihilator_quotient, opts, rng);
        let to = Level::of(&hq.quotient)?;
        steps.push(FiltrationStep { from, to, generator: hq.generator, verdict });
        cur = hq.quotient;
        from = to;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zmod;
    use rand::SeedableRng;

    #[test]
    fn chain_for_z16() {
        let z = Zmod::new(16).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let steps = composition_series(&z, &KernelCheck::default(), &mut rng).unwrap();
        let levels: Vec<_> = steps.iter().map(|s| (s.from, s.to)).collect();
        assert_eq!(levels, vec![(Level::Precision(4), Level::Precision(2)), (Level::Precision(2), Level::Precision(1))]);
        assert!(steps.iter().all(|s| s.verdict.abelian && s.verdict.exhaustive));
    }

    #[test]
    fn small_kernel_is_not_abelian() {
        let z = Zmod::new(16).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let opts = KernelCheck { degree_cap: 2, ..KernelCheck::default() };
        let v = check_abelian_kernel(&z, 1, &opts, &mut rng).unwrap();
        assert!(!v.abelian);
        let (f, g) = v.counterexample.unwrap();
        assert_ne!(f.compose(&g).unwrap(), g.compose(&f).unwrap());
    }
}
