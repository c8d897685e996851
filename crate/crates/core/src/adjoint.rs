//! The adjoint action `Ad_f(g) = f∘g∘f^{-1}` of the automorphism group on
//! its abelian kernels `K_{n,r} = {T + q^r h(T)}`, `2r >= n`, which are
//! modules over `R/q^(n-r)` through `c·(T + q^r h) = T + q^r c h`.

use serde_json::{json, Value};

use crate::autgroup::{member, AutMap, SubgroupSpec, TruncPoly};
use crate::error::{Error, Result};
use crate::inversion::invert;
use crate::rings::{Ring, Symbolic};

fn precision<R: Ring>(ring: &R) -> Result<u32> {
    ring.precision()
        .ok_or_else(|| Error::UnsupportedRing(format!("{} is not truncated", ring.descriptor())))
}

fn check_regime(n: u32, r: u32) -> Result<()> {
    if r == 0 || r > n {
        return Err(Error::OutOfRange(format!("kernel parameters need 1 <= r <= n (n={n}, r={r})")));
    }
    if 2 * r < n {
        return Err(Error::NotAbelian { n, r });
    }
    Ok(())
}

/// `T + q^r h(T)` over `R/q^n`, with `h` kept over `R/q^(n-r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelElement<R: Ring> {
    ring: R,
    r: u32,
    h: TruncPoly<R>,
}

impl<R: Ring> KernelElement<R> {
    /// `ring` is `R/q^n`; `h` may live over any precision and is reduced
    /// to `R/q^(n-r)`.
    pub fn new(ring: &R, r: u32, h: &TruncPoly<R>) -> Result<Self> {
        let n = precision(ring)?;
        check_regime(n, r)?;
        let hr = Self::h_ring_of(ring, n, r)?;
        let h = TruncPoly::new(&hr, h.coeffs().iter().map(|c| hr.coerce_from(h.ring(), c)).collect());
        Ok(KernelElement { ring: ring.clone(), r, h })
    }

    fn h_ring_of(ring: &R, n: u32, r: u32) -> Result<R> {
        // R/q^0 is the zero ring; keep a one-level ring and an empty h
        ring.with_precision((n - r).max(1))
    }

    /// Reads `g = T + q^r h` off an automorphism; fails unless `g ≡ T`
    /// mod `q^r`.
    pub fn from_poly(g: &TruncPoly<R>, r: u32) -> Result<Self> {
        let ring = g.ring();
        let n = precision(ring)?;
        check_regime(n, r)?;
        let diff = g.sub(&TruncPoly::identity(ring));
        let hr = Self::h_ring_of(ring, n, r)?;
        let mut h = Vec::with_capacity(diff.coeffs().len());
        for c in diff.coeffs() {
            let x = ring
                .exact_div_by_q(c, r)
                .map_err(|_| Error::KernelMismatch(format!("{} is not T mod q^{r}", g.display())))?;
            h.push(if n == r { hr.zero() } else { hr.coerce_from(ring, &x) });
        }
        Ok(KernelElement { ring: ring.clone(), r, h: TruncPoly::new(&hr, h) })
    }

    pub fn identity(ring: &R, r: u32) -> Result<Self> {
        Self::new(ring, r, &TruncPoly::zero(ring))
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n(&self) -> u32 {
        self.ring.precision().expect("checked on construction")
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn h(&self) -> &TruncPoly<R> {
        &self.h
    }

    /// The polynomial `T + q^r h(T)` over `R/q^n`.
    pub fn to_poly(&self) -> TruncPoly<R> {
        let qr = self.ring.q_pow(self.r).expect("q-adic ring");
        let coeffs = self
            .h
            .coeffs()
            .iter()
            .map(|c| self.ring.mul(&qr, &self.ring.coerce_from(self.h.ring(), c)))
            .collect();
        TruncPoly::new(&self.ring, coeffs).add(&TruncPoly::identity(&self.ring))
    }

    /// Composition in the kernel, which is addition of the `h`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.r != other.r || self.ring.precision() != other.ring.precision() {
            return Err(Error::ShapeMismatch("kernel elements of different K(n, r)".into()));
        }
        Ok(KernelElement { ring: self.ring.clone(), r: self.r, h: self.h.add(&other.h) })
    }

    pub fn is_identity(&self) -> bool {
        self.h.is_zero()
    }
}

/// `c·(T + q^r h) = T + q^r c h`, with `c` taken modulo `q^(n-r)`.
pub fn scalar_mul<R: Ring>(c: &R::Elem, c_ring: &R, g: &KernelElement<R>) -> KernelElement<R> {
    let hr = g.h.ring();
    let c = hr.coerce_from(c_ring, c);
    let h = if g.n() == g.r { g.h.clone() } else { g.h.scale(&c) };
    KernelElement { ring: g.ring.clone(), r: g.r, h }
}

/// `f∘g∘f^{-1}` by composition.
pub fn ad_direct<R: Ring>(f: &AutMap<R>, g: &KernelElement<R>) -> Result<KernelElement<R>> {
    if f.poly().ring() != g.ring() {
        return Err(Error::RingMismatch("acting map and kernel element".into()));
    }
    let finv = invert(f.poly())?;
    let conj = f.poly().compose_unchecked(&g.to_poly()).compose_unchecked(&finv);
    KernelElement::from_poly(&conj, g.r)
}

/// `T + q^r h(f^{-1}(T)) f'(f^{-1}(T))`, computed over `R/q^(n-r)`.
pub fn ad_closed_form<R: Ring>(f: &AutMap<R>, g: &KernelElement<R>) -> Result<KernelElement<R>> {
    if f.poly().ring() != g.ring() {
        return Err(Error::RingMismatch("acting map and kernel element".into()));
    }
    if g.is_identity() || g.n() == g.r {
        return Ok(g.clone());
    }
    let hr = g.h.ring();
    let fr = f.poly().change_ring(hr);
    let finv = invert(&fr)?;
    let image = g.h.compose_unchecked(&finv).mul(&fr.derivative().compose_unchecked(&finv));
    Ok(KernelElement { ring: g.ring.clone(), r: g.r, h: image })
}

/// The conjugate, computed both ways; a disagreement is an error.
pub fn ad<R: Ring>(f: &AutMap<R>, g: &KernelElement<R>) -> Result<KernelElement<R>> {
    let direct = ad_direct(f, g)?;
    let closed = ad_closed_form(f, g)?;
    if direct != closed {
        return Err(Error::AdjointMismatch(format!(
            "direct {} vs closed form {}",
            direct.to_poly().display(),
            closed.to_poly().display()
        )));
    }
    Ok(direct)
}

/// The basis of `N_{n,r}`: `T + q^(r+s_j) T^j` for `j = 0..n`, with
/// `s_j = max(0, j-1-r)` forced by the `A_n` shape.
pub fn basis_shifts(n: u32, r: u32) -> Vec<u32> {
    (0..=n).map(|j| j.saturating_sub(1 + r)).collect()
}

/// Matrix of `Ad_f` on `N_{n,r}`: column `j` holds the coefficients of
/// `h` for the image of the `j`-th basis element, entries in `R/q^(n-r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointMatrix<R: Ring> {
    pub n: u32,
    pub r: u32,
    pub shifts: Vec<u32>,
    pub ring: R,
    pub entries: Vec<Vec<R::Elem>>,
}

impl<R: Ring> AdjointMatrix<R> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, e)| {
                let expected = if i == j { self.ring.q_pow(self.shifts[j]).expect("q-adic ring") } else { self.ring.zero() };
                *e == expected
            })
        })
    }

    /// Entries in the coordinates `u_j = h_j / q^(s_j)`: row `i` divided by
    /// `q^(s_i)`, meaningful modulo `q^(n-r-s_i)`. These matrices multiply
    /// under composition.
    pub fn normalized(&self) -> Result<Vec<Vec<R::Elem>>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let reduce = self.ring.with_precision((self.n - self.r).saturating_sub(self.shifts[i]).max(1))?;
                row.iter()
                    .map(|e| {
                        let u = self.ring.exact_div_by_q(e, self.shifts[i])?;
                        Ok(self.ring.coerce_from(&reduce, &reduce.coerce_from(&self.ring, &u)))
                    })
                    .collect()
            })
            .collect()
    }

    /// Row `i` of a normalized matrix is taken modulo `q^(row_precision(i))`.
    pub fn row_precision(&self, i: usize) -> u32 {
        (self.n - self.r).saturating_sub(self.shifts[i])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "r": self.r,
            "shifts": self.shifts,
            "ring": serde_json::to_value(self.ring.descriptor()).expect("descriptor serializes"),
            "entries": self.entries.iter().map(|row| row.iter().map(|e| self.ring.elem_to_json(e)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Rows as aligned plain text.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self.entries.iter().map(|row| row.iter().map(|e| self.ring.display(e)).collect()).collect();
        let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            out += &format!("[ {} ]\n", line.join("  "));
        }
        out
    }
}

/// Matrix of `Ad_f` on `N_{n,r}` for `f` in `A_n` over `R/q^n`.
pub fn ad_matrix<R: Ring>(f: &AutMap<R>, kernel: SubgroupSpec) -> Result<AdjointMatrix<R>> {
    let ring = f.poly().ring();
    let (n, r) = match kernel {
        SubgroupSpec::N { n, r } => (n, r),
        other => {
            return Err(Error::PreconditionFailed(format!(
                "adjoint matrices are defined on N(n, r), got {other}"
            )))
        }
    };
    kernel.validate()?;
    if ring.precision() != Some(n) {
        return Err(Error::PreconditionFailed(format!("N({n}, {r}) needs a ring of precision {n}, got {}", ring.descriptor())));
    }
    check_regime(n, r)?;
    if !member(f.poly(), SubgroupSpec::A(n))? {
        return Err(Error::PreconditionFailed(format!("{} is not in A_{n}, so N({n}, {r}) is not preserved", f.poly().display())));
    }
    let shifts = basis_shifts(n, r);
    let hr = ring.with_precision((n - r).max(1))?;
    let size = n as usize + 1;
    let mut entries = vec![vec![hr.zero(); size]; size];
    for (j, &s) in shifts.iter().enumerate() {
        let h = TruncPoly::monomial(&hr, hr.q_pow(s)?, j);
        let g = KernelElement::new(ring, r, &h)?;
        let image = ad(f, &g)?;
        if image.h.degree().is_some_and(|d| d >= size) {
            return Err(Error::KernelMismatch(format!("image of basis element {j} leaves N({n}, {r})")));
        }
        for (i, row) in entries.iter_mut().enumerate() {
            row[j] = if n == r { hr.zero() } else { image.h.coeff(i) };
        }
    }
    Ok(AdjointMatrix { n, r, shifts, ring: hr, entries })
}

/// The annihilator exponent of one basis slot of `N_{n,r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SlotOrder {
    pub slot: usize,
    pub exponent: u32,
}

/// For each basis element of `N_{n,r}` over `ring` (precision `n`), the
/// least `k` with `q^k·basis_j = T`, found by applying the scalar action.
pub fn module_decomposition<R: Ring>(ring: &R, r: u32) -> Result<Vec<SlotOrder>> {
    let n = precision(ring)?;
    if r >= n {
        return Ok(Vec::new());
    }
    check_regime(n, r)?;
    let hr = ring.with_precision(n - r)?;
    let mut out = Vec::new();
    for (j, s) in basis_shifts(n, r).into_iter().enumerate() {
        let g = KernelElement::new(ring, r, &TruncPoly::monomial(&hr, hr.q_pow(s)?, j))?;
        let mut k = 0;
        while !scalar_mul(&ring.q_pow(k)?, ring, &g).is_identity() {
            k += 1;
        }
        out.push(SlotOrder { slot: j, exponent: k });
    }
    Ok(out)
}

/// The exponents of `(R/q^m)^(m+1) ⊕ R/q^m ⊕ R/q^(m-1) ⊕ ... ⊕ R/q`.
pub fn corollary_shape(m: u32) -> Vec<u32> {
    let mut out = vec![m; m as usize + 2];
    out.extend((1..m).rev());
    if m == 0 {
        out.clear();
    }
    out
}

/// `a + bT + q c T^2 + q^2 d T^3 + q^3 e T^4`, cut at `T^degree`, over the
/// symbolic ring `Z[a,b,c,d,e,1/b][q]/(q^n)`.
pub fn generic_a_element(n: u32, degree: usize) -> Result<AutMap<Symbolic>> {
    let ring = Symbolic::generic(Some(n));
    let names = ["a", "b", "c", "d", "e"];
    if degree >= names.len() {
        return Err(Error::OutOfRange(format!("generic elements have degree at most {}", names.len() - 1)));
    }
    let coeffs = (0..=degree)
        .map(|j| {
            let g = ring.gen(names[j])?;
            Ok(ring.mul(&ring.q_pow((j as u32).saturating_sub(1))?, &g))
        })
        .collect::<Result<Vec<_>>>()?;
    AutMap::new(TruncPoly::new(&ring, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zmod;

    #[test]
    fn scalar_action_examples() {
        let z = Zmod::new(16).unwrap();
        let g = KernelElement::from_poly(&TruncPoly::from_i64s(&z, &[0, 1, 0, 4]), 2).unwrap();
        let three = scalar_mul(&3, &z, &g);
        assert_eq!(three.to_poly(), TruncPoly::from_i64s(&z, &[0, 1, 0, 12]));
        assert_eq!(scalar_mul(&1, &z, &g), g);
        assert!(scalar_mul(&0, &z, &g).is_identity());
        assert!(scalar_mul(&4, &z, &g).is_identity());
    }

    #[test]
    fn conjugation_by_translation() {
        let z = Zmod::new(9).unwrap();
        let f = AutMap::new(TruncPoly::from_i64s(&z, &[1, 1])).unwrap();
        let g = KernelElement::from_poly(&TruncPoly::from_i64s(&z, &[0, 1, 3]), 1).unwrap();
        let image = ad(&f, &g).unwrap();
        assert_eq!(image.to_poly(), TruncPoly::from_i64s(&z, &[3, 4, 3]));
    }

    #[test]
    fn identity_acts_trivially() {
        let z = Zmod::prime_power(3, 4).unwrap();
        let m = ad_matrix(&AutMap::identity(&z), SubgroupSpec::N { n: 4, r: 2 }).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn decomposition_matches_corollary_shape() {
        for m in 1..=3 {
            let z = Zmod::prime_power(2, 2 * m).unwrap();
            let orders: Vec<u32> = module_decomposition(&z, m).unwrap().iter().map(|s| s.exponent).collect();
            assert_eq!(orders, corollary_shape(m), "m = {m}");
        }
        assert_eq!(corollary_shape(2), vec![2, 2, 2, 2, 1]);
    }

    #[test]
    fn outside_abelian_regime() {
        let z = Zmod::prime_power(2, 5).unwrap();
        let g = TruncPoly::from_i64s(&z, &[2, 1]);
        assert!(matches!(KernelElement::from_poly(&g, 2), Err(Error::NotAbelian { n: 5, r: 2 })));
    }
}
