//! Greenberg transforms: a polynomial over `Z` rewritten in Witt
//! coordinates, so that its values on `Z/p^(n+1)` become values of a
//! polynomial system on `F_p`.

mod law;
mod verify;

pub use law::{group_law_ad, group_law_full, CapMode, Coordinate, GroupLaw, LawEvaluator, LawKind, Simplification};
pub use verify::{verify_group_axioms, AxiomReport, AxiomVerdict, VerifyMode};

use crate::error::{Error, Result};
use crate::mpoly::IntPoly;
use crate::rings::{Ring, Symbolic};
use crate::witt::{integer_witt_vector, solve_ghost_system, witt_polynomial_in, EliminationOrder, WittRing, WittVec};

/// `[g_0, ..., g_n] = f([x_0, ..., x_n], [y_0, ..., y_n], ...)` with the
/// component variables laid out input by input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenbergSystem {
    pub p: u64,
    pub level: u32,
    pub input: IntPoly,
    pub input_names: Vec<String>,
    pub component_names: Vec<String>,
    pub components: Vec<IntPoly>,
}

impl GreenbergSystem {
    pub fn display(&self) -> Vec<String> {
        self.components
            .iter()
            .enumerate()
            .map(|(i, g)| format!("g_{i} = {}", g.display_with(&self.component_names)))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "level": self.level,
            "input": self.input.to_json(&self.input_names),
            "input_names": self.input_names,
            "component_names": self.component_names,
            "components": self.components.iter().map(|g| g.to_json(&self.component_names)).collect::<Vec<_>>(),
        })
    }
}

/// Component variable names `x0, x1, ..., y0, y1, ...`.
pub fn component_names(names: &[String], level: u32) -> Vec<String> {
    names.iter().flat_map(|n| (0..=level).map(move |i| format!("{n}{i}"))).collect()
}

fn check_input(f: &IntPoly, names: &[String]) -> Result<()> {
    if f.nvars() != names.len() {
        return Err(Error::ShapeMismatch(format!("{} names for a polynomial in {} variables", names.len(), f.nvars())));
    }
    Ok(())
}

/// Evaluates `f` in Witt arithmetic over `Z[x_{j,i}]`, integer coefficients
/// entering as the Witt vectors with constant ghost components.
pub fn greenberg_transform(f: &IntPoly, names: &[String], p: u64, level: u32) -> Result<GreenbergSystem> {
    check_input(f, names)?;
    let comp = component_names(names, level);
    let ring = Symbolic::integer_polys(comp.clone(), p)?;
    let w = WittRing::new(ring.clone(), p, level)?;
    let len = level as usize + 1;
    let mut powers: Vec<Vec<WittVec<_>>> = Vec::with_capacity(names.len());
    for j in 0..names.len() {
        let x = WittVec { p, components: (0..len).map(|i| ring.var(j * len + i)).collect() };
        let mut row = vec![w.one()];
        for e in 1..=f.max_exponent(j) as usize {
            let next = w.mul(&row[e - 1], &x)?;
            row.push(next);
        }
        powers.push(row);
    }
    let mut acc = w.zero();
    for (m, c) in f.terms() {
        let cv = integer_witt_vector(p, level, c)?;
        let mut t = WittVec { p, components: cv.iter().map(|x| ring.from_bigint(x)).collect() };
        for (j, &e) in m.iter().enumerate() {
            if e > 0 {
                t = w.mul(&t, &powers[j][e as usize])?;
            }
        }
        acc = w.add(&acc, &t)?;
    }
    let components = acc
        .components
        .iter()
        .map(|c| ring.to_poly(c).expect("integer polynomial ring has no denominators"))
        .collect();
    Ok(GreenbergSystem { p, level, input: f.clone(), input_names: names.to_vec(), component_names: comp, components })
}

/// The same system from the ghost equations
/// `w_i(g) = f(w_i(x), w_i(y), ...)`, solved component by component.
pub fn greenberg_transform_ghost(f: &IntPoly, names: &[String], p: u64, level: u32) -> Result<GreenbergSystem> {
    check_input(f, names)?;
    let comp = component_names(names, level);
    let nv = comp.len();
    let len = level as usize + 1;
    let targets = (0..=level).map(|i| {
        let ghosts: Vec<IntPoly> = (0..names.len()).map(|j| witt_polynomial_in(p, i, nv, j * len)).collect();
        f.substitute(nv, &ghosts)
    });
    let components = solve_ghost_system(p, targets, EliminationOrder::Standard)?;
    Ok(GreenbergSystem { p, level, input: f.clone(), input_names: names.to_vec(), component_names: comp, components })
}
