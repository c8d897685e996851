//! Exact arithmetic for polynomial automorphisms of the affine line over
//! non-reduced rings such as `Z/p^n`, `Z/m` and `K[t]/(t^n)`.

pub mod adjoint;
pub mod autgroup;
pub mod error;
pub mod expr;
pub mod greenberg;
pub mod inversion;
pub mod mpoly;
pub mod rings;
pub mod sample;
pub mod witt;

pub use error::{Error, Result};
