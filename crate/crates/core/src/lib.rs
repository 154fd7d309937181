//! Finite-dimensional models of manifolds whose tangent bundle carries an
//! SU(2)-action with fibres modelled on sums of `S^k C^2`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; file formats and the command-line driver live in
//! the companion `ghc` crate.
//!
//! * [`sl2_rep`]: irreducible sl2-modules, Cartan frames at points of CP¹,
//!   Clebsch–Gordan multiplicities, isotypic projectors, invariant pairings.
//! * [`cp1_sections`]: sections of `O(k) ⊗ Cⁿ` as polynomial tuples, the
//!   Möbius action, real structures, and the vanishing-order filtration.
//! * [`quillen`]: the split sequence `0 → H* → Ĥ → H′ → 0` in exact
//!   rational arithmetic and the associated dimension bookkeeping.
//! * [`eh_quotient`]: the moment map `z₁w₁ + z₂w₂`, regular levels, fibre
//!   sampling and the rank-one matrix chart of the quotient.
//! * [`nahm_flow`]: the Lax pencil `B(ζ), A(ζ)`, RK4 integration of the
//!   Nahm-type system, gauge actions and boundary data.
//! * [`monopole_r5`]: matrix-valued polynomial gauge fields on `C⁵` and the
//!   flatness residual on α-surfaces.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cp1_sections;
pub mod eh_quotient;
mod error;
pub mod linalg;
pub mod mobius;
pub mod monopole_r5;
pub mod nahm_flow;
pub mod quillen;
pub mod sl2_rep;

pub use error::{Error, Result};
pub use linalg::CMat;
pub use mobius::{ExtendedComplex, MobiusElement};
pub use num_complex::Complex64;

/// Default tolerance for residuals that are exact up to rounding.
pub const EXACT_TOL: f64 = 1e-12;
