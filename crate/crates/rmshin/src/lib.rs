//! Values of the q-Pochhammer ratio cocycle at real quadratic points.
//!
//! The crate computes the values `shin^r[beta]` of the q-Pochhammer modular
//! cocycle at real quadratic fixed points, the positive invariant
//! `samech = psi^-2 chi_r^-1 shin^2`, and the differenced partial zeta
//! derivative `Z'(0)` that it exponentiates to. Exact parts (quadratic fields,
//! continued fractions, multiplier systems) use unbounded integers; analytic
//! parts use MPFR floats at a caller-chosen precision.
//!
//! Modules, bottom up:
//!
//! * [`qfield`]: exact real quadratic numbers, conductors and units.
//! * [`modgroup`]: matrices, characteristics, HJ continued fractions, cycle data.
//! * [`characters`]: Dedekind sums, `Phi`, `psi`, `chi_r`, `kappa`.
//! * [`special`]: `e(z)`, q-Pochhammer, eta, theta, double sine.
//! * [`cocycle`]: the Jacobi and modular cocycles and their RM values.
//! * [`zeta`]: Tangedal's invariants and `Z'(0)`.
//! * [`verify`]: seeded randomized identity suites.
//! * [`cli`]: the command-line front end.

pub mod characters;
pub mod cli;
pub mod cocycle;
pub mod error;
pub mod modgroup;
pub mod qfield;
pub mod special;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
