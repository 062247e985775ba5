//! Exact local machinery for p-adic Rankin--Selberg computations: local
//! zeta integrals and Gauss sums over Q_p and its quadratic algebras,
//! interpolation factors, Kirillov-model toric periods via Iwahori cosets,
//! Eisenstein Whittaker coefficients as Laurent polynomials, theta
//! representation numbers over imaginary quadratic orders, and a reduced
//! q-expansion engine with Hecke and U_p operators and ordinary projectors.
//!
//! Every closed form has a brute-force Haar-measure oracle next to it; the
//! acceptance suite (`tests/acceptance.rs`) checks the two sides agree
//! exactly, in exact cyclotomic arithmetic, over a deterministic sweep.

pub mod cyclo;
pub mod descriptor;
pub mod eiskernel;
pub mod error;
pub mod integrate;
pub mod local;
pub mod qexp;
pub mod sweep;
pub mod toric;
pub mod zeta;

pub use cyclo::CycNum;
pub use error::{Error, Result};
