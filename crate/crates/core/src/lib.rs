//! Univariate complex Hermite polynomials `H^ν_{m,n}(z, z̄)` and the kernels
//! built from them.
//!
//! The crate has four layers:
//!
//! * [`tripoly`] and [`hermite`]: exact symbolic construction on polynomials in
//!   `z`, `z̄`, `ν` with big-integer coefficients, plus fast `f64` evaluation by
//!   recurrence. The magnetic Laplacian acts exactly on [`tripoly::TriPoly`].
//! * [`kernels`]: closed forms of the generating functions, both complex Mehler
//!   formulas and the magnetic heat kernel, each paired with a truncated series.
//! * [`quadrature`]: tensor Gauss–Hermite integration over the plane, used as an
//!   independent oracle for integral identities.
//! * [`verify`]: a named catalog of identities run over seeded samples, with
//!   JSON-lines reports.
//!
//! The `chermite` binary wraps all of this; see [`cli`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod hermite;
pub mod kernels;
pub mod numeric;
pub mod quadrature;
pub mod tripoly;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::C64;
