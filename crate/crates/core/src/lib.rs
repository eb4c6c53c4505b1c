//! Numerical toolkit for grand net spaces and grand Lorentz spaces on `[0, 1]`.
//!
//! Functions are piecewise constant on `n` uniform cells ([`GridFunction`]).
//! Everything downstream (net averages, rearrangements, norms, K-functional
//! bounds and integral-operator criteria) is evaluated either in closed form
//! per piece or by Gauss-Legendre quadrature on analytic pieces, so the
//! results are reproducible to near machine precision.
//!
//! Module map:
//!
//! * [`grid`] - grid functions, nets and their members
//! * [`rearrange`] - `f*` and `f**`
//! * [`profile`] - piecewise `alpha + beta / t` profiles and their quadrature
//! * [`netavg`] - the average function `f̄(t, M)` and the Hölder pairing
//! * [`norms`] - net, grand net and grand Lorentz norms, log-weight equivalents
//! * [`interp`] - K-functional upper bounds and interpolation-norm checks
//! * [`opkernel`] - integral operators, boundedness criteria, empirical norms
//! * [`verify`] - seeded corpora and the inequality suites

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod interp;
pub mod netavg;
pub mod norms;
pub mod numeric;
pub mod opkernel;
pub mod profile;
pub mod rearrange;
pub mod verify;

pub use error::{GrandNetError, Result};
pub use grid::{GridFunction, Net, NetMember, SpaceParams, WeightVariant};
pub use netavg::AvgProfile;
pub use norms::{EpsilonSearch, NormResult};
pub use profile::{Piece, Profile};
pub use rearrange::Rearrangement;
