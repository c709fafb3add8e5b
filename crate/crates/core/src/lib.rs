//! Exact arithmetic toolkit for rank-2 local systems on the projective line
//! minus `{0, 1, λ, ∞}` whose local monodromy is a unipotent Jordan block at
//! the finite punctures and a `(-1)`-unipotent block at infinity.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`]: rationals, cyclotomic fields `ℚ(ζ_N)`, prime fields and
//!   dense univariate polynomials.
//! * [`linalg`]: dense exact matrices, kernels, characteristic polynomials and
//!   Jordan types over any [`exactalg::Field`].
//! * [`monodromy`]: monodromy tuples, condition (★), irreducibility, trace
//!   coordinates and finite-image detection.
//! * [`convolution`]: the Dettweiler–Reiter matrix realisation of Katz's
//!   middle convolution and the induced tuple of a character of the Legendre
//!   double cover.
//! * [`cayley`]: the explicit two-parameter family of Cayley tuples, the
//!   Cayley cubic, trace fields and parameter matching.
//! * [`mcg`]: the Hurwitz braid action and orbit enumeration in trace
//!   coordinates.
//! * [`elliptic`]: Legendre-curve arithmetic, division polynomials, the
//!   x-coordinate shadow of multiplication maps and torsion x-polynomials.
//! * [`cli`]: the `cayleymc` command-line front end.

pub mod cayley;
pub mod cli;
pub mod convolution;
pub mod elliptic;
mod error;
pub mod exactalg;
pub mod linalg;
pub mod mcg;
pub mod monodromy;

pub use error::{Error, Result};
