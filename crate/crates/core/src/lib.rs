//! Exact computation over small prime fields: character sums and Gowers
//! norms, small-scale rank decisions, subspace geometry of varieties, and
//! low-degree extension problems.
//!
//! Every quantity is computed by exhaustive enumeration with integer
//! histograms and exact linear algebra; floats appear only as presentation
//! duplicates of exact values.

pub mod affine;
pub mod analytic;
pub mod ctx;
pub mod error;
pub mod explicit;
pub mod geometry;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod nullsatz;
pub mod poly;
pub mod rank;
pub mod weakpoly;

pub use ctx::Ctx;
pub use error::{Error, Result};
pub use gf::{Fe, PrimeField};
pub use poly::{Monomial, MultiPoly, MultilinearForm, PolyFamily};
