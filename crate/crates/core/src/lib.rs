//! Guaranteed a posteriori bounds on the directed distance between exact and
//! approximate eigenspaces of the Dirichlet Laplacian.
//!
//! The crate certifies how far a computed cluster of eigenfunctions can be
//! from the true invariant subspace, in the energy and the L2 norm, using only
//! the discrete eigenpairs, two-sided eigenvalue enclosures, and an a priori
//! projection constant. The unit square (where the spectrum is known in
//! closed form) doubles as a self-test: every certified bound is compared
//! against the exactly computable subspace distance.

pub mod error;
pub mod linalg;
pub mod fem;
pub mod mesh;
pub mod spectra;
pub mod subspace;

pub use error::{Error, Result};
