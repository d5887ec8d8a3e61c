//! Second-order cone representability of slices of the cone of 3x3 positive
//! semidefinite matrices.
//!
//! A slice `S₊³ ∩ L` is classified as second-order cone representable or
//! not; representable slices come with an explicit lift certificate
//! `S = { smat(G z) : z ∈ Q², E z = 0 }` that is checked against independent
//! sampling oracles. The same machinery yields affine second-order cone
//! representations of spectrahedra defined by 3x3 linear matrix inequalities.

pub mod catalog;
pub mod classify;
pub mod error;
pub mod lift;
pub mod linalg;
pub mod rng;
pub mod slice;
pub mod spectra;
pub mod verify;

pub use classify::{classify_orthogonal, classify_slice, Reason, Verdict};
pub use error::{Error, Result};
pub use lift::{preimage, LiftCertificate, Provenance, Q2Point};
pub use linalg::{Mat3, Subspace, SymMat3, Vec6};
pub use verify::{verify, VerificationReport, VerifyOptions};
