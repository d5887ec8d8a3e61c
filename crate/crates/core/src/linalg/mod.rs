//! Numerical primitives on S^3: coordinates, eigenstructure, inertia,
//! congruence factorization and subspace algebra under the trace inner product.

mod eigen;
mod inertia;
mod subspace;
mod sym3;

pub use eigen::{eigen_sym3, lambda_min, solve_symmetric, EigenTriple, SymEigen};
pub use inertia::{
    congruence_factor, congruence_factor_with_tol, default_zero_tol, inertia, inertia_default, is_psd, psd_project,
    CongruenceFactor, Inertia, InertiaCounts, ABS_FLOOR,
};
pub use subspace::{Subspace, RANK_TOL};
pub use sym3::{Mat3, SymMat3, Vec6};
