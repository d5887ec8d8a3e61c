//! Second-order cone representability of slices.
//!
//! A slice is representable exactly when its dimension is at most four, or
//! it is orthogonal to a nonzero singular matrix. Five-dimensional slices
//! are `S_B` for an indefinite `B`, and are representable iff `B` is singular.
//! The full cone is not representable; that fact is taken as given.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inertia_default, Subspace, SymMat3};
use crate::slice::{slice_dimension, SliceDescription};

/// Relative determinant threshold: `B` counts as singular when
/// `|det B| ≤ DET_TOL · ‖B‖³`.
pub const DET_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reason {
    DimAtMost4,
    SingularIndefiniteNormal,
    FaceSlice,
    FullCone,
    NonsingularIndefiniteNormal,
}

impl Reason {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reason::DimAtMost4 => "DimAtMost4",
            Reason::SingularIndefiniteNormal => "SingularIndefiniteNormal",
            Reason::FaceSlice => "FaceSlice",
            Reason::FullCone => "FullCone",
            Reason::NonsingularIndefiniteNormal => "NonsingularIndefiniteNormal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub socr: bool,
    pub reason: Reason,
    pub dim_s: usize,
    /// Normal of a five-dimensional slice (unit Frobenius norm when computed
    /// from a subspace).
    pub witness_b: Option<SymMat3>,
    /// `|det B|` lies within a decade of the singularity threshold.
    pub marginal: bool,
}

fn relative_det(b: &SymMat3) -> f64 {
    b.det().abs() / b.frobenius_norm().powi(3)
}

fn is_marginal(b: &SymMat3, det_tol: f64) -> bool {
    let d = relative_det(b);
    d > det_tol / 10.0 && d < det_tol * 10.0
}

/// Classifies `S_B = { A ⪰ 0 : ⟨A, B⟩ = 0 }`.
pub fn classify_orthogonal(b: &SymMat3) -> Result<Verdict> {
    classify_orthogonal_with(b, DET_TOL)
}

/// As [`classify_orthogonal`] with an explicit relative determinant threshold.
pub fn classify_orthogonal_with(b: &SymMat3, det_tol: f64) -> Result<Verdict> {
    if !b.is_finite() || !(det_tol >= 0.0) {
        return Err(Error::InvalidInput("non-finite matrix or tolerance".into()));
    }
    if b.frobenius_norm() <= 1e-12 {
        return Err(Error::ZeroMatrix);
    }
    let inr = inertia_default(b);
    if inr.is_semidefinite() {
        let r = inr.rank();
        return Ok(Verdict {
            socr: true,
            reason: Reason::FaceSlice,
            dim_s: (3 - r) * (4 - r) / 2,
            witness_b: None,
            marginal: false,
        });
    }
    let singular = relative_det(b) <= det_tol;
    Ok(Verdict {
        socr: singular,
        reason: if singular { Reason::SingularIndefiniteNormal } else { Reason::NonsingularIndefiniteNormal },
        dim_s: 5,
        witness_b: Some(*b),
        marginal: is_marginal(b, det_tol),
    })
}

/// Singular and indefinite, decided from the determinant and the sum of
/// principal 2x2 minors: `det B = 0` and `e₂(B) < 0`.
///
/// For a singular `B` with spectrum `(λ₁, λ₂, 0)` the minor sum equals
/// `λ₁λ₂`, which is negative exactly when `B` is indefinite.
pub fn singular_indefinite_by_minors(b: &SymMat3, tol: f64) -> bool {
    let scale = b.frobenius_norm().max(1.0);
    b.det().abs() <= tol * scale.powi(3) && b.principal_minor_sum() < -tol
}

pub fn singular_indefinite_by_inertia(b: &SymMat3) -> bool {
    let inr = inertia_default(b);
    inr.is_singular() && inr.is_indefinite()
}

/// Checks the minor-based test against the eigenvalue-based one on fixed
/// matrices with known inertia.
pub fn self_test() -> Result<()> {
    let cases = [
        (SymMat3::diag(1.0, -1.0, 0.0), true),
        (SymMat3::diag(1.0, 1.0, 0.0), false),
        (SymMat3::diag(1.0, -1.0, -1.0), false),
        (SymMat3::diag(-2.0, 0.0, 3.0), true),
        (SymMat3::new(0.0, 1.0, 0.0, 0.0, -0.5, 0.0), false),
    ];
    for (b, want) in cases {
        let by_minors = singular_indefinite_by_minors(&b, DET_TOL);
        let by_inertia = singular_indefinite_by_inertia(&b);
        if by_minors != want || by_inertia != want {
            return Err(Error::NumericalFailure(format!(
                "self-test disagreement on {b}: minors {by_minors}, inertia {by_inertia}"
            )));
        }
    }
    Ok(())
}

pub fn classify_slice(l: &Subspace) -> Result<Verdict> {
    classify_description(&slice_dimension(l)?)
}

pub fn classify_description(desc: &SliceDescription) -> Result<Verdict> {
    classify_description_with(desc, DET_TOL)
}

pub fn classify_description_with(desc: &SliceDescription, det_tol: f64) -> Result<Verdict> {
    match desc.dim_s {
        6 => Ok(Verdict { socr: false, reason: Reason::FullCone, dim_s: 6, witness_b: None, marginal: false }),
        5 => {
            let b = normal_of(&desc.span_s);
            let v = classify_orthogonal_with(&b, det_tol)?;
            if v.reason == Reason::FaceSlice {
                return Err(Error::NumericalFailure(format!("normal {b} of a five-dimensional slice is semidefinite")));
            }
            Ok(Verdict { dim_s: 5, ..v })
        }
        d => Ok(Verdict { socr: true, reason: Reason::DimAtMost4, dim_s: d, witness_b: None, marginal: false }),
    }
}

/// Unit normal of a hyperplane, signed so that it has at least as many
/// positive as negative eigenvalues.
fn normal_of(hyperplane: &Subspace) -> SymMat3 {
    let b = SymMat3::smat(&hyperplane.complement().basis()[0]);
    let inr = inertia_default(&b);
    if inr.n_minus > inr.n_plus {
        -b
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B3: SymMat3 = SymMat3::new(0.0, 1.0, 0.0, 0.0, -0.5, 0.0);

    #[test]
    fn equal_diagonal_normal_is_representable() {
        let v = classify_orthogonal(&SymMat3::diag(1.0, -1.0, 0.0)).unwrap();
        assert!(v.socr);
        assert_eq!(v.reason, Reason::SingularIndefiniteNormal);
        assert_eq!(v.dim_s, 5);
    }

    #[test]
    fn diagonal_sum_normal_is_not() {
        let v = classify_orthogonal(&SymMat3::diag(1.0, -1.0, -1.0)).unwrap();
        assert!(!v.socr);
        assert_eq!(v.reason, Reason::NonsingularIndefiniteNormal);
    }

    #[test]
    fn cross_entry_normal_is_not() {
        assert_eq!(B3.det(), -0.25);
        assert!(!classify_orthogonal(&B3).unwrap().socr);
    }

    #[test]
    fn zero_normal_is_rejected() {
        assert_eq!(classify_orthogonal(&SymMat3::zero()), Err(Error::ZeroMatrix));
    }

    #[test]
    fn semidefinite_normals_give_faces() {
        let v = classify_orthogonal(&SymMat3::diag(0.0, 0.0, 2.0)).unwrap();
        assert_eq!((v.socr, v.reason, v.dim_s), (true, Reason::FaceSlice, 3));
        let v = classify_orthogonal(&SymMat3::diag(-1.0, -1.0, 0.0)).unwrap();
        assert_eq!(v.dim_s, 1);
        assert_eq!(classify_orthogonal(&SymMat3::identity()).unwrap().dim_s, 0);
    }

    #[test]
    fn minor_test_uses_negative_sum() {
        let b = SymMat3::diag(1.0, -1.0, 0.0);
        assert_eq!(b.principal_minor_sum(), -1.0);
        // e2 of the spectrum (1, -1, 0)
        assert_eq!(1.0 * -1.0 + 1.0 * 0.0 + -1.0 * 0.0, -1.0);
        assert!(singular_indefinite_by_minors(&b, DET_TOL));
        assert!(!singular_indefinite_by_minors(&SymMat3::diag(1.0, 1.0, 0.0), DET_TOL));
        assert!(!singular_indefinite_by_minors(&SymMat3::diag(1.0, -1.0, -1.0), DET_TOL));
        self_test().unwrap();
    }

    #[test]
    fn slices_of_the_table() {
        let l = Subspace::from_matrices(&[SymMat3::diag(1.0, -1.0, 0.0)]).complement();
        let v = classify_slice(&l).unwrap();
        assert!(v.socr);
        let b = v.witness_b.unwrap();
        let want = SymMat3::diag(1.0, -1.0, 0.0).scale(1.0 / 2.0_f64.sqrt());
        assert!((b - want).frobenius_norm().min((b + want).frobenius_norm()) < 1e-12);

        assert!(!classify_slice(&Subspace::full()).unwrap().socr);

        let small = Subspace::from_matrices(&[SymMat3::identity(), SymMat3::unit(0, 1)]);
        let v = classify_slice(&small).unwrap();
        assert_eq!((v.socr, v.reason, v.dim_s), (true, Reason::DimAtMost4, 2));
    }
}
