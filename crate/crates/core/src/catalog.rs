//! Named example slices and spectrahedra.

use serde::{Deserialize, Serialize};

use crate::linalg::{Subspace, SymMat3};
use crate::spectra::Lmi;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleSlice {
    pub name: String,
    pub description: String,
    pub normal: SymMat3,
    pub expected_socr: bool,
}

impl ExampleSlice {
    pub fn subspace(&self) -> Subspace {
        Subspace::from_matrices(&[self.normal]).complement()
    }
}

/// Three five-dimensional slices `S_B`: `a11 = a22`, `a11 = a22 + a33` and
/// `a22 = a13`.
pub fn five_dimensional_slices() -> Vec<ExampleSlice> {
    let row = |name: &str, description: &str, normal, expected_socr| ExampleSlice {
        name: name.into(),
        description: description.into(),
        normal,
        expected_socr,
    };
    vec![
        row("S1", "a11 = a22", SymMat3::diag(1.0, -1.0, 0.0), true),
        row("S2", "a11 = a22 + a33", SymMat3::diag(1.0, -1.0, -1.0), false),
        row("S3", "a22 = a13", SymMat3::new(0.0, 1.0, 0.0, 0.0, -0.5, 0.0), false),
    ]
}

pub fn eliptope() -> Lmi {
    Lmi::eliptope()
}
