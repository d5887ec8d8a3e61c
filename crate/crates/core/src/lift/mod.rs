//! Lift certificates `S = { smat(G z) : z ∈ Q², E z = 0 }`.
//!
//! `z = (w1, w2, w3, v1, v2, v3)` holds two Lorentz triples with the third
//! coordinate radial: `w3 ≥ ‖(w1, w2)‖`, `v3 ≥ ‖(v1, v2)‖`.

mod canonical;
mod synthesis;

use serde::{Deserialize, Serialize};

use crate::linalg::{Mat3, Subspace, SymMat3, Vec6};

pub use canonical::{canonical_lift, canonical_map, preimage, Preimage};
pub use synthesis::{
    face_lift, find_singular_complement, lift_description, lift_orthogonal_singular, lift_slice, lift_slice_with,
    LiftOptions,
};

/// Identifies the coordinate order of `z` and of the svec output in files.
pub const COORDINATE_CONVENTION: &str = "lorentz-x3-radial";

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Q2Point {
    pub z: [f64; 6],
}

impl Q2Point {
    pub fn new(z: [f64; 6]) -> Self {
        Self { z }
    }

    pub fn w(&self) -> [f64; 3] {
        [self.z[0], self.z[1], self.z[2]]
    }

    pub fn v(&self) -> [f64; 3] {
        [self.z[3], self.z[4], self.z[5]]
    }

    pub fn norm(&self) -> f64 {
        Vec6(self.z).norm()
    }

    /// `min(w3 − ‖(w1,w2)‖, v3 − ‖(v1,v2)‖)`; nonnegative exactly on Q².
    pub fn cone_margin(&self) -> f64 {
        let m = |x: [f64; 3]| x[2] - x[0].hypot(x[1]);
        m(self.w()).min(m(self.v()))
    }

    pub fn in_cone(&self, tol: f64) -> bool {
        self.cone_margin() >= -tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Canonical,
    CongruenceConjugated,
    FaceEmbedding,
    SlicedCongruence,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Canonical => "Canonical",
            Provenance::CongruenceConjugated => "CongruenceConjugated",
            Provenance::FaceEmbedding => "FaceEmbedding",
            Provenance::SlicedCongruence => "SlicedCongruence",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Canonical, Self::CongruenceConjugated, Self::FaceEmbedding, Self::SlicedCongruence]
            .into_iter()
            .find(|p| p.as_str() == s)
    }
}

/// Data the preimage solver needs beyond `G` and `E`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aux {
    /// `M` with `G(z) = M⁻¹ G₀(z) M⁻ᵀ`.
    Congruence(Mat3),
    /// Orthonormal range basis of the face carrying the slice.
    Range(Vec<[f64; 3]>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftCertificate {
    pub m: usize,
    /// Row-major; column `j` is the svec image of the `j`-th coordinate of `z`.
    pub g: [[f64; 6]; 6],
    pub e: Vec<[f64; 6]>,
    pub provenance: Provenance,
    pub aux: Option<Aux>,
}

impl LiftCertificate {
    /// Builds `G` column by column from a linear map on `z`.
    pub fn from_map(
        map: impl Fn(&[f64; 6]) -> SymMat3,
        e: Vec<[f64; 6]>,
        provenance: Provenance,
        aux: Option<Aux>,
    ) -> Self {
        let mut g = [[0.0; 6]; 6];
        for j in 0..6 {
            let mut unit = [0.0; 6];
            unit[j] = 1.0;
            let col = map(&unit).svec();
            for (i, row) in g.iter_mut().enumerate() {
                row[j] = col[i];
            }
        }
        Self { m: 2, g, e, provenance, aux }
    }

    pub fn apply_svec(&self, z: &[f64; 6]) -> Vec6 {
        Vec6(std::array::from_fn(|i| (0..6).map(|j| self.g[i][j] * z[j]).sum()))
    }

    pub fn apply(&self, z: &[f64; 6]) -> SymMat3 {
        SymMat3::smat(&self.apply_svec(z))
    }

    /// Largest `|⟨e_k, z⟩|` over the rows of `E`.
    pub fn constraint_residual(&self, z: &[f64; 6]) -> f64 {
        self.e.iter().map(|row| Vec6(*row).dot(&Vec6(*z)).abs()).fold(0.0, f64::max)
    }

    /// Orthonormal basis of the row space of `E`.
    pub fn constraint_space(&self) -> Subspace {
        Subspace::span(&self.e.iter().map(|r| Vec6(*r)).collect::<Vec<_>>())
    }

    pub fn e_rank(&self) -> usize {
        self.constraint_space().dim()
    }

    pub fn g_rank(&self) -> usize {
        let cols: Vec<Vec6> = (0..6).map(|j| Vec6(std::array::from_fn(|i| self.g[i][j]))).collect();
        Subspace::span(&cols).dim()
    }

    pub fn is_finite(&self) -> bool {
        self.g.iter().flatten().chain(self.e.iter().flatten()).all(|x| x.is_finite())
    }
}

/// Orthonormalized constraint rows; an empty list means no constraints.
pub(crate) fn constraint_rows(rows: &[Vec6]) -> Vec<[f64; 6]> {
    let scale = rows.iter().map(Vec6::norm).fold(0.0, f64::max);
    // rows that vanish relative to unit scale carry no constraint
    Subspace::span_with_tol(rows, (1e-10 * scale.max(1.0)).max(1e-14)).basis().iter().map(|v| v.0).collect()
}
