//! Affine second-order cone representations of spectrahedra
//! `SP = { x : A(x) + B ⪰ 0 }` with 3x3 coefficients.
//!
//! With `L' = span{A₁, …, Aₙ, B}`, `A(x) + B` always lies in `L'`, so
//! `x ∈ SP` iff `A(x) + B` lies in the slice `S₊³ ∩ L'`. A lift of that
//! slice turns membership into `∃ z ∈ Q²: G z − A(x) = B, E z = 0`.

use serde::{Deserialize, Serialize};

use crate::classify::{classify_description, Verdict};
use crate::error::{Error, Result};
use crate::lift::{lift_description, preimage, LiftCertificate, LiftOptions};
use crate::linalg::{lambda_min, Subspace, SymEigen, SymMat3};
use crate::rng;
use crate::slice::slice_dimension;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lmi {
    pub coeffs: Vec<SymMat3>,
    pub offset: SymMat3,
}

impl Lmi {
    pub fn new(coeffs: Vec<SymMat3>, offset: SymMat3) -> Self {
        Self { coeffs, offset }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// `A(x) + y B`.
    pub fn evaluate_homogeneous(&self, x: &[f64], y: f64) -> SymMat3 {
        assert_eq!(x.len(), self.n(), "point has the wrong dimension");
        self.coeffs.iter().zip(x).fold(self.offset.scale(y), |acc, (a, xi)| acc + a.scale(*xi))
    }

    pub fn evaluate(&self, x: &[f64]) -> SymMat3 {
        self.evaluate_homogeneous(x, 1.0)
    }

    /// The 3x3 correlation matrices: unit diagonal, free off-diagonal.
    pub fn eliptope() -> Self {
        Self::new(vec![SymMat3::unit(0, 1), SymMat3::unit(0, 2), SymMat3::unit(1, 2)], SymMat3::identity())
    }

    /// Half-width of the sampling box: `1 + ‖B‖ / max_i max(‖Aᵢ‖, 1)`.
    pub fn default_box(&self) -> f64 {
        let a = self.coeffs.iter().map(|a| a.frobenius_norm().max(1.0)).fold(1.0, f64::max);
        1.0 + self.offset.frobenius_norm() / a
    }
}

pub fn image_subspace(lmi: &Lmi) -> Subspace {
    let mut gens: Vec<SymMat3> = lmi.coeffs.clone();
    gens.push(lmi.offset);
    Subspace::from_matrices(&gens)
}

/// Kernel of `(x, y) ↦ svec(A(x) + y B)` in `R^{n+1}`: the lineality
/// directions of the homogenized cone `{(x, y) : A(x) + y B ⪰ 0}`.
pub fn lmi_lineality(lmi: &Lmi) -> Vec<Vec<f64>> {
    let mut cols: Vec<_> = lmi.coeffs.iter().map(SymMat3::svec).collect();
    cols.push(lmi.offset.svec());
    let k = cols.len();
    let gram: Vec<f64> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| cols[i].dot(&cols[j])).collect();
    let e = SymEigen::new(k, &gram);
    let top = e.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    e.values
        .iter()
        .zip(&e.vectors)
        .filter(|(l, _)| l.abs() <= 1e-12 * top || top == 0.0)
        .map(|(_, v)| v.clone())
        .collect()
}

/// Equalities `H_x x + H_z z = h` over `z ∈ Q × Q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineSocRep {
    pub n: usize,
    pub h_x: Vec<Vec<f64>>,
    pub h_z: Vec<[f64; 6]>,
    pub h: Vec<f64>,
    pub cone: String,
    pub certificate: LiftCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum SpectraOutcome {
    Represented(AffineSocRep),
    /// The slice is not representable; this says nothing about the
    /// spectrahedron itself.
    Inapplicable {
        verdict: Verdict,
    },
}

pub fn affine_soc_rep(lmi: &Lmi) -> Result<SpectraOutcome> {
    affine_soc_rep_with(lmi, &LiftOptions::default())
}

pub fn affine_soc_rep_with(lmi: &Lmi, opts: &LiftOptions) -> Result<SpectraOutcome> {
    if !lmi.coeffs.iter().chain([&lmi.offset]).all(SymMat3::is_finite) {
        return Err(Error::InvalidInput("non-finite LMI coefficient".into()));
    }
    let l = image_subspace(lmi);
    let desc = slice_dimension(&l)?;
    let verdict = classify_description(&desc)?;
    if !verdict.socr {
        return Ok(SpectraOutcome::Inapplicable { verdict });
    }
    let cert = lift_description(&desc, &verdict, opts)?;
    let n = lmi.n();
    let a_cols: Vec<_> = lmi.coeffs.iter().map(SymMat3::svec).collect();
    let b = lmi.offset.svec();
    let mut h_x = Vec::new();
    let mut h_z = Vec::new();
    let mut h = Vec::new();
    for i in 0..6 {
        h_x.push(a_cols.iter().map(|c| -c[i]).collect());
        h_z.push(cert.g[i]);
        h.push(b[i]);
    }
    for row in &cert.e {
        h_x.push(vec![0.0; n]);
        h_z.push(*row);
        h.push(0.0);
    }
    Ok(SpectraOutcome::Represented(AffineSocRep { n, h_x, h_z, h, cone: "QxQ".into(), certificate: cert }))
}

impl AffineSocRep {
    /// Solves for `z` through the certificate's preimage and checks it.
    pub fn feasible(&self, lmi: &Lmi, x: &[f64], tol: f64) -> bool {
        preimage(&self.certificate, &lmi.evaluate(x), tol).is_ok()
    }

    /// Largest violation of the equality system at `(x, z)`.
    pub fn equality_residual(&self, x: &[f64], z: &[f64; 6]) -> f64 {
        (0..self.h.len())
            .map(|r| {
                let lhs: f64 = self.h_x[r].iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
                    + self.h_z[r].iter().zip(z).map(|(a, b)| a * b).sum::<f64>();
                (lhs - self.h[r]).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgreementStats {
    pub samples: usize,
    pub members: usize,
    /// Points with `|λ_min(A(x)+B)|` inside the boundary band; excluded.
    pub boundary: usize,
    pub disagreements: usize,
    pub box_half_width: f64,
    pub passed: bool,
}

pub const LMI_TOL: f64 = 1e-8;
pub const BOUNDARY_BAND: f64 = 1e-7;
const FEASIBILITY_TOL: f64 = 1e-12;

/// Compares the LMI oracle with the representation's feasibility oracle on
/// uniform points of `[−r, r]ⁿ`.
pub fn agreement(rep: &AffineSocRep, lmi: &Lmi, count: usize, seed: u64, half_width: f64) -> AgreementStats {
    use rand::Rng;
    let mut stats = AgreementStats {
        samples: count,
        members: 0,
        boundary: 0,
        disagreements: 0,
        box_half_width: half_width,
        passed: true,
    };
    for i in 0..count {
        let mut r = rng::stream(seed, i as u64);
        let x: Vec<f64> = (0..lmi.n()).map(|_| r.random_range(-half_width..=half_width)).collect();
        let lam = lambda_min(&lmi.evaluate(&x));
        if lam.abs() <= BOUNDARY_BAND {
            stats.boundary += 1;
            continue;
        }
        let by_lmi = lam >= -LMI_TOL;
        stats.members += by_lmi as usize;
        if by_lmi != rep.feasible(lmi, &x, FEASIBILITY_TOL) {
            stats.disagreements += 1;
        }
    }
    stats.passed = stats.disagreements == 0;
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Reason;

    #[test]
    fn image_dimensions() {
        assert_eq!(image_subspace(&Lmi::eliptope()).dim(), 4);
        assert_eq!(image_subspace(&Lmi::new(vec![], SymMat3::identity())).dim(), 1);
        let e = SymMat3::unit(0, 1);
        assert_eq!(image_subspace(&Lmi::new(vec![e, e], SymMat3::identity())).dim(), 2);
    }

    #[test]
    fn lineality_examples() {
        assert!(lmi_lineality(&Lmi::eliptope()).is_empty());
        let e = SymMat3::unit(0, 1);
        let k = lmi_lineality(&Lmi::new(vec![e, e], SymMat3::identity()));
        assert_eq!(k.len(), 1);
        assert!((k[0][0] + k[0][1]).abs() < 1e-12 && k[0][2].abs() < 1e-12);
        let k = lmi_lineality(&Lmi::new(vec![SymMat3::zero(), e], SymMat3::identity()));
        assert_eq!(k.len(), 1);
        assert!((k[0][0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eliptope_is_represented_and_agrees() {
        let lmi = Lmi::eliptope();
        let SpectraOutcome::Represented(rep) = affine_soc_rep(&lmi).unwrap() else { panic!("inapplicable") };
        assert_eq!(rep.h.len(), 6 + rep.certificate.e.len());
        let stats = agreement(&rep, &lmi, 2000, 0, 1.2);
        assert!(stats.passed, "{stats:?}");
        assert!(stats.members > 100);
        // identity is the centre of the eliptope
        assert!(rep.feasible(&lmi, &[0.0, 0.0, 0.0], 1e-12));
        let z = preimage(&rep.certificate, &SymMat3::identity(), 1e-12).unwrap().point.z;
        assert!(rep.equality_residual(&[0.0; 3], &z) < 1e-12);
    }

    #[test]
    fn sum_normal_slice_is_inapplicable() {
        let l = Subspace::from_matrices(&[SymMat3::diag(1.0, -1.0, -1.0)]).complement();
        let gens = l.basis_matrices();
        let lmi = Lmi::new(gens[1..].to_vec(), gens[0]);
        match affine_soc_rep(&lmi).unwrap() {
            SpectraOutcome::Inapplicable { verdict } => assert_eq!(verdict.reason, Reason::NonsingularIndefiniteNormal),
            SpectraOutcome::Represented(_) => panic!("should be inapplicable"),
        }
    }

    #[test]
    fn point_lmi_is_trivially_represented() {
        let lmi = Lmi::new(vec![], SymMat3::identity());
        let SpectraOutcome::Represented(rep) = affine_soc_rep(&lmi).unwrap() else { panic!("inapplicable") };
        assert_eq!(rep.n, 0);
        assert!(rep.feasible(&lmi, &[], 1e-12));
    }
}
