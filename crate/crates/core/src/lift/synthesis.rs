//! Certificates for every representable slice.
//!
//! * `S_B` with `B` singular indefinite: `B = Mᵀ Diag(1,−1,0) M`, and
//!   `A ↦ M A Mᵀ` carries `S_B` onto the canonical slice.
//! * `dim S ≤ 4` with a definite point: `L ⊆ B⊥` for some singular
//!   indefinite `B ∈ L⊥`, found by walking a circle in `L⊥`; then
//!   `S = S_B ∩ L`.
//! * Otherwise the slice lies in a proper face, which is a copy of `S₊²`
//!   (itself a Lorentz cone), a ray, or `{0}`.

use crate::classify::{classify_description, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{congruence_factor, eigen_sym3, inertia_default, Subspace, SymMat3, Vec6};
use crate::slice::{max_rank_element, slice_dimension, SliceDescription};
use crate::verify::{verify, VerifyOptions};

use super::canonical::canonical_map;
use super::{constraint_rows, Aux, LiftCertificate, Provenance};

pub fn lift_orthogonal_singular(b: &SymMat3) -> Result<LiftCertificate> {
    let inr = inertia_default(b);
    if (inr.n_plus, inr.n_minus, inr.n_zero) != (1, 1, 1) {
        return Err(Error::NotSingularIndefinite { n_plus: inr.n_plus, n_minus: inr.n_minus, n_zero: inr.n_zero });
    }
    // the factor orders rows (+, −, 0), so D is already Diag(1, −1, 0)
    let f = congruence_factor(b);
    let m = f.m;
    let minv = m.inverse().ok_or_else(|| Error::NumericalFailure("congruence factor is not invertible".into()))?;
    Ok(LiftCertificate::from_map(
        |z| canonical_map(z).congruence(&minv),
        Vec::new(),
        Provenance::CongruenceConjugated,
        Some(Aux::Congruence(m)),
    ))
}

const LAMBDA2_TOL: f64 = 1e-10;
const DEFINITE_GAP: f64 = 1e-8;

/// A unit `B ∈ L⊥` with `λ₂(B) = 0` and `λ₁ < 0 < λ₃`.
///
/// Every nonzero element of `L⊥` is indefinite when `L` holds a definite
/// matrix, and `λ₂(−C) = −λ₂(C)`, so `λ₂` changes sign on the half circle
/// `cos θ C + sin θ C'`. Bisection runs on that sign only.
pub fn find_singular_complement(l: &Subspace) -> Result<SymMat3> {
    if l.dim() > 4 {
        return Err(Error::PreconditionViolated(format!("subspace has dimension {} > 4", l.dim())));
    }
    let w = max_rank_element(l)?;
    if w.rank != 3 {
        return Err(Error::PreconditionViolated(format!("slice has no definite point (maximal rank {})", w.rank)));
    }
    let perp = l.complement();
    let c = SymMat3::smat(&perp.basis()[0]);
    let lam2 = |x: &SymMat3| eigen_sym3(x).values[1];
    let b = if lam2(&c).abs() <= LAMBDA2_TOL {
        c
    } else {
        let c = if lam2(&c) > 0.0 { c } else { -c };
        let c2 = SymMat3::smat(&perp.basis()[1]);
        let at = |th: f64| c.scale(th.cos()) + c2.scale(th.sin());
        let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if lam2(&at(mid)) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut th = 0.5 * (lo + hi);
        // Newton on λ₂: derivative is u₂ᵀ B'(θ) u₂
        for _ in 0..3 {
            let e = eigen_sym3(&at(th));
            let u = e.vector(1);
            let d = (c.scale(-th.sin()) + c2.scale(th.cos())).quad_form(&u);
            if d.abs() < 1e-12 {
                break;
            }
            let next = th - e.values[1] / d;
            if lam2(&at(next)).abs() < e.values[1].abs() {
                th = next;
            } else {
                break;
            }
        }
        at(th)
    };
    let b = b.scale(1.0 / b.frobenius_norm());
    let ev = eigen_sym3(&b).values;
    if ev[0] >= -DEFINITE_GAP || ev[2] <= DEFINITE_GAP {
        return Err(Error::IndefinitenessLost { lambda_min: ev[0] });
    }
    if ev[1].abs() > LAMBDA2_TOL {
        return Err(Error::NumericalFailure(format!("bisection ended at λ₂ = {:e}", ev[1])));
    }
    Ok(b)
}

/// Lift of a slice contained in a proper face, from its description.
pub fn face_lift(desc: &SliceDescription) -> Result<LiftCertificate> {
    let range = &desc.witness.range_basis;
    let span_rows = |g: &LiftCertificate| -> Vec<Vec6> {
        desc.span_s
            .complement()
            .basis()
            .iter()
            .map(|n| Vec6(std::array::from_fn(|j| (0..6).map(|i| n[i] * g.g[i][j]).sum())))
            .collect()
    };
    let unit = |k: usize| Vec6::unit(k);
    let (cert, pins) = match range.as_slice() {
        [] => (
            LiftCertificate::from_map(
                |_| SymMat3::zero(),
                Vec::new(),
                Provenance::FaceEmbedding,
                Some(Aux::Range(vec![])),
            ),
            (0..6).map(unit).collect::<Vec<_>>(),
        ),
        [u] => {
            let p = SymMat3::outer(u);
            let cert = LiftCertificate::from_map(
                |z| p.scale(z[2]),
                Vec::new(),
                Provenance::FaceEmbedding,
                Some(Aux::Range(range.clone())),
            );
            (cert, vec![unit(0), unit(1), unit(3), unit(4), unit(5)])
        }
        [v1, v2] => {
            let p1 = SymMat3::outer(v1);
            let p2 = SymMat3::outer(v2);
            let cross = SymMat3::outer(&add(v1, v2)) - p1 - p2;
            let cert = LiftCertificate::from_map(
                |z| p1.scale(z[2] - z[0]) + p2.scale(z[2] + z[0]) + cross.scale(z[1]),
                Vec::new(),
                Provenance::FaceEmbedding,
                Some(Aux::Range(range.clone())),
            );
            (cert, vec![unit(3), unit(4), unit(5)])
        }
        _ => return Err(Error::RankTooLarge(range.len())),
    };
    let mut rows = pins;
    rows.extend(span_rows(&cert));
    Ok(LiftCertificate { e: constraint_rows(&rows), ..cert })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftOptions {
    /// Self-check run before a certificate is returned; `None` skips it.
    pub verify: Option<VerifyOptions>,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self { verify: Some(VerifyOptions { forward_samples: 500, backward_samples: 60, ..VerifyOptions::default() }) }
    }
}

pub fn lift_slice(l: &Subspace) -> Result<LiftCertificate> {
    lift_slice_with(l, &LiftOptions::default())
}

pub fn lift_slice_with(l: &Subspace, opts: &LiftOptions) -> Result<LiftCertificate> {
    let desc = slice_dimension(l)?;
    let verdict = classify_description(&desc)?;
    lift_description(&desc, &verdict, opts)
}

/// Lift for an already analysed slice.
pub fn lift_description(desc: &SliceDescription, verdict: &Verdict, opts: &LiftOptions) -> Result<LiftCertificate> {
    if !verdict.socr {
        return Err(Error::NotSocr(verdict.reason.as_str().into()));
    }
    let l = &desc.l;
    let cert = if desc.dim_s == 5 {
        let b = verdict
            .witness_b
            .ok_or_else(|| Error::NumericalFailure("five-dimensional slice without a normal".into()))?;
        lift_orthogonal_singular(&b)?
    } else if desc.has_interior_point() {
        let b = find_singular_complement(l)?;
        let base = lift_orthogonal_singular(&b)?;
        let rows: Vec<Vec6> = l
            .complement()
            .basis()
            .iter()
            .map(|n| Vec6(std::array::from_fn(|j| (0..6).map(|i| n[i] * base.g[i][j]).sum())))
            .collect();
        LiftCertificate { e: constraint_rows(&rows), provenance: Provenance::SlicedCongruence, ..base }
    } else {
        face_lift(desc)?
    };
    if let Some(vopts) = &opts.verify {
        let report = verify(&cert, l, vopts);
        if !report.passed {
            return Err(Error::CertificateRejected(report.summary()));
        }
    }
    Ok(cert)
}

fn add(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| a[i] + b[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::{canonical_lift, preimage};
    use crate::rng;

    fn eq_diag_slice() -> Subspace {
        Subspace::from_matrices(&[SymMat3::diag(1.0, -1.0, 0.0)]).complement()
    }

    #[test]
    fn canonical_normal_gives_canonical_map() {
        let cert = lift_orthogonal_singular(&SymMat3::diag(1.0, -1.0, 0.0)).unwrap();
        let g0 = canonical_lift().g;
        let err = (0..6)
            .flat_map(|i| (0..6).map(move |j| (i, j)))
            .map(|(i, j)| (cert.g[i][j] - g0[i][j]).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-15);
    }

    #[test]
    fn scaled_normal_conjugates_by_square_roots() {
        let b = SymMat3::diag(2.0, -3.0, 0.0);
        let cert = lift_orthogonal_singular(&b).unwrap();
        let Some(Aux::Congruence(m)) = cert.aux else { panic!("missing factor") };
        for (i, want) in [2.0_f64.sqrt(), 3.0_f64.sqrt(), 1.0].iter().enumerate() {
            assert!((m.0[i][i].abs() - want).abs() < 1e-15);
        }
        let mut rng = rng::stream(4, 0);
        for _ in 0..200 {
            let z = rng::gaussian_vec6(&mut rng).0;
            let x = cert.apply(&z);
            assert!(x.inner(&b).abs() <= 1e-12 * Vec6(z).norm());
        }
    }

    #[test]
    fn nonsingular_normal_is_refused() {
        assert!(matches!(
            lift_orthogonal_singular(&SymMat3::diag(1.0, -1.0, -1.0)),
            Err(Error::NotSingularIndefinite { n_plus: 1, n_minus: 2, n_zero: 0 })
        ));
    }

    #[test]
    fn complement_of_identity_ray() {
        let l = Subspace::from_matrices(&[SymMat3::identity()]);
        let b = find_singular_complement(&l).unwrap();
        assert!(b.trace().abs() < 1e-12);
        let ev = eigen_sym3(&b).values;
        assert!(ev[1].abs() <= 1e-10 && ev[0] < -1e-8 && ev[2] > 1e-8);
    }

    #[test]
    fn complement_of_two_dimensional_span() {
        let l = Subspace::from_matrices(&[SymMat3::identity(), SymMat3::diag(1.0, -1.0, 0.0)]);
        let b = find_singular_complement(&l).unwrap();
        assert!(l.distance(&b.svec()) > 0.999);
        assert!(l.basis().iter().all(|a| a.dot(&b.svec()).abs() < 1e-12));
        assert!(eigen_sym3(&b).values[1].abs() <= 1e-10);
    }

    #[test]
    fn complement_needs_a_definite_point() {
        let l = Subspace::from_matrices(&[SymMat3::unit(0, 0)]);
        assert!(matches!(find_singular_complement(&l), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn face_lift_of_lower_block() {
        let l = Subspace::from_matrices(&[SymMat3::unit(1, 1), SymMat3::unit(2, 2), SymMat3::unit(1, 2)]);
        let desc = slice_dimension(&l).unwrap();
        let cert = face_lift(&desc).unwrap();
        assert_eq!(cert.provenance, Provenance::FaceEmbedding);
        let x = SymMat3::new(0.0, 2.0, 1.0, 0.0, 0.0, 0.5);
        let p = preimage(&cert, &x, 1e-12).unwrap();
        assert!(p.residual < 1e-12 && p.cone_margin >= 0.0);
    }

    #[test]
    fn lift_of_the_table_slice_is_verified() {
        let cert = lift_slice(&eq_diag_slice()).unwrap();
        assert_eq!(cert.provenance, Provenance::CongruenceConjugated);
        assert!(cert.e.is_empty());
    }

    #[test]
    fn lift_of_identity_ray_is_sliced() {
        let cert = lift_slice(&Subspace::from_matrices(&[SymMat3::identity()])).unwrap();
        assert_eq!(cert.provenance, Provenance::SlicedCongruence);
        assert_eq!(cert.e_rank(), 4);
    }

    #[test]
    fn lift_of_full_space_is_refused() {
        assert!(matches!(lift_slice(&Subspace::full()), Err(Error::NotSocr(_))));
    }

    #[test]
    fn zero_slice_has_zero_certificate() {
        let cert = lift_slice(&Subspace::from_matrices(&[SymMat3::diag(1.0, -1.0, 0.0)])).unwrap();
        assert_eq!(cert.g, [[0.0; 6]; 6]);
        assert_eq!(cert.e_rank(), 6);
    }
}
