//! Two-sided checks of a lift certificate against independent oracles.
//!
//! Forward: sampled `z ∈ Q² ∩ ker E` must map into `S₊³ ∩ L` (eigenvalue
//! and projection oracles). Backward: points of the slice produced by the
//! alternating-projections sampler, which never sees the certificate, must
//! have preimages.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lift::{preimage, LiftCertificate, Q2Point};
use crate::linalg::{lambda_min, Subspace, SymMat3, Vec6};
use crate::rng;
use crate::slice::sample_slice_points;

/// Failures kept verbatim in a report; the rest are only counted.
pub const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub forward_samples: usize,
    pub backward_samples: usize,
    pub seed: u64,
    pub forward_tol: f64,
    /// Looser than the forward tolerance: sampled slice points carry their
    /// own residual of up to 1e-8.
    pub backward_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { forward_samples: 10_000, backward_samples: 1_000, seed: 0, forward_tol: 1e-9, backward_tol: 1e-7 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub direction: Direction,
    pub index: usize,
    pub detail: String,
    pub z: Option<[f64; 6]>,
    pub matrix: Option<SymMat3>,
}

/// Residuals are relative to `max(1, ‖X‖)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub samples_forward: usize,
    pub samples_backward: usize,
    pub max_psd_violation: f64,
    pub max_subspace_residual: f64,
    pub max_preimage_residual: f64,
    pub failures: Vec<Failure>,
    pub failure_count: usize,
    pub passed: bool,
}

impl VerificationReport {
    fn empty() -> Self {
        Self {
            samples_forward: 0,
            samples_backward: 0,
            max_psd_violation: 0.0,
            max_subspace_residual: 0.0,
            max_preimage_residual: 0.0,
            failures: Vec::new(),
            failure_count: 0,
            passed: true,
        }
    }

    fn fail(&mut self, f: Failure) {
        self.failure_count += 1;
        self.passed = false;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(f);
        }
    }

    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.samples_forward += other.samples_forward;
        self.samples_backward += other.samples_backward;
        self.max_psd_violation = self.max_psd_violation.max(other.max_psd_violation);
        self.max_subspace_residual = self.max_subspace_residual.max(other.max_subspace_residual);
        self.max_preimage_residual = self.max_preimage_residual.max(other.max_preimage_residual);
        self.failure_count += other.failure_count;
        let room = MAX_RECORDED_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self.passed &= other.passed;
        self
    }

    pub fn summary(&self) -> String {
        let first = self.failures.first().map(|f| format!("; first: {}", f.detail)).unwrap_or_default();
        format!(
            "{} of {} forward / {} backward samples failed (psd {:e}, subspace {:e}, preimage {:e}){first}",
            self.failure_count,
            self.samples_forward,
            self.samples_backward,
            self.max_psd_violation,
            self.max_subspace_residual,
            self.max_preimage_residual
        )
    }
}

/// `index`-th point of the Q² sample stream; index 0 is the apex.
pub fn q2_sample(seed: u64, index: u64) -> Q2Point {
    if index == 0 {
        return Q2Point::default();
    }
    let mut rng = rng::stream(seed, index);
    let boundary = rng.random::<f64>() < 0.1;
    let mut triple = || {
        let (g1, g2, g3) = (rng::gaussian(&mut rng), rng::gaussian(&mut rng), rng::gaussian(&mut rng));
        let rho = g1.hypot(g2);
        [g1, g2, if boundary { rho } else { rho * (1.0 + g3.abs()) }]
    };
    let w = triple();
    let v = triple();
    Q2Point::new([w[0], w[1], w[2], v[0], v[1], v[2]])
}

pub fn sample_q2(seed: u64, count: usize) -> Vec<Q2Point> {
    (0..count as u64).map(|i| q2_sample(seed, i)).collect()
}

/// Attempts allowed per requested forward sample before giving up.
const ATTEMPTS_PER_SAMPLE: usize = 50;

pub fn verify_forward(cert: &LiftCertificate, l: &Subspace, count: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::empty();
    if !cert.is_finite() {
        report.fail(Failure {
            direction: Direction::Forward,
            index: 0,
            detail: "certificate has non-finite entries".into(),
            z: None,
            matrix: None,
        });
        return report;
    }
    let constraints = cert.constraint_space();
    let mut k = 0u64;
    while report.samples_forward < count && (k as usize) < ATTEMPTS_PER_SAMPLE * count.max(1) {
        let raw = Vec6(q2_sample(seed, k).z);
        k += 1;
        let z = raw - constraints.project(&raw);
        let point = Q2Point::new(z.0);
        if !point.in_cone(1e-12 * point.norm().max(1.0)) {
            continue;
        }
        let index = report.samples_forward;
        report.samples_forward += 1;
        let x = cert.apply(&z.0);
        let scale = x.frobenius_norm().max(1.0);
        let psd = (-lambda_min(&x)).max(0.0) / scale;
        let dist = l.distance(&x.svec()) / scale;
        report.max_psd_violation = report.max_psd_violation.max(psd);
        report.max_subspace_residual = report.max_subspace_residual.max(dist);
        if psd > tol || dist > tol {
            report.fail(Failure {
                direction: Direction::Forward,
                index,
                detail: format!("image leaves the slice: psd violation {psd:e}, distance to L {dist:e}"),
                z: Some(z.0),
                matrix: Some(x),
            });
        }
    }
    report
}

pub fn verify_backward(cert: &LiftCertificate, l: &Subspace, count: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::empty();
    let points = match sample_slice_points(l, count.max(1), seed) {
        Ok(p) => p,
        // the slice is {0}, which every certificate contains
        Err(Error::SamplingExhausted { .. }) => return report,
        Err(e) => {
            report.fail(Failure {
                direction: Direction::Backward,
                index: 0,
                detail: e.to_string(),
                z: None,
                matrix: None,
            });
            return report;
        }
    };
    for (index, p) in points.into_iter().take(count).enumerate() {
        report.samples_backward += 1;
        let a = p.matrix;
        match preimage(cert, &a, tol) {
            Ok(pre) => {
                let r = pre.residual / a.frobenius_norm().max(1.0);
                report.max_preimage_residual = report.max_preimage_residual.max(r);
            }
            Err(e) => report.fail(Failure {
                direction: Direction::Backward,
                index,
                detail: e.to_string(),
                z: None,
                matrix: Some(a),
            }),
        }
    }
    report
}

pub fn verify(cert: &LiftCertificate, l: &Subspace, opts: &VerifyOptions) -> VerificationReport {
    let fwd = verify_forward(cert, l, opts.forward_samples, opts.seed, opts.forward_tol);
    let bwd = verify_backward(cert, l, opts.backward_samples, opts.seed, opts.backward_tol);
    fwd.merge(bwd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::canonical_lift;

    fn eq_diag_slice() -> Subspace {
        Subspace::from_matrices(&[SymMat3::diag(1.0, -1.0, 0.0)]).complement()
    }

    #[test]
    fn q2_samples_are_in_the_cone() {
        let pts = sample_q2(5, 500);
        assert_eq!(pts[0], Q2Point::default());
        assert!(pts.iter().all(|p| p.cone_margin() >= 0.0));
        let on_boundary = pts.iter().filter(|p| p.cone_margin() == 0.0).count();
        assert!(on_boundary > 20);
        assert_eq!(pts, sample_q2(5, 500));
    }

    #[test]
    fn canonical_certificate_passes_both_ways() {
        let l = eq_diag_slice();
        let cert = canonical_lift();
        let f = verify_forward(&cert, &l, 2000, 0, 1e-9);
        assert!(f.passed, "{}", f.summary());
        assert_eq!(f.samples_forward, 2000);
        let b = verify_backward(&cert, &l, 200, 0, 1e-7);
        assert!(b.passed, "{}", b.summary());
    }

    #[test]
    fn sabotaged_certificate_fails_forward() {
        let mut cert = canonical_lift();
        // negate the v2 contribution to a13
        cert.g[4][4] = -cert.g[4][4];
        let r = verify_forward(&cert, &eq_diag_slice(), 2000, 0, 1e-9);
        assert!(!r.passed);
        assert!(r.max_psd_violation > 1e-3);
    }

    #[test]
    fn wrong_slice_fails_backward() {
        let l = Subspace::from_matrices(&[SymMat3::diag(1.0, 0.0, -1.0)]).complement();
        let r = verify_backward(&canonical_lift(), &l, 50, 0, 1e-7);
        assert!(!r.passed);
    }

    #[test]
    fn zero_certificate_on_zero_slice() {
        let l = Subspace::from_matrices(&[SymMat3::diag(1.0, -1.0, 0.0)]);
        let cert = crate::lift::LiftCertificate {
            e: (0..6).map(|k| Vec6::unit(k).0).collect(),
            ..crate::lift::LiftCertificate::from_map(
                |_| SymMat3::zero(),
                vec![],
                crate::lift::Provenance::FaceEmbedding,
                Some(crate::lift::Aux::Range(vec![])),
            )
        };
        let r = verify(&cert, &l, &VerifyOptions { forward_samples: 50, backward_samples: 5, ..Default::default() });
        assert!(r.passed);
    }

    #[test]
    fn reports_repeat_for_a_seed() {
        let l = eq_diag_slice();
        let opts = VerifyOptions { forward_samples: 300, backward_samples: 30, seed: 11, ..Default::default() };
        assert_eq!(verify(&canonical_lift(), &l, &opts), verify(&canonical_lift(), &l, &opts));
    }
}
