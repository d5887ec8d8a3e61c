//! Points of `S₊³ ∩ L` by alternating projections from Gaussian starts.
//!
//! The sampler does not look at any certificate; it is the independent
//! membership oracle behind backward verification. When the two sets meet
//! tangentially plain alternation only converges sublinearly; a stalled run
//! continues between `L` and the minimal face of the cone containing the
//! slice. Accepted points are finally pushed onto the cone along the
//! maximal-rank element, so they are members of the slice up to rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigen_sym3, psd_project, Subspace, SymEigen, SymMat3};
use crate::rng;

use super::facial::{max_rank_element, MaxRankWitness};

/// Restarts per sample when the facial oracle reports the slice is `{0}`;
/// a few are still tried so that a wrong report cannot hide points.
const ZERO_SLICE_RESTARTS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerOptions {
    pub max_iters: usize,
    pub restarts_per_sample: usize,
    /// Successive-iterate distance (relative to the start) ending a run.
    pub step_tol: f64,
    /// Required PSD violation and distance to `L` of accepted points.
    pub accept_tol: f64,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self { max_iters: 10_000, restarts_per_sample: 50, step_tol: 1e-12, accept_tol: 1e-8 }
    }
}

/// A unit-norm point of the slice with its achieved residuals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlicePoint {
    pub matrix: SymMat3,
    pub psd_violation: f64,
    pub subspace_residual: f64,
}

pub fn sample_slice_points(l: &Subspace, count: usize, seed: u64) -> Result<Vec<SlicePoint>> {
    sample_slice_points_with(l, count, seed, &SamplerOptions::default())
}

pub fn sample_slice_points_with(
    l: &Subspace,
    count: usize,
    seed: u64,
    opts: &SamplerOptions,
) -> Result<Vec<SlicePoint>> {
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be at least 1".into()));
    }
    let witness = max_rank_element(l)?;
    let per_sample =
        if witness.rank == 0 { opts.restarts_per_sample.min(ZERO_SLICE_RESTARTS) } else { opts.restarts_per_sample };
    let mut points = Vec::with_capacity(count);
    let mut restarts = 0;
    let mut in_face = false;
    for i in 0..count {
        let mut rng = rng::stream(seed, i as u64);
        for _ in 0..per_sample {
            restarts += 1;
            let start = rng::gaussian_sym(&mut rng);
            if let Some(p) = sample_from(l, &start, opts, &witness, &mut in_face) {
                points.push(p);
                break;
            }
        }
        // a slice that collapses every start of the first sample is {0}
        if points.is_empty() {
            return Err(Error::SamplingExhausted { restarts });
        }
    }
    Ok(points)
}

fn sample_from(
    l: &Subspace,
    start: &SymMat3,
    opts: &SamplerOptions,
    witness: &MaxRankWitness,
    in_face: &mut bool,
) -> Option<SlicePoint> {
    let scale = start.frobenius_norm();
    let range = &witness.range_basis;
    if *in_face {
        let x = alternate(l, start, scale, opts, |y| face_project(y, range))?;
        return accept(l, &x, witness, opts);
    }
    let x = alternate(l, start, scale, opts, psd_project)?;
    if let Some(p) = accept(l, &x, witness, opts) {
        return Some(p);
    }
    // Stalled: the slice touches the cone tangentially. Continue inside the
    // minimal face, where the two sets meet transversally.
    if witness.rank == 0 || witness.rank == 3 {
        return None;
    }
    *in_face = true;
    let x = alternate(l, &x, x.frobenius_norm(), opts, |y| face_project(y, range))?;
    accept(l, &x, witness, opts)
}

/// Alternates `cone` and the orthogonal projection onto `L`, ending on `L`.
/// Returns `None` when the iterates collapse to the apex.
fn alternate(
    l: &Subspace,
    start: &SymMat3,
    scale: f64,
    opts: &SamplerOptions,
    cone: impl Fn(&SymMat3) -> SymMat3,
) -> Option<SymMat3> {
    let collapse = 1e-8 * scale;
    let mut x = l.project_matrix(start);
    for _ in 0..opts.max_iters {
        let next = l.project_matrix(&cone(&x));
        let step = (next - x).frobenius_norm();
        x = next;
        if x.frobenius_norm() < collapse {
            return None;
        }
        if step <= opts.step_tol * scale {
            break;
        }
    }
    (x.frobenius_norm() >= collapse).then_some(x)
}

fn accept(l: &Subspace, x: &SymMat3, witness: &MaxRankWitness, opts: &SamplerOptions) -> Option<SlicePoint> {
    let n = x.frobenius_norm();
    if !(n > 0.0) {
        return None;
    }
    let y = onto_cone(&l.project_matrix(&x.scale(1.0 / n)), witness);
    let unit = y.scale(1.0 / y.frobenius_norm());
    let psd_violation = (-eigen_sym3(&unit).values[0]).max(0.0);
    let subspace_residual = l.distance(&unit.svec());
    (psd_violation <= opts.accept_tol && subspace_residual <= opts.accept_tol).then_some(SlicePoint {
        matrix: unit,
        psd_violation,
        subspace_residual,
    })
}

/// Adds the least multiple of the witness that lifts the smallest
/// eigenvalue of `x`, compressed to the witness range, to zero.
///
/// Alternation stops up to 1e-8 outside the cone, and near a low-rank
/// boundary point that much is enough to put a point outside the slice.
fn onto_cone(x: &SymMat3, witness: &MaxRankWitness) -> SymMat3 {
    let v = &witness.range_basis;
    if v.is_empty() {
        return *x;
    }
    let least = |a: &SymMat3| {
        let m = a.as_mat3();
        let c: Vec<f64> =
            v.iter().flat_map(|vi| v.iter().map(move |vj| (0..3).map(|k| vi[k] * m.mul_vec(vj)[k]).sum())).collect();
        SymEigen::new(v.len(), &c).values[0]
    };
    let (xmin, wmin) = (least(x), least(&witness.a_star));
    if xmin >= 0.0 || !(wmin > 0.0) {
        return *x;
    }
    *x + witness.a_star.scale(-xmin / wmin)
}

/// Nearest PSD matrix whose range lies in `span(range)`.
fn face_project(y: &SymMat3, range: &[[f64; 3]]) -> SymMat3 {
    let p = range.iter().fold(SymMat3::zero(), |acc, v| acc + SymMat3::outer(v));
    psd_project(&y.congruence(&p.as_mat3()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_psd;

    #[test]
    fn identity_ray_samples_are_multiples_of_identity() {
        let l = Subspace::from_matrices(&[SymMat3::identity()]);
        let pts = sample_slice_points(&l, 20, 1).unwrap();
        assert_eq!(pts.len(), 20);
        let unit = SymMat3::identity().scale(1.0 / 3.0_f64.sqrt());
        for p in pts {
            assert!((p.matrix - unit).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn equal_diagonal_samples_satisfy_constraints() {
        let l = Subspace::from_matrices(&[SymMat3::diag(1.0, -1.0, 0.0)]).complement();
        let pts = sample_slice_points(&l, 50, 7).unwrap();
        assert_eq!(pts.len(), 50);
        for p in pts {
            let x = p.matrix;
            assert!((x.get(0, 0) - x.get(1, 1)).abs() < 1e-12);
            assert!(is_psd(&x, 1e-8));
            assert!(p.psd_violation <= 1e-15);
        }
    }

    #[test]
    fn trivial_slice_is_exhausted() {
        let l = Subspace::from_matrices(&[SymMat3::diag(1.0, -1.0, 0.0)]);
        assert!(matches!(sample_slice_points(&l, 5, 0), Err(Error::SamplingExhausted { .. })));
    }

    #[test]
    fn tangent_slice_is_sampled_inside_its_face() {
        // {a11 = 0}: the slice is the face of matrices with zero first row
        let l = Subspace::from_matrices(&[SymMat3::unit(0, 0)]).complement();
        let pts = sample_slice_points(&l, 10, 3).unwrap();
        assert!(!pts.is_empty());
        for p in pts {
            assert!(p.matrix.get(0, 1).abs() < 1e-6 && p.matrix.get(0, 2).abs() < 1e-6);
            assert!(p.psd_violation <= 1e-8);
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let l = Subspace::from_matrices(&[SymMat3::identity(), SymMat3::unit(0, 1)]);
        assert_eq!(sample_slice_points(&l, 5, 9).unwrap(), sample_slice_points(&l, 5, 9).unwrap());
    }
}
