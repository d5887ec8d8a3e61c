//! The canonical lift of `{A ⪰ 0 : a11 = a22}` and the preimage solver.
//!
//! Writing `A = [[t,a,b],[a,t,c],[b,c,s]]`, the slice is the set of sums
//! `P(x) + P'(y)` of two rotated-cone points
//! `x = ((b+c)/2, (t+a)/2, u/2)`, `y = ((b−c)/2, (t−a)/2, s − u/2)` with
//! `r2 r3 ≥ r1²`. A rotated triple maps to a Lorentz one by
//! `w2 = r1, w3 = (r2+r3)/2, w1 = (r3−r2)/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMat3;

use super::{Aux, LiftCertificate, Provenance, Q2Point};

/// `G₀`: a11 = a22 = (w3−w1)+(v3−v1), a12 = (w3−w1)−(v3−v1),
/// a13 = w2+v2, a23 = w2−v2, a33 = (w3+w1)+(v3+v1).
pub fn canonical_map(z: &[f64; 6]) -> SymMat3 {
    let [w1, w2, w3, v1, v2, v3] = *z;
    let (p, q) = (w3 - w1, v3 - v1);
    SymMat3::new(p + q, p + q, (w3 + w1) + (v3 + v1), p - q, w2 + v2, w2 - v2)
}

pub fn canonical_lift() -> LiftCertificate {
    LiftCertificate::from_map(canonical_map, Vec::new(), Provenance::Canonical, None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preimage {
    pub point: Q2Point,
    /// `‖G z − svec A‖`.
    pub residual: f64,
    pub constraint_residual: f64,
    pub cone_margin: f64,
    /// Admissible range of the free parameter (formula path only).
    pub interval: Option<[f64; 2]>,
}

/// Finds `z ∈ Q²` with `E z = 0` and `G z = svec A`.
///
/// The point is computed from the provenance-specific formula and then
/// checked against the certificate's own `G` and `E`, so a certificate that
/// does not match its provenance is reported as `NotInSlice`.
pub fn preimage(cert: &LiftCertificate, a: &SymMat3, tol: f64) -> Result<Preimage> {
    if !a.is_finite() || !(tol >= 0.0) {
        return Err(Error::InvalidInput("non-finite matrix or tolerance".into()));
    }
    let (z, interval) = match (cert.provenance, &cert.aux) {
        (Provenance::Canonical, _) => formula(a, tol)?,
        (Provenance::CongruenceConjugated | Provenance::SlicedCongruence, Some(Aux::Congruence(m))) => {
            formula(&a.congruence(m), tol)?
        }
        (Provenance::FaceEmbedding, Some(Aux::Range(v))) => (face(a, v)?, None),
        (p, _) => {
            return Err(Error::InvalidInput(format!(
                "{} certificate lacks the auxiliary data its preimage needs",
                p.as_str()
            )))
        }
    };
    let point = Q2Point::new(z);
    let residual = (cert.apply_svec(&z) - a.svec()).norm();
    let constraint_residual = cert.constraint_residual(&z);
    let cone_margin = point.cone_margin();
    let scale = a.frobenius_norm().max(1.0);
    let zscale = point.norm().max(1.0);
    if residual > tol * scale {
        return Err(Error::NotInSlice(format!("reconstruction residual {residual:e}")));
    }
    if constraint_residual > tol * zscale {
        return Err(Error::NotInSlice(format!("constraint residual {constraint_residual:e}")));
    }
    if cone_margin < -tol * zscale {
        return Err(Error::NotInSlice(format!("cone margin {cone_margin:e}")));
    }
    Ok(Preimage { point, residual, constraint_residual, cone_margin, interval })
}

fn formula(x: &SymMat3, tol: f64) -> Result<([f64; 6], Option<[f64; 2]>)> {
    let sx = x.frobenius_norm().max(1.0);
    let eps = tol * sx;
    let (x11, x22) = (x.get(0, 0), x.get(1, 1));
    if (x11 - x22).abs() > eps {
        return Err(Error::NotInSlice(format!("unequal leading diagonal entries {x11} and {x22}")));
    }
    let t = 0.5 * (x11 + x22);
    let (a, b, c, s) = (x.get(0, 1), x.get(0, 2), x.get(1, 2), x.get(2, 2));
    let (p, q) = (t + a, t - a);
    if p < -eps || q < -eps {
        return Err(Error::NotInSlice(format!("negative pivot t±a = ({p:e}, {q:e})")));
    }
    // A pivot below eps is clamped there instead of deciding membership by
    // a cutoff on b ± c: whatever point results is judged by the checks
    // against the certificate and the cone.
    let (pc, qc) = (p.max(eps), q.max(eps));
    let lo = if pc > 0.0 { (b + c) * (b + c) / pc } else { 0.0 };
    let hi = if qc > 0.0 { 2.0 * s - (b - c) * (b - c) / qc } else { 2.0 * s };
    let u = if hi >= lo || pc + qc <= 0.0 {
        0.5 * (lo + hi)
    } else {
        // inverted by rounding: the x-margin deficit scales with p(lo − u)
        // and the y-margin deficit with q(u − hi); balance the two
        (pc * lo + qc * hi) / (pc + qc)
    };
    let r = [(b + c) / 2.0, p / 2.0, u / 2.0];
    let r2 = [(b - c) / 2.0, q / 2.0, s - u / 2.0];
    let w = lorentz(r);
    let v = lorentz(r2);
    let z = [w[0], w[1], w[2], v[0], v[1], v[2]];
    // near-degenerate pivots can invert the interval by far more than tol
    // while the point still lies in the cone to tolerance
    if hi < lo - eps {
        let point = Q2Point::new(z);
        if point.cone_margin() < -tol * point.norm().max(1.0) {
            return Err(Error::EmptyInterval { lo, hi });
        }
    }
    Ok((z, Some([lo, hi])))
}

/// Rotated `(r1, r2, r3)` to Lorentz `(w1, w2, w3)`.
fn lorentz(r: [f64; 3]) -> [f64; 3] {
    [(r[2] - r[1]) / 2.0, r[0], (r[1] + r[2]) / 2.0]
}

fn face(a: &SymMat3, range: &[[f64; 3]]) -> Result<[f64; 6]> {
    let mut z = [0.0; 6];
    match range {
        [] => {}
        [u] => z[2] = a.quad_form(u),
        [v1, v2] => {
            let y11 = a.quad_form(v1);
            let y22 = a.quad_form(v2);
            let y12 = 0.5 * (a.quad_form(&add(v1, v2)) - y11 - y22);
            z[0] = 0.5 * (y22 - y11);
            z[1] = y12;
            z[2] = 0.5 * (y11 + y22);
        }
        _ => return Err(Error::RankTooLarge(range.len())),
    }
    Ok(z)
}

fn add(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| a[i] + b[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigen_sym3, is_psd};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn evaluations_of_the_canonical_map() {
        assert_eq!(canonical_map(&[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]), SymMat3::identity().scale(2.0));
        let x = canonical_map(&[0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(x, SymMat3::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0));
        assert!(eigen_sym3(&x).values[0].abs() < 1e-15);
        assert_eq!(canonical_map(&[1.0, 0.0, 1.0, 0.0, 0.0, 0.0]), SymMat3::diag(0.0, 0.0, 2.0));
    }

    #[test]
    fn preimage_of_identity_is_half_of_both_axes() {
        // G₀ sends (0,0,1,0,0,1) to 2I, so I itself comes from half of it
        let p = preimage(&canonical_lift(), &SymMat3::identity(), 1e-12).unwrap();
        assert_eq!(p.interval, Some([0.0, 2.0]));
        assert!(close(&p.point.z, &[0.0, 0.0, 0.5, 0.0, 0.0, 0.5], 1e-15));
        assert!(p.residual < 1e-12);
    }

    #[test]
    fn preimage_of_identity_plus_ones() {
        let a = SymMat3::new(2.0, 2.0, 2.0, 1.0, 1.0, 1.0);
        let p = preimage(&canonical_lift(), &a, 1e-12).unwrap();
        let [lo, hi] = p.interval.unwrap();
        assert!((lo - 4.0 / 3.0).abs() < 1e-15 && (hi - 4.0).abs() < 1e-15);
        assert!(p.residual <= 1e-12);
        assert!(p.cone_margin >= 0.0);
    }

    #[test]
    fn degenerate_branch_gives_zero_second_factor() {
        let a = SymMat3::new(1.0, 1.0, 0.0, 1.0, 0.0, 0.0);
        let p = preimage(&canonical_lift(), &a, 1e-12).unwrap();
        assert_eq!(p.interval, Some([0.0, 0.0]));
        assert!(close(&p.point.v(), &[0.0, 0.0, 0.0], 1e-15));
        assert!(p.residual < 1e-15);
    }

    #[test]
    fn tiny_pivot_with_large_off_diagonal_is_still_recovered() {
        // on the boundary with v1 dominant: t - a is 2.5e-7 while b - c is
        // 1e-3, above the square root of the tolerance
        let v2 = 5e-4;
        let z = [0.0, 0.0, 1.0, 1.0, v2, 1.0_f64.hypot(v2)];
        let a = canonical_map(&z);
        let pre = preimage(&canonical_lift(), &a, 1e-7).unwrap();
        assert!(pre.residual <= 1e-12);
        assert!(pre.cone_margin >= -1e-7);
    }

    #[test]
    fn matrices_outside_the_slice_are_refused() {
        let cert = canonical_lift();
        assert!(matches!(preimage(&cert, &SymMat3::diag(1.0, 2.0, 1.0), 1e-9), Err(Error::NotInSlice(_))));
        // a11 = a22 but not PSD: the third row cannot be absorbed
        let a = SymMat3::new(1.0, 1.0, -1.0, 0.0, 0.0, 0.0);
        assert!(!is_psd(&a, 0.0));
        assert!(matches!(preimage(&cert, &a, 1e-9), Err(Error::EmptyInterval { .. })));
    }

    #[test]
    fn lorentz_conversion_preserves_the_cone() {
        // r2 r3 = r1² on the rotated boundary maps to w3 = ‖(w1, w2)‖
        let w = lorentz([2.0, 1.0, 4.0]);
        assert!((w[2] - w[0].hypot(w[1])).abs() < 1e-15);
    }
}
