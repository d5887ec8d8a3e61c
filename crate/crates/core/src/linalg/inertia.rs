//! Inertia, congruence normal form and the PSD cone.

use serde::{Deserialize, Serialize};

use super::eigen::eigen_sym3;
use super::sym3::{Mat3, SymMat3};

/// Floor for every scale-relative threshold.
pub const ABS_FLOOR: f64 = 1e-14;

/// Default zero threshold for eigenvalues: `1e-9 · max(1, ‖A‖)`.
pub fn default_zero_tol(a: &SymMat3) -> f64 {
    (1e-9 * a.frobenius_norm().max(1.0)).max(ABS_FLOOR)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertiaCounts {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
    pub zero_tol: f64,
}

impl Inertia {
    pub fn counts(&self) -> InertiaCounts {
        InertiaCounts { n_plus: self.n_plus, n_minus: self.n_minus, n_zero: self.n_zero }
    }

    pub fn is_indefinite(&self) -> bool {
        self.n_plus > 0 && self.n_minus > 0
    }

    pub fn is_semidefinite(&self) -> bool {
        !self.is_indefinite()
    }

    pub fn is_singular(&self) -> bool {
        self.n_zero > 0
    }

    pub fn rank(&self) -> usize {
        self.n_plus + self.n_minus
    }
}

pub fn inertia(a: &SymMat3, zero_tol: f64) -> Inertia {
    let values = eigen_sym3(a).values;
    let n_plus = values.iter().filter(|&&l| l > zero_tol).count();
    let n_minus = values.iter().filter(|&&l| l < -zero_tol).count();
    Inertia { n_plus, n_minus, n_zero: 3 - n_plus - n_minus, zero_tol }
}

pub fn inertia_default(a: &SymMat3) -> Inertia {
    inertia(a, default_zero_tol(a))
}

/// `B = Mᵀ D M` with `M` regular and `D` diagonal over `{-1, 0, 1}`,
/// ordered as (+1 entries, -1 entries, 0 entries).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceFactor {
    pub m: Mat3,
    pub d: SymMat3,
}

impl CongruenceFactor {
    pub fn reconstruct(&self) -> SymMat3 {
        self.d.congruence_t(&self.m)
    }

    pub fn signature(&self) -> InertiaCounts {
        let d = [self.d.get(0, 0), self.d.get(1, 1), self.d.get(2, 2)];
        InertiaCounts {
            n_plus: d.iter().filter(|&&x| x > 0.0).count(),
            n_minus: d.iter().filter(|&&x| x < 0.0).count(),
            n_zero: d.iter().filter(|&&x| x == 0.0).count(),
        }
    }
}

pub fn congruence_factor(b: &SymMat3) -> CongruenceFactor {
    congruence_factor_with_tol(b, default_zero_tol(b))
}

/// Rows of `M` are `sqrt|λ| uᵀ` for nonzero eigenvalues and `uᵀ` for the
/// (numerically) zero ones.
pub fn congruence_factor_with_tol(b: &SymMat3, zero_tol: f64) -> CongruenceFactor {
    let e = eigen_sym3(b);
    let class = |l: f64| {
        if l > zero_tol {
            0
        } else if l < -zero_tol {
            1
        } else {
            2
        }
    };
    let mut order: Vec<usize> = (0..3).collect();
    // positives by descending value, negatives by ascending value, zeros last
    order.sort_by(|&i, &j| {
        let (li, lj) = (e.values[i], e.values[j]);
        class(li).cmp(&class(lj)).then(lj.abs().total_cmp(&li.abs()))
    });
    let mut rows = [[0.0; 3]; 3];
    let mut d = [0.0; 3];
    for (r, &k) in order.iter().enumerate() {
        let l = e.values[k];
        let u = e.vector(k);
        let (w, sign) = match class(l) {
            0 => (l.sqrt(), 1.0),
            1 => ((-l).sqrt(), -1.0),
            _ => (1.0, 0.0),
        };
        rows[r] = u.map(|x| w * x);
        d[r] = sign;
    }
    CongruenceFactor { m: Mat3(rows), d: SymMat3::diag(d[0], d[1], d[2]) }
}

pub fn is_psd(a: &SymMat3, tol: f64) -> bool {
    eigen_sym3(a).values[0] >= -tol
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
pub fn psd_project(a: &SymMat3) -> SymMat3 {
    let e = eigen_sym3(a);
    (0..3)
        .filter(|&k| e.values[k] > 0.0)
        .fold(SymMat3::zero(), |acc, k| acc + e.values[k] * SymMat3::outer(&e.vector(k)))
}
