//! Seeded randomness. Every sample index owns its own ChaCha stream so
//! results do not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Mat3, SymMat3, Vec6};

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_vec6<R: Rng + ?Sized>(rng: &mut R) -> Vec6 {
    Vec6(std::array::from_fn(|_| gaussian(rng)))
}

/// Symmetric matrix with i.i.d. standard normal svec coordinates.
pub fn gaussian_sym<R: Rng + ?Sized>(rng: &mut R) -> SymMat3 {
    SymMat3::smat(&gaussian_vec6(rng))
}

pub fn gaussian_mat3<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    Mat3(std::array::from_fn(|_| std::array::from_fn(|_| gaussian(rng))))
}

/// Random positive definite matrix `R Rᵀ + I/10`.
pub fn random_pd<R: Rng + ?Sized>(rng: &mut R) -> SymMat3 {
    let r = gaussian_mat3(rng);
    SymMat3::symmetrize(&r.mul(&r.transpose())) + SymMat3::identity().scale(0.1)
}

/// Random rotation (Gram–Schmidt of a Gaussian matrix, determinant +1).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    loop {
        let g = gaussian_mat3(rng);
        let mut cols: Vec<[f64; 3]> = Vec::new();
        for j in 0..3 {
            let mut c = g.col(j);
            for q in &cols {
                let d: f64 = (0..3).map(|i| q[i] * c[i]).sum();
                (0..3).for_each(|i| c[i] -= d * q[i]);
            }
            let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-6 {
                break;
            }
            cols.push(c.map(|x| x / n));
        }
        if cols.len() == 3 {
            let mut q = Mat3::from_cols([cols[0], cols[1], cols[2]]);
            if q.det() < 0.0 {
                q = Mat3::from_cols([cols[0], cols[1], cols[2].map(|x| -x)]);
            }
            return q;
        }
    }
}

/// Random regular matrix with condition number kept moderate.
pub fn random_regular<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    loop {
        let m = gaussian_mat3(rng);
        if let Some(inv) = m.inverse() {
            if m.frobenius_norm() * inv.frobenius_norm() < 50.0 {
                return m;
            }
        }
    }
}

/// `Rᵀ Diag(l1, l2, 0) R` with `R` random regular.
pub fn forced_singular<R: Rng + ?Sized>(rng: &mut R, l1: f64, l2: f64) -> SymMat3 {
    let r = random_regular(rng);
    SymMat3::diag(l1, l2, 0.0).congruence_t(&r)
}
