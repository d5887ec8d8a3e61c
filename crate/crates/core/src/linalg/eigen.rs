//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use serde::{Deserialize, Serialize};

use super::sym3::{Mat3, SymMat3};

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a small symmetric matrix, eigenvalues ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Eigenvectors, `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl SymEigen {
    /// Decomposes the `n x n` symmetric matrix stored row-major in `a`.
    /// Only the upper triangle is assumed symmetric with the lower one.
    pub fn new(n: usize, a: &[f64]) -> Self {
        assert_eq!(a.len(), n * n, "expected an {n}x{n} matrix");
        let mut a = a.to_vec();
        let mut v = vec![0.0; n * n];
        (0..n).for_each(|i| v[i * n + i] = 1.0);

        let total: f64 = a.iter().map(|x| x * x).sum();
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j].powi(2))
                .sum();
            if off <= total * 1e-34 || off == 0.0 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k * n + p], a[k * n + q]);
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    for k in 0..n {
                        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
        let values = order.iter().map(|&i| a[i * n + i]).collect();
        let vectors = order
            .iter()
            .map(|&j| {
                let mut col: Vec<f64> = (0..n).map(|k| v[k * n + j]).collect();
                // sign convention: first clearly nonzero component positive
                if let Some(x) = col.iter().find(|x| x.abs() > 1e-12) {
                    if *x < 0.0 {
                        col.iter_mut().for_each(|c| *c = -*c);
                    }
                }
                col
            })
            .collect();
        Self { values, vectors }
    }
}

/// Eigenvalues `λ1 ≤ λ2 ≤ λ3` and matching orthonormal eigenvectors of a
/// symmetric 3x3 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenTriple {
    pub values: [f64; 3],
    /// Eigenvectors stored as columns.
    pub vectors: Mat3,
}

impl EigenTriple {
    pub fn vector(&self, k: usize) -> [f64; 3] {
        self.vectors.col(k)
    }

    pub fn lambda_min(&self) -> f64 {
        self.values[0]
    }
}

pub fn eigen_sym3(a: &SymMat3) -> EigenTriple {
    let rows = a.to_rows();
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let e = SymEigen::new(3, &flat);
    let cols: [[f64; 3]; 3] = std::array::from_fn(|k| std::array::from_fn(|i| e.vectors[k][i]));
    EigenTriple { values: [e.values[0], e.values[1], e.values[2]], vectors: Mat3::from_cols(cols) }
}

pub fn lambda_min(a: &SymMat3) -> f64 {
    eigen_sym3(a).values[0]
}

/// Solves `H x = g` for a symmetric `H` through its eigen-decomposition,
/// dropping eigen-directions with `|λ| ≤ rcond · max|λ|`.
pub fn solve_symmetric(n: usize, h: &[f64], g: &[f64], rcond: f64) -> Vec<f64> {
    let e = SymEigen::new(n, h);
    let scale = e.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut x = vec![0.0; n];
    for (lam, u) in e.values.iter().zip(&e.vectors) {
        if lam.abs() <= rcond * scale || *lam == 0.0 {
            continue;
        }
        let coef = u.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() / lam;
        x.iter_mut().zip(u).for_each(|(xi, ui)| *xi += coef * ui);
    }
    x
}
