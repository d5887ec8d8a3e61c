//! Linear subspaces of R^6 (in particular of S^3 in svec coordinates).

use serde::{Deserialize, Serialize};

use super::sym3::{SymMat3, Vec6};

/// Relative residual below which a Gram–Schmidt candidate counts as dependent.
pub const RANK_TOL: f64 = 1e-10;

/// A subspace held as an orthonormal basis.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Subspace {
    basis: Vec<Vec6>,
}

impl Subspace {
    pub fn zero() -> Self {
        Self { basis: Vec::new() }
    }

    pub fn full() -> Self {
        Self { basis: (0..6).map(Vec6::unit).collect() }
    }

    /// Orthonormal basis of the span of `vectors`, Gram–Schmidt with column
    /// pivoting. Candidates with residual at most `RANK_TOL` times the
    /// largest input norm are treated as dependent.
    pub fn span(vectors: &[Vec6]) -> Self {
        let scale = vectors.iter().map(Vec6::norm).fold(0.0, f64::max);
        Self::span_with_tol(vectors, (RANK_TOL * scale).max(1e-14))
    }

    pub fn span_with_tol(vectors: &[Vec6], abs_tol: f64) -> Self {
        let mut work: Vec<Vec6> = vectors.to_vec();
        let mut basis: Vec<Vec6> = Vec::new();
        while basis.len() < 6 && !work.is_empty() {
            let (idx, best) = work
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty");
            if !(best > abs_tol) {
                break;
            }
            let q = work.swap_remove(idx).scale(1.0 / best);
            let q = reorthogonalize(&q, &basis);
            basis.push(q);
            for w in work.iter_mut() {
                // two passes keep the basis orthonormal to working precision
                for _ in 0..2 {
                    *w = w.axpy(-q.dot(w), &q);
                }
            }
        }
        Self { basis }
    }

    pub fn from_matrices(mats: &[SymMat3]) -> Self {
        Self::span(&mats.iter().map(SymMat3::svec).collect::<Vec<_>>())
    }

    /// Trusts the caller that `basis` is orthonormal.
    pub fn from_orthonormal(basis: Vec<Vec6>) -> Self {
        Self { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec6] {
        &self.basis
    }

    pub fn basis_matrices(&self) -> Vec<SymMat3> {
        self.basis.iter().map(SymMat3::smat).collect()
    }

    pub fn project(&self, v: &Vec6) -> Vec6 {
        self.basis.iter().fold(Vec6::zero(), |acc, b| acc.axpy(b.dot(v), b))
    }

    pub fn project_matrix(&self, a: &SymMat3) -> SymMat3 {
        SymMat3::smat(&self.project(&a.svec()))
    }

    /// Euclidean distance from `v` to the subspace.
    pub fn distance(&self, v: &Vec6) -> f64 {
        (*v - self.project(v)).norm()
    }

    pub fn coordinates(&self, v: &Vec6) -> Vec<f64> {
        self.basis.iter().map(|b| b.dot(v)).collect()
    }

    pub fn combine(&self, coefs: &[f64]) -> Vec6 {
        self.basis.iter().zip(coefs).fold(Vec6::zero(), |acc, (b, c)| acc.axpy(*c, b))
    }

    /// Orthonormal basis of the orthogonal complement; `dim + complement.dim = 6`.
    pub fn complement(&self) -> Self {
        let mut basis = self.basis.clone();
        let mut cand: Vec<Vec6> = (0..6).map(|i| residual(&Vec6::unit(i), &basis)).collect();
        let need = 6 - self.dim();
        let mut out = Vec::with_capacity(need);
        for _ in 0..need {
            let (idx, best) = cand
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("candidates remain");
            let q = reorthogonalize(&cand.swap_remove(idx).scale(1.0 / best), &basis);
            basis.push(q);
            out.push(q);
            for c in cand.iter_mut() {
                *c = residual(c, &basis);
            }
        }
        Self { basis: out }
    }

    /// Intersection, computed as the complement of the sum of complements.
    pub fn intersect(&self, other: &Self) -> Self {
        let mut gens = self.complement().basis;
        gens.extend(other.complement().basis);
        Self::span(&gens).complement()
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut gens = self.basis.clone();
        gens.extend_from_slice(&other.basis);
        Self::span(&gens)
    }

    /// Largest distance of a basis vector of `self` to `other`.
    pub fn containment_residual(&self, other: &Self) -> f64 {
        self.basis.iter().map(|b| other.distance(b)).fold(0.0, f64::max)
    }

    /// Largest deviation of the basis Gram matrix from the identity.
    pub fn gram_error(&self) -> f64 {
        let mut err = 0.0_f64;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                err = err.max((a.dot(b) - want).abs());
            }
        }
        err
    }
}

fn residual(v: &Vec6, basis: &[Vec6]) -> Vec6 {
    let mut r = *v;
    for _ in 0..2 {
        for q in basis {
            r = r.axpy(-q.dot(&r), q);
        }
    }
    r
}

fn reorthogonalize(q: &Vec6, basis: &[Vec6]) -> Vec6 {
    let r = residual(q, basis);
    r.scale(1.0 / r.norm())
}
