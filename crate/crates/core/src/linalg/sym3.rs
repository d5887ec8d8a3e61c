//! Fixed-shape types for the space of real symmetric 3x3 matrices.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Storage order of the six independent entries.
const PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

/// A real symmetric 3x3 matrix, stored as `(a11, a22, a33, a12, a13, a23)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymMat3 {
    entries: [f64; 6],
}

impl SymMat3 {
    pub const fn new(a11: f64, a22: f64, a33: f64, a12: f64, a13: f64, a23: f64) -> Self {
        Self { entries: [a11, a22, a33, a12, a13, a23] }
    }

    pub const fn zero() -> Self {
        Self { entries: [0.0; 6] }
    }

    pub const fn identity() -> Self {
        Self::diag(1.0, 1.0, 1.0)
    }

    pub const fn diag(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, b, c, 0.0, 0.0, 0.0)
    }

    /// The symmetric unit `E_ij + E_ji` (or `E_ii` on the diagonal).
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::zero();
        m.set(i, j, 1.0);
        m
    }

    /// Builds a matrix from a full row-major array.
    ///
    /// The array must be symmetric to within `1e-12` times its largest
    /// absolute entry.
    pub fn from_rows(rows: &[[f64; 3]; 3]) -> Result<Self> {
        let scale = rows.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
        Self::from_rows_with_tol(rows, 1e-12 * scale)
    }

    pub fn from_rows_with_tol(rows: &[[f64; 3]; 3], sym_tol: f64) -> Result<Self> {
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let mut asym = 0.0_f64;
        for i in 0..3 {
            for j in (i + 1)..3 {
                asym = asym.max((rows[i][j] - rows[j][i]).abs());
            }
        }
        if asym > sym_tol {
            return Err(Error::Asymmetric { deviation: asym, tolerance: sym_tol });
        }
        let avg = |i: usize, j: usize| 0.5 * (rows[i][j] + rows[j][i]);
        Ok(Self::new(rows[0][0], rows[1][1], rows[2][2], avg(0, 1), avg(0, 2), avg(1, 2)))
    }

    pub fn to_rows(&self) -> [[f64; 3]; 3] {
        let [a11, a22, a33, a12, a13, a23] = self.entries;
        [[a11, a12, a13], [a12, a22, a23], [a13, a23, a33]]
    }

    pub fn entries(&self) -> [f64; 6] {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[slot(i, j)] = value;
    }

    pub fn trace(&self) -> f64 {
        self.entries[0] + self.entries[1] + self.entries[2]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.svec().norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn det(&self) -> f64 {
        let [a, d, f, b, c, e] = self.entries;
        a * (d * f - e * e) - b * (b * f - c * e) + c * (b * e - c * d)
    }

    /// Principal 2x2 minor on the index pair `(i, j)`.
    pub fn principal_minor(&self, i: usize, j: usize) -> f64 {
        self.get(i, i) * self.get(j, j) - self.get(i, j).powi(2)
    }

    /// Sum of the three principal 2x2 minors (second elementary symmetric
    /// function of the spectrum).
    pub fn principal_minor_sum(&self) -> f64 {
        self.principal_minor(0, 1) + self.principal_minor(0, 2) + self.principal_minor(1, 2)
    }

    /// Trace inner product `tr(AB)`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.svec().dot(&other.svec())
    }

    /// Symmetric vectorization with `sqrt(2)` on the off-diagonal entries.
    pub fn svec(&self) -> Vec6 {
        let e = &self.entries;
        Vec6([e[0], e[1], e[2], SQRT2 * e[3], SQRT2 * e[4], SQRT2 * e[5]])
    }

    pub fn smat(v: &Vec6) -> Self {
        let x = &v.0;
        Self::new(x[0], x[1], x[2], x[3] / SQRT2, x[4] / SQRT2, x[5] / SQRT2)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { entries: self.entries.map(|v| s * v) }
    }

    /// Congruence `M A Mᵀ`.
    pub fn congruence(&self, m: &Mat3) -> Self {
        let p = m.mul(&Mat3(self.to_rows())).mul(&m.transpose());
        Self::symmetrize(&p)
    }

    /// Congruence `Mᵀ A M`.
    pub fn congruence_t(&self, m: &Mat3) -> Self {
        self.congruence(&m.transpose())
    }

    /// Symmetric part of a general matrix.
    pub fn symmetrize(m: &Mat3) -> Self {
        let a = &m.0;
        Self::new(
            a[0][0],
            a[1][1],
            a[2][2],
            0.5 * (a[0][1] + a[1][0]),
            0.5 * (a[0][2] + a[2][0]),
            0.5 * (a[1][2] + a[2][1]),
        )
    }

    /// Rank-one matrix `u uᵀ`.
    pub fn outer(u: &[f64; 3]) -> Self {
        Self::new(u[0] * u[0], u[1] * u[1], u[2] * u[2], u[0] * u[1], u[0] * u[2], u[1] * u[2])
    }

    pub fn quad_form(&self, u: &[f64; 3]) -> f64 {
        let r = self.to_rows();
        (0..3).map(|i| (0..3).map(|j| u[i] * r[i][j] * u[j]).sum::<f64>()).sum()
    }

    pub fn as_mat3(&self) -> Mat3 {
        Mat3(self.to_rows())
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }
}

fn slot(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    PAIRS.iter().position(|&p| p == (i, j)).unwrap_or_else(|| panic!("index ({i}, {j}) out of range for a 3x3 matrix"))
}

impl Add for SymMat3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut e = self.entries;
        e.iter_mut().zip(rhs.entries).for_each(|(a, b)| *a += b);
        Self { entries: e }
    }
}

impl Sub for SymMat3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for SymMat3 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<SymMat3> for f64 {
    type Output = SymMat3;
    fn mul(self, rhs: SymMat3) -> SymMat3 {
        rhs.scale(self)
    }
}

impl fmt::Display for SymMat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rows();
        write!(f, "[{:?}, {:?}, {:?}]", r[0], r[1], r[2])
    }
}

/// Coordinates of a symmetric matrix (or any vector of R^6).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec6(pub [f64; 6]);

impl Vec6 {
    pub const fn zero() -> Self {
        Self([0.0; 6])
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = 1.0;
        v
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|v| s * v))
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        let mut out = self.0;
        out.iter_mut().zip(&other.0).for_each(|(a, b)| *a += s * b);
        Self(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Add for Vec6 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.axpy(1.0, &rhs)
    }
}

impl Sub for Vec6 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.axpy(-1.0, &rhs)
    }
}

impl Index<usize> for Vec6 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A general real 3x3 matrix in row-major order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const fn identity() -> Self {
        Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        let mut m = Self([[0.0; 3]; 3]);
        (0..3).for_each(|i| m.0[i][i] = d[i]);
        m
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Self(rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: [[f64; 3]; 3]) -> Self {
        Self(cols).transpose()
    }

    pub fn col(&self, j: usize) -> [f64; 3] {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn row(&self, i: usize) -> [f64; 3] {
        self.0[i]
    }

    pub fn transpose(&self) -> Self {
        let a = &self.0;
        Self(std::array::from_fn(|i| std::array::from_fn(|j| a[j][i])))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self(std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum())))
    }

    pub fn mul_vec(&self, v: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| (0..3).map(|k| self.0[i][k] * v[k]).sum())
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Inverse by the adjugate; `None` when the determinant is zero or not finite.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let a = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        Some(Self(adj.map(|r| r.map(|v| v / d))))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}
