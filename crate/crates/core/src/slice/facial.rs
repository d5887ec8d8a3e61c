//! Maximal-rank elements of `S₊³ ∩ L` by multistart supergradient ascent on
//! `λ_min` over the trace-one section, a log-barrier polish and recursive
//! restriction to the detected range.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve_symmetric, Subspace, SymEigen, SymMat3, Vec6};
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub struct FacialOptions {
    pub restarts: usize,
    pub ascent_iters: usize,
    /// Radius of the search ball `‖A‖ ≤ R`.
    pub radius: f64,
    /// Eigenvalue threshold on the trace-one element deciding rank.
    pub rank_tol: f64,
    pub seed: u64,
}

impl Default for FacialOptions {
    fn default() -> Self {
        Self { restarts: 16, ascent_iters: 200, radius: 1e3, rank_tol: 1e-7, seed: 0 }
    }
}

/// Maximal-rank element of the slice together with its range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxRankWitness {
    /// Trace-one element of maximal rank (zero when the slice is `{0}`).
    pub a_star: SymMat3,
    pub rank: usize,
    /// Best value of `λ_min` over the trace-one section of `L`
    /// (`-inf` when `L` has no trace-one element).
    pub lambda_min_value: f64,
    /// Orthonormal basis of the range of `a_star`.
    pub range_basis: Vec<[f64; 3]>,
}

impl MaxRankWitness {
    fn zero(lambda_min_value: f64) -> Self {
        Self { a_star: SymMat3::zero(), rank: 0, lambda_min_value, range_basis: Vec::new() }
    }
}

pub fn max_rank_element(l: &Subspace) -> Result<MaxRankWitness> {
    max_rank_element_with(l, &FacialOptions::default())
}

pub fn max_rank_element_with(l: &Subspace, opts: &FacialOptions) -> Result<MaxRankWitness> {
    let mut range: Vec<[f64; 3]> = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut top_value = None;
    loop {
        let face_l = if range.len() == 3 { l.clone() } else { l.intersect(&face_span(&range)) };
        let Some(best) = maximize_lambda_min(&face_l, &range, opts)? else {
            return Ok(MaxRankWitness::zero(*top_value.get_or_insert(f64::NEG_INFINITY)));
        };
        let top = *top_value.get_or_insert(best.value);
        if best.value > opts.rank_tol {
            return Ok(witness(best.a, top, &range, opts.rank_tol));
        }
        if best.value < -opts.rank_tol {
            return Ok(MaxRankWitness::zero(top));
        }
        let next = detected_range(&best.a, &range, opts.rank_tol);
        if next.is_empty() {
            return Ok(MaxRankWitness::zero(top));
        }
        if next.len() >= range.len() {
            return Err(Error::NumericalFailure(format!(
                "facial reduction stalled at rank {} with lambda_min {:e}",
                range.len(),
                best.value
            )));
        }
        range = next;
    }
}

fn witness(a: SymMat3, top: f64, range: &[[f64; 3]], rank_tol: f64) -> MaxRankWitness {
    let range_basis = detected_range(&a, range, rank_tol);
    MaxRankWitness { a_star: a, rank: range_basis.len(), lambda_min_value: top, range_basis }
}

/// Orthonormal basis of `{ V Y Vᵀ : Y ∈ S^r }` in svec coordinates.
pub fn face_span(range: &[[f64; 3]]) -> Subspace {
    let mut basis = Vec::new();
    for (a, u) in range.iter().enumerate() {
        for w in &range[a..] {
            let m = outer_sym(u, w);
            basis.push(m.svec().scale(1.0 / m.frobenius_norm()));
        }
    }
    Subspace::from_orthonormal(basis)
}

fn outer_sym(u: &[f64; 3], w: &[f64; 3]) -> SymMat3 {
    let mut m = SymMat3::zero();
    for i in 0..3 {
        for j in i..3 {
            m.set(i, j, 0.5 * (u[i] * w[j] + u[j] * w[i]));
        }
    }
    m
}

/// `Vᵀ X V` as a row-major `r x r` array.
fn compress(x: &SymMat3, range: &[[f64; 3]]) -> Vec<f64> {
    let r = range.len();
    let xm = x.as_mat3();
    let xv: Vec<[f64; 3]> = range.iter().map(|v| xm.mul_vec(v)).collect();
    let mut out = vec![0.0; r * r];
    for a in 0..r {
        for b in 0..r {
            out[a * r + b] = (0..3).map(|i| range[a][i] * xv[b][i]).sum();
        }
    }
    out
}

/// Range of `x` inside `span(range)`: eigenvectors of the compression with
/// eigenvalue above `tol`, mapped back to R^3.
fn detected_range(x: &SymMat3, range: &[[f64; 3]], tol: f64) -> Vec<[f64; 3]> {
    let r = range.len();
    let e = SymEigen::new(r, &compress(x, range));
    e.values
        .iter()
        .zip(&e.vectors)
        .rev()
        .filter(|(l, _)| **l > tol)
        .map(|(_, y)| {
            let mut v = [0.0; 3];
            for (k, yk) in y.iter().enumerate() {
                (0..3).for_each(|i| v[i] += yk * range[k][i]);
            }
            v
        })
        .collect()
}

/// Trace-one affine section of a face subspace, parametrized as
/// `base + Σ c_j dirs_j`, with the compressions to the current range cached.
struct Section {
    base: Vec6,
    dirs: Vec<Vec6>,
    base_c: Vec<f64>,
    dirs_c: Vec<Vec<f64>>,
    r: usize,
}

impl Section {
    fn point(&self, c: &[f64]) -> SymMat3 {
        SymMat3::smat(&self.dirs.iter().zip(c).fold(self.base, |acc, (d, ci)| acc.axpy(*ci, d)))
    }

    fn compressed(&self, c: &[f64]) -> Vec<f64> {
        let mut out = self.base_c.clone();
        for (k, ck) in self.dirs_c.iter().zip(c) {
            out.iter_mut().zip(k).for_each(|(o, v)| *o += ck * v);
        }
        out
    }

    fn eval(&self, c: &[f64]) -> (f64, Vec<f64>) {
        let e = SymEigen::new(self.r, &self.compressed(c));
        (e.values[0], e.vectors[0].clone())
    }

    fn supergradient(&self, u: &[f64]) -> Vec<f64> {
        let r = self.r;
        self.dirs_c
            .iter()
            .map(|k| (0..r).map(|a| (0..r).map(|b| u[a] * k[a * r + b] * u[b]).sum::<f64>()).sum())
            .collect()
    }
}

struct Candidate {
    a: SymMat3,
    value: f64,
}

fn clip_to_ball(c: &mut [f64], radius: f64) {
    let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > radius {
        c.iter_mut().for_each(|x| *x *= radius / n);
    }
}

/// Value above which an ascent iterate certifies a definite element at once.
const CLEAR_INTERIOR: f64 = 1e-3;

fn maximize_lambda_min(face_l: &Subspace, range: &[[f64; 3]], opts: &FacialOptions) -> Result<Option<Candidate>> {
    let trace = SymMat3::identity().svec();
    let p = face_l.project(&trace);
    if p.norm() <= 1e-10 * trace.norm() {
        return Ok(None);
    }
    let base = p.scale(1.0 / p.dot(&p));
    let dirs = face_l.intersect(&Subspace::span(&[trace]).complement()).basis().to_vec();
    let sec = Section {
        base_c: compress(&SymMat3::smat(&base), range),
        dirs_c: dirs.iter().map(|d| compress(&SymMat3::smat(d), range)).collect(),
        base,
        dirs,
        r: range.len(),
    };
    let q = sec.dirs.len();
    if q == 0 {
        let (value, _) = sec.eval(&[]);
        return Ok(Some(Candidate { a: sec.point(&[]), value }));
    }
    let radius = (opts.radius.powi(2) - base.dot(&base)).max(0.0).sqrt();

    let mut finals: Vec<(f64, Vec<f64>)> = Vec::with_capacity(opts.restarts);
    for k in 0..opts.restarts.max(1) {
        let mut rng = rng::stream(opts.seed ^ 0x5eed_facade, k as u64);
        let mut c: Vec<f64> =
            if k == 0 { vec![0.0; q] } else { (0..q).map(|_| 0.5 * rng::gaussian(&mut rng)).collect() };
        clip_to_ball(&mut c, radius);
        let (mut value, mut u) = sec.eval(&c);
        let mut best = (value, c.clone());
        for it in 0..opts.ascent_iters {
            if best.0 > CLEAR_INTERIOR {
                break;
            }
            let g = sec.supergradient(&u);
            let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if gn < 1e-14 {
                break;
            }
            let step = 0.5 / ((it + 1) as f64).sqrt();
            c.iter_mut().zip(&g).for_each(|(ci, gi)| *ci += step * gi / gn);
            clip_to_ball(&mut c, radius);
            (value, u) = sec.eval(&c);
            if value > best.0 {
                best = (value, c.clone());
            }
        }
        if best.0 > CLEAR_INTERIOR {
            return Ok(Some(Candidate { a: sec.point(&best.1), value: best.0 }));
        }
        finals.push(best);
    }
    finals.sort_by(|a, b| b.0.total_cmp(&a.0));
    if finals[0].0 > opts.rank_tol {
        return Ok(Some(Candidate { a: sec.point(&finals[0].1), value: finals[0].0 }));
    }

    // Boundary or empty section: follow the central path of the log-barrier,
    // whose limit lies in the relative interior of the optimal face.
    let first = polish(&sec, &finals[0].1);
    let (v1, _) = sec.eval(&first);
    let cand = Candidate { a: sec.point(&first), value: v1 };
    if let Some((_, c2)) = finals.get(1) {
        let second = polish(&sec, c2);
        let (v2, _) = sec.eval(&second);
        let class = |v: f64| (v > opts.rank_tol) as i8 - (v < -opts.rank_tol) as i8;
        let count =
            |c: &[f64]| SymEigen::new(sec.r, &sec.compressed(c)).values.iter().filter(|&&l| l > opts.rank_tol).count();
        if class(v1) != class(v2) || (class(v1) == 0 && count(&first) != count(&second)) {
            return Err(Error::NumericalFailure(format!(
                "restarts disagree after polish (lambda_min {v1:e} vs {v2:e})"
            )));
        }
    }
    Ok(Some(cand))
}

const MU_START: f64 = 1.0;
const MU_END: f64 = 1e-13;
const MU_SHRINK: f64 = 0.2;

/// Damped Newton path-following on `ψ(c, t) = t/μ + log det(C(c) - t I)`.
fn polish(sec: &Section, c0: &[f64]) -> Vec<f64> {
    let q = c0.len();
    let r = sec.r;
    let n = q + 1;
    let mut c = c0.to_vec();
    let (lam0, _) = sec.eval(&c);
    let mut t = lam0 - 1.0;
    let mut mu = MU_START;

    let inverse_of = |z: &[f64]| -> Option<Vec<f64>> {
        let e = SymEigen::new(r, z);
        if e.values[0] <= 0.0 {
            return None;
        }
        let mut w = vec![0.0; r * r];
        for (l, y) in e.values.iter().zip(&e.vectors) {
            for a in 0..r {
                for b in 0..r {
                    w[a * r + b] += y[a] * y[b] / l;
                }
            }
        }
        Some(w)
    };
    let slack = |c: &[f64], t: f64| {
        let mut z = sec.compressed(c);
        (0..r).for_each(|a| z[a * r + a] -= t);
        z
    };
    let matmul = |x: &[f64], y: &[f64]| {
        let mut out = vec![0.0; r * r];
        for a in 0..r {
            for b in 0..r {
                out[a * r + b] = (0..r).map(|k| x[a * r + k] * y[k * r + b]).sum();
            }
        }
        out
    };
    let trace_of = |x: &[f64]| (0..r).map(|a| x[a * r + a]).sum::<f64>();
    let trace_prod =
        |x: &[f64], y: &[f64]| (0..r).map(|a| (0..r).map(|b| x[a * r + b] * y[b * r + a]).sum::<f64>()).sum::<f64>();

    while mu >= MU_END {
        for _ in 0..60 {
            let Some(w) = inverse_of(&slack(&c, t)) else { break };
            let wk: Vec<Vec<f64>> = sec.dirs_c.iter().map(|k| matmul(&w, k)).collect();
            let mut grad = vec![0.0; n];
            let mut hess = vec![0.0; n * n];
            for j in 0..q {
                grad[j] = trace_of(&wk[j]);
                for k in j..q {
                    let v = trace_prod(&wk[j], &wk[k]);
                    hess[j * n + k] = v;
                    hess[k * n + j] = v;
                }
                let v = -trace_prod(&wk[j], &w);
                hess[j * n + q] = v;
                hess[q * n + j] = v;
            }
            grad[q] = 1.0 / mu - trace_of(&w);
            hess[q * n + q] = trace_prod(&w, &w);

            let scale: Vec<f64> = (0..n).map(|i| 1.0 / hess[i * n + i].abs().sqrt().max(1e-300)).collect();
            let scaled_h: Vec<f64> = (0..n * n).map(|idx| hess[idx] * scale[idx / n] * scale[idx % n]).collect();
            let scaled_g: Vec<f64> = (0..n).map(|i| grad[i] * scale[i]).collect();
            let step: Vec<f64> =
                solve_symmetric(n, &scaled_h, &scaled_g, 1e-15).iter().zip(&scale).map(|(x, s)| x * s).collect();
            let dec: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
            if !dec.is_finite() || dec <= 1e-14 {
                break;
            }
            let lambda = dec.sqrt();
            let mut size = if lambda > 0.25 { 1.0 / (1.0 + lambda) } else { 1.0 };
            let mut moved = false;
            for _ in 0..60 {
                let c_new: Vec<f64> = c.iter().zip(&step).map(|(ci, si)| ci + size * si).collect();
                let t_new = t + size * step[q];
                if inverse_of(&slack(&c_new, t_new)).is_some() {
                    c = c_new;
                    t = t_new;
                    moved = true;
                    break;
                }
                size *= 0.5;
            }
            if !moved {
                break;
            }
        }
        mu *= MU_SHRINK;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(mats: &[SymMat3]) -> Subspace {
        Subspace::from_matrices(mats)
    }

    #[test]
    fn identity_ray_has_full_rank() {
        let w = max_rank_element(&sub(&[SymMat3::identity()])).unwrap();
        assert_eq!(w.rank, 3);
        assert!((w.a_star - SymMat3::identity().scale(1.0 / 3.0)).frobenius_norm() < 1e-12);
    }

    /// t·Diag(1, -1, 0) is PSD only for t = 0 (scan over t).
    #[test]
    fn traceless_line_is_trivial() {
        let d = SymMat3::diag(1.0, -1.0, 0.0);
        let brute = (-1000..=1000)
            .map(|k| k as f64 / 100.0)
            .filter(|&t| crate::linalg::is_psd(&d.scale(t), 0.0))
            .collect::<Vec<_>>();
        assert_eq!(brute, vec![0.0]);
        let w = max_rank_element(&sub(&[d])).unwrap();
        assert_eq!(w.rank, 0);
    }

    /// Grid over the trace-one segment s·E11 + (1-s)·E22 shows rank 2 at
    /// interior points and rank 1 at the ends.
    #[test]
    fn diagonal_pair_has_rank_two() {
        let l = sub(&[SymMat3::unit(0, 0), SymMat3::unit(1, 1)]);
        let max_rank = (0..=100)
            .map(|k| {
                let s = k as f64 / 100.0;
                let a = SymMat3::diag(s, 1.0 - s, 0.0);
                crate::linalg::inertia(&a, 1e-12).n_plus
            })
            .max()
            .unwrap();
        assert_eq!(max_rank, 2);
        let w = max_rank_element(&l).unwrap();
        assert_eq!(w.rank, 2);
        for v in &w.range_basis {
            assert!(v[2].abs() < 1e-9);
        }
    }

    #[test]
    fn tangent_face_slice_is_reduced() {
        // {a11 = 0}: every PSD member has a vanishing first row
        let mut gens: Vec<SymMat3> = vec![SymMat3::unit(1, 1), SymMat3::unit(2, 2), SymMat3::unit(1, 2)];
        gens.push(SymMat3::unit(0, 1));
        gens.push(SymMat3::unit(0, 2));
        let w = max_rank_element(&sub(&gens)).unwrap();
        assert_eq!(w.rank, 2);
        assert!(w.lambda_min_value.abs() < 1e-9);
        for v in &w.range_basis {
            assert!(v[0].abs() < 1e-8, "{v:?}");
        }
    }

    #[test]
    fn rank_one_face() {
        // span{u uᵀ, v vᵀ - w wᵀ} with u, v, w orthonormal: only the ray of u uᵀ is PSD
        let s = 1.0 / 3.0_f64.sqrt();
        let u = [s, s, s];
        let v = [1.0 / 2.0_f64.sqrt(), -1.0 / 2.0_f64.sqrt(), 0.0];
        let w = [1.0 / 6.0_f64.sqrt(), 1.0 / 6.0_f64.sqrt(), -2.0 / 6.0_f64.sqrt()];
        let l = sub(&[SymMat3::outer(&u).scale(2.0), SymMat3::outer(&v) - SymMat3::outer(&w)]);
        let wit = max_rank_element(&l).unwrap();
        assert_eq!(wit.rank, 1);
        let dot: f64 = (0..3).map(|i| wit.range_basis[0][i] * u[i]).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-10);
        assert!((wit.a_star - SymMat3::outer(&u)).frobenius_norm() < 1e-8);
    }
}
