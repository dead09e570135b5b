//! Minimizing `T(phi, sum_x p_x rho_x)` over the probability simplex.
//!
//! Every candidate is scored with a measurement certificate: for any
//! `0 <= M <= I`, `tr(M phi) - max_x tr(M rho_x)` lower-bounds the optimum.
//! Taking `M` as the projector onto the positive eigenvector of
//! `phi - sigma` makes the bound tight at the minimizer.

use nalgebra::{DMatrix, DVector, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{EncodingResult, LabelDistribution};
use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::state::{hermitian_eigen, to_bloch, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Solver {
    /// Bloch projection for qubits, projected gradient otherwise.
    Auto,
    /// Exact minimum-norm point in the convex hull of Bloch vectors (`d = 2`).
    BlochProjection,
    /// Projected gradient on the simplex with backtracking (any `d`).
    ProjectedGradient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub solver: Solver,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 5000,
            solver: Solver::Auto,
        }
    }
}

/// Trace distance of a mixture together with its measurement lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub distance: f64,
    pub lower_bound: f64,
    /// `-tr(M rho_x)`, a subgradient of the distance in the weights.
    pub gradient: Vec<f64>,
}

fn mixture_matrix(book: &Covering, weights: &[f64]) -> DMatrix<Complex64> {
    let d = book.dim();
    let mut sigma = DMatrix::<Complex64>::zeros(d, d);
    for (e, &w) in book.elements().iter().zip(weights) {
        if w != 0.0 {
            sigma += e.projector() * Complex64::new(w, 0.0);
        }
    }
    sigma
}

/// Evaluates the distance from `phi` to the mixture with the given dense
/// `weights` and the lower bound certified by the positive-eigenspace
/// projector of `phi - sigma`.
pub fn certificate(phi: &PureState, book: &Covering, weights: &[f64]) -> Result<Certificate> {
    if weights.len() != book.len() {
        return Err(Error::DimensionMismatch {
            left: weights.len(),
            right: book.len(),
        });
    }
    let diff = phi.projector() - mixture_matrix(book, weights);
    let eig = hermitian_eigen(&diff);
    let top = eig.eigenvalues.imax();
    let lambda = eig.eigenvalues[top];
    let v: DVector<Complex64> = eig.eigenvectors.column(top).into_owned();
    let scores: Vec<f64> = book
        .elements()
        .iter()
        .map(|e| v.dotc(e.amplitudes()).norm_sqr())
        .collect();
    let best_vertex = scores.iter().copied().fold(0.0, f64::max);
    let lower_bound = if lambda > 0.0 {
        (v.dotc(phi.amplitudes()).norm_sqr() - best_vertex).max(0.0)
    } else {
        0.0
    };
    Ok(Certificate {
        distance: lambda.clamp(0.0, 1.0),
        lower_bound,
        gradient: scores.into_iter().map(|s| -s).collect(),
    })
}

/// Euclidean projection onto `{p : p >= 0, sum p = 1}`.
pub fn project_onto_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (i as f64 + 1.0);
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn renormalize(mut w: Vec<f64>) -> Vec<f64> {
    for x in w.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

pub(super) fn solve(phi: &PureState, book: &Covering, opts: &SolverOptions) -> Result<EncodingResult> {
    let solver = match opts.solver {
        Solver::Auto if book.dim() == 2 => Solver::BlochProjection,
        Solver::Auto => Solver::ProjectedGradient,
        s => s,
    };
    let (weights, iterations, extra_lower) = match solver {
        Solver::BlochProjection => {
            if book.dim() != 2 {
                return Err(Error::UnsupportedDimension {
                    got: book.dim(),
                    expected: 2,
                });
            }
            let (w, it) = bloch_projection(phi, book, opts.max_iter)?;
            (w, it, 0.0)
        }
        _ => projected_gradient(phi, book, opts)?,
    };
    let weights = renormalize(weights);
    let cert = certificate(phi, book, &weights)?;
    let lower = cert.lower_bound.max(extra_lower).min(cert.distance);
    Ok(EncodingResult {
        distribution: LabelDistribution::from_weights(&weights)?,
        achieved_distance: cert.distance,
        duality_gap: cert.distance - lower,
        iterations,
    })
}

/// Projected gradient descent with a backtracking step. Returns the best
/// weights seen, the iteration count, and the best lower bound certified
/// along the way.
fn projected_gradient(phi: &PureState, book: &Covering, opts: &SolverOptions) -> Result<(Vec<f64>, usize, f64)> {
    let n = book.len();
    let (start, _) = book.nearest(phi)?;
    let mut p = vec![0.0; n];
    p[start] = 1.0;
    let mut cert = certificate(phi, book, &p)?;
    let mut best = (cert.distance, p.clone());
    let mut best_lower = cert.lower_bound;
    let mut step = 1.0;
    let mut iterations = 0;

    while iterations < opts.max_iter && best.0 - best_lower > opts.tol {
        iterations += 1;
        let accepted = loop {
            let trial: Vec<f64> = p.iter().zip(&cert.gradient).map(|(x, g)| x - step * g).collect();
            let q = project_onto_simplex(&trial);
            let next = certificate(phi, book, &q)?;
            let (mut lin, mut sq) = (0.0, 0.0);
            for ((qi, pi), gi) in q.iter().zip(&p).zip(&cert.gradient) {
                lin += gi * (qi - pi);
                sq += (qi - pi) * (qi - pi);
            }
            if next.distance <= cert.distance + lin + sq / (2.0 * step) + 1e-15 {
                break Some((q, next));
            }
            step *= 0.5;
            if step < 1e-16 {
                break None;
            }
        };
        let Some((q, next)) = accepted else { break };
        let stalled = q == p;
        p = q;
        cert = next;
        if cert.distance < best.0 {
            best = (cert.distance, p.clone());
        }
        best_lower = best_lower.max(cert.lower_bound);
        if stalled {
            break;
        }
        step = (step * 2.0).min(1e8);
    }
    Ok((best.1, iterations, best_lower))
}

/// Wolfe's minimum-norm-point algorithm on the Bloch vectors of the book,
/// shifted so that the target sits at the origin.
fn bloch_projection(phi: &PureState, book: &Covering, max_iter: usize) -> Result<(Vec<f64>, usize)> {
    let target = bloch3(&phi.to_density())?;
    let points: Vec<Vector3<f64>> = book
        .elements()
        .iter()
        .map(|e| bloch3(&e.to_density()).map(|r| r - target))
        .collect::<Result<_>>()?;
    let (weights, iterations) = min_norm_point(&points, max_iter.max(1));
    Ok((weights, iterations))
}

fn bloch3(rho: &crate::state::DensityMatrix) -> Result<Vector3<f64>> {
    Ok(Vector3::from(to_bloch(rho)?.coords()))
}

const WOLFE_TOL: f64 = 1e-15;

/// Dense barycentric weights of the minimum-norm point of `conv(points)`.
pub(crate) fn min_norm_point(points: &[Vector3<f64>], max_iter: usize) -> (Vec<f64>, usize) {
    let scale = points.iter().map(|p| p.norm_squared()).fold(0.0, f64::max).max(1e-300);
    let first = (0..points.len())
        .min_by(|&i, &j| points[i].norm_squared().total_cmp(&points[j].norm_squared()))
        .expect("non-empty point set");
    let mut active = vec![first];
    let mut w = vec![1.0];
    let mut x = points[first];
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let xx = x.norm_squared();
        if xx <= WOLFE_TOL * WOLFE_TOL * scale {
            break;
        }
        let j = (0..points.len())
            .min_by(|&i, &k| x.dot(&points[i]).total_cmp(&x.dot(&points[k])))
            .expect("non-empty point set");
        if xx - x.dot(&points[j]) <= 1e-14 * scale || active.contains(&j) {
            break;
        }
        active.push(j);
        w.push(0.0);

        loop {
            let Some(alpha) = affine_min_norm(points, &active) else {
                // Affinely dependent set: drop the newcomer and stop.
                active.pop();
                w.pop();
                break;
            };
            if alpha.iter().all(|&a| a > WOLFE_TOL) {
                w = alpha;
                break;
            }
            let theta = w
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= WOLFE_TOL)
                .map(|(&wi, &ai)| if wi - ai > 0.0 { wi / (wi - ai) } else { 0.0 })
                .fold(1.0, f64::min);
            for (wi, ai) in w.iter_mut().zip(&alpha) {
                *wi = (1.0 - theta) * *wi + theta * ai;
            }
            let mut k = 0;
            while k < active.len() {
                if w[k] <= WOLFE_TOL {
                    active.remove(k);
                    w.remove(k);
                } else {
                    k += 1;
                }
            }
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|wi| *wi /= s);
            if active.len() <= 1 {
                break;
            }
        }
        x = active
            .iter()
            .zip(&w)
            .fold(Vector3::zeros(), |acc, (&i, &wi)| acc + points[i] * wi);
    }

    let mut dense = vec![0.0; points.len()];
    for (&i, &wi) in active.iter().zip(&w) {
        dense[i] = wi;
    }
    (dense, iterations)
}

/// Minimizes `|sum_i a_i P_i|` over the affine hull (`sum a_i = 1`).
fn affine_min_norm(points: &[Vector3<f64>], active: &[usize]) -> Option<Vec<f64>> {
    let k = active.len();
    if k == 1 {
        return Some(vec![1.0]);
    }
    let mut kkt = DMatrix::<f64>::zeros(k + 1, k + 1);
    for (a, &i) in active.iter().enumerate() {
        for (b, &j) in active.iter().enumerate() {
            kkt[(a, b)] = points[i].dot(&points[j]);
        }
        kkt[(a, k)] = 1.0;
        kkt[(k, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = kkt.lu().solve(&rhs)?;
    let alpha: Vec<f64> = sol.iter().take(k).copied().collect();
    let residual = alpha.iter().sum::<f64>() - 1.0;
    (alpha.iter().all(|a| a.is_finite()) && residual.abs() < 1e-9).then_some(alpha)
}
