//! Deterministic and probabilistic encoders over a [`Covering`] code book.
//!
//! A deterministic encoder maps a pure state to the label of its nearest
//! book element. A probabilistic encoder maps it to a distribution over
//! labels; decoding yields the corresponding mixture of book elements. The
//! probabilistic encoder gets within `eps` of every state as soon as the
//! book is an internal `sqrt(eps)`-covering.

mod bounds;
mod minimax;
mod solver;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::state::{check_dims, DensityMatrix, PureState};

pub use bounds::{bit_length_bounds_deterministic, bit_length_bounds_probabilistic, rate, BitLengthBounds};
pub use minimax::{verify_minimax, verify_minimax_with, MinimaxOptions, MinimaxReport};
pub use solver::{certificate, project_onto_simplex, Certificate, Solver, SolverOptions};

/// Probability vector over book labels, stored sparsely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<usize, f64>", into = "BTreeMap<usize, f64>")]
pub struct LabelDistribution {
    probs: BTreeMap<usize, f64>,
}

impl LabelDistribution {
    const SUM_TOL: f64 = 1e-10;

    pub fn new(probs: BTreeMap<usize, f64>) -> Result<Self> {
        if let Some((label, p)) = probs.iter().find(|(_, &p)| !(p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("p({label}) = {p}")));
        }
        let sum: f64 = probs.values().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {sum}")));
        }
        Ok(Self { probs })
    }

    pub fn point_mass(label: usize) -> Self {
        Self {
            probs: BTreeMap::from([(label, 1.0)]),
        }
    }

    pub fn uniform(labels: &[usize]) -> Result<Self> {
        let w = 1.0 / labels.len() as f64;
        Self::new(labels.iter().map(|&l| (l, w)).collect())
    }

    /// Dense weight vector indexed by label; zero entries are dropped.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        Self::new(
            weights
                .iter()
                .enumerate()
                .filter(|(_, &w)| w != 0.0)
                .map(|(l, &w)| (l, w))
                .collect(),
        )
    }

    /// `alpha * a + (1 - alpha) * b`.
    pub fn mix(alpha: f64, a: &Self, b: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(crate::error::domain("alpha", alpha, "[0, 1]"));
        }
        let mut probs = BTreeMap::new();
        for (&l, &p) in &a.probs {
            *probs.entry(l).or_insert(0.0) += alpha * p;
        }
        for (&l, &p) in &b.probs {
            *probs.entry(l).or_insert(0.0) += (1.0 - alpha) * p;
        }
        Self::new(probs)
    }

    pub fn get(&self, label: usize) -> f64 {
        self.probs.get(&label).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs.iter().map(|(&l, &p)| (l, p))
    }

    pub fn support(&self) -> Vec<usize> {
        self.probs.keys().copied().collect()
    }

    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut v = vec![0.0; len];
        for (l, p) in self.iter() {
            if l < len {
                v[l] = p;
            }
        }
        v
    }
}

impl TryFrom<BTreeMap<usize, f64>> for LabelDistribution {
    type Error = Error;

    fn try_from(probs: BTreeMap<usize, f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<LabelDistribution> for BTreeMap<usize, f64> {
    fn from(d: LabelDistribution) -> Self {
        d.probs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterministicEncoding {
    pub label: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingResult {
    pub distribution: LabelDistribution,
    /// Trace distance from the target to the decoded mixture.
    pub achieved_distance: f64,
    /// `achieved_distance` minus a certified lower bound on the optimum.
    pub duality_gap: f64,
    pub iterations: usize,
}

impl EncodingResult {
    pub fn lower_bound(&self) -> f64 {
        self.achieved_distance - self.duality_gap
    }
}

/// Nearest book element; ties go to the smallest label.
pub fn deterministic_encode(phi: &PureState, book: &Covering) -> Result<DeterministicEncoding> {
    if book.is_empty() {
        return Err(Error::EmptyBook);
    }
    check_dims(phi.dim(), book.dim())?;
    let (label, distance) = book.nearest(phi)?;
    Ok(DeterministicEncoding { label, distance })
}

/// Distribution over labels whose decoded mixture is closest to `phi` in
/// trace distance, certified to `duality_gap <= tol` unless `max_iter` runs out.
pub fn probabilistic_encode(phi: &PureState, book: &Covering, tol: f64, max_iter: usize) -> Result<EncodingResult> {
    let opts = SolverOptions {
        tol,
        max_iter,
        ..SolverOptions::default()
    };
    probabilistic_encode_with(phi, book, &opts)
}

pub fn probabilistic_encode_with(phi: &PureState, book: &Covering, opts: &SolverOptions) -> Result<EncodingResult> {
    if book.is_empty() {
        return Err(Error::EmptyBook);
    }
    check_dims(phi.dim(), book.dim())?;
    if !(opts.tol > 0.0) {
        return Err(crate::error::domain("tol", opts.tol, "(0, inf)"));
    }
    solver::solve(phi, book, opts)
}

/// `sum_x p(x) rho_x`.
pub fn decode(dist: &LabelDistribution, book: &Covering) -> Result<DensityMatrix> {
    let d = book.dim();
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for (label, p) in dist.iter() {
        let e = book.get(label)?;
        m += e.projector() * Complex64::new(p, 0.0);
    }
    DensityMatrix::new(m)
}

/// Trace distance of the farthest pure qubit state from the octahedron
/// spanned by the six Pauli eigenstates: `(sqrt 3 - 1) / (2 sqrt 3)`.
pub fn octahedron_epsilon() -> f64 {
    let s3 = 3f64.sqrt();
    (s3 - 1.0) / (2.0 * s3)
}

/// Distance from that farthest state to the nearest vertex, `sqrt(eps)`.
pub fn octahedron_delta() -> f64 {
    octahedron_epsilon().sqrt()
}

/// The pure state along Bloch direction `(1, 1, 1)/sqrt 3`.
pub fn octahedron_farthest_state() -> PureState {
    PureState::from_bloch_direction([1.0, 1.0, 1.0]).expect("nonzero direction")
}

/// Labels 0..6 are the `+x, -x, +y, -y, +z, -z` Pauli eigenstates.
pub fn octahedron_book() -> Covering {
    let dirs = [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let elements = dirs
        .iter()
        .map(|&d| PureState::from_bloch_direction(d).expect("unit direction"))
        .collect();
    Covering::new(2, octahedron_delta(), elements).expect("valid qubit book")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OctahedronReport {
    pub epsilon: f64,
    pub delta: f64,
    pub delta_squared_minus_epsilon: f64,
    pub distribution: LabelDistribution,
    pub nearest_label: usize,
}

/// Encodes the farthest state both ways against the octahedron book.
pub fn octahedron_demo() -> Result<OctahedronReport> {
    let book = octahedron_book();
    let phi = octahedron_farthest_state();
    let det = deterministic_encode(&phi, &book)?;
    let prob = probabilistic_encode(&phi, &book, 1e-12, 5000)?;
    Ok(OctahedronReport {
        epsilon: prob.achieved_distance,
        delta: det.distance,
        delta_squared_minus_epsilon: det.distance * det.distance - prob.achieved_distance,
        distribution: prob.distribution,
        nearest_label: det.label,
    })
}
