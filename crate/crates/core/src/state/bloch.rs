use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::error::{Error, Result};

/// Qubit state as a point in the Bloch ball of radius 1/2.
///
/// With this scaling the trace distance between two qubit states equals the
/// Euclidean distance between their Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub const RADIUS: f64 = 0.5;

    pub fn new(coords: [f64; 3]) -> Result<Self> {
        let v = Self(coords);
        let norm = v.norm();
        if !(norm <= Self::RADIUS + 1e-12) {
            return Err(crate::error::domain("|r|", norm, "[0, 1/2]"));
        }
        Ok(v)
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `r_k = tr(rho sigma_k) / 2`.
pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            got: rho.dim(),
            expected: 2,
        });
    }
    let m = rho.matrix();
    let off = m[(0, 1)];
    let z = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
    let coords = [off.re, -off.im, z];
    // Clamp rounding on the sphere surface.
    let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > BlochVector::RADIUS && norm <= BlochVector::RADIUS + 1e-12 {
        let s = BlochVector::RADIUS / norm;
        return BlochVector::new(coords.map(|x| x * s));
    }
    BlochVector::new(coords)
}

/// `rho = I/2 + r . sigma`.
pub fn from_bloch(r: &BlochVector) -> DensityMatrix {
    let [x, y, z] = r.0;
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 + z, 0.0),
            Complex64::new(x, -y),
            Complex64::new(x, y),
            Complex64::new(0.5 - z, 0.0),
        ],
    );
    DensityMatrix::new(m).expect("Bloch ball points are valid qubit states")
}

pub fn bloch_distance(a: &BlochVector, b: &BlochVector) -> f64 {
    a.0.iter()
        .zip(b.0.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
