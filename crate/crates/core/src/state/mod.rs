//! Pure and mixed quantum states on `C^d`, together with the distance
//! measures used throughout the crate.
//!
//! Pure states are stored as unit vectors. Their global phase is never
//! fixed, so two `PureState`s should be compared with [`trace_distance_pure`]
//! rather than component-wise.

mod bloch;
mod metrics;
mod sampler;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bloch::{bloch_distance, from_bloch, to_bloch, BlochVector};
pub use metrics::{
    fidelity, fidelity_pure_mixed, trace_distance, trace_distance_pure, trace_distance_pure_mixed,
};
pub use sampler::{haar_sample, haar_unitary, partition_counts, SeededSampler};

/// Numerical tolerances for validating states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of a pure state's norm from 1.
    pub norm: f64,
    /// Allowed entrywise deviation from `M = M^†`.
    pub hermitian: f64,
    /// Most negative eigenvalue still accepted as positive semidefinite.
    pub eigenvalue: f64,
    /// Allowed deviation of the trace from 1.
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-12,
            hermitian: 1e-12,
            eigenvalue: 1e-10,
            trace: 1e-10,
        }
    }
}

/// A unit vector in `C^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateRepr", into = "PureStateRepr")]
pub struct PureState {
    amps: DVector<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, Tolerances::default().norm)
    }

    pub fn with_tolerance(amplitudes: Vec<Complex64>, norm_tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let amps = DVector::from_vec(amplitudes);
        let norm = amps.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > norm_tol {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let mut amps = DVector::from_vec(amplitudes);
        let norm = amps.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm));
        }
        amps.unscale_mut(norm);
        Ok(Self { amps })
    }

    /// Computational basis state `|k>` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if k >= d {
            return Err(Error::DimensionMismatch { left: k + 1, right: d });
        }
        let mut amps = DVector::zeros(d);
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Qubit state whose Bloch vector points along `direction`.
    pub fn from_bloch_direction(direction: [f64; 3]) -> Result<Self> {
        let [x, y, z] = direction;
        let r = (x * x + y * y + z * z).sqrt();
        if !(r.is_finite() && r > 0.0) {
            return Err(crate::error::domain("|direction|", r, "(0, inf)"));
        }
        let cos_theta = (z / r).clamp(-1.0, 1.0);
        let a = ((1.0 + cos_theta) / 2.0).sqrt();
        let b = ((1.0 - cos_theta) / 2.0).sqrt();
        let azimuth = y.atan2(x);
        Self::normalized(vec![
            Complex64::new(a, 0.0),
            Complex64::from_polar(b, azimuth),
        ])
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// `|<self|other>|^2`, the fidelity of two pure states.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }

    /// `<self|m|self>` for a Hermitian `m`.
    pub fn expectation(&self, m: &DMatrix<Complex64>) -> f64 {
        self.amps.dotc(&(m * &self.amps)).re
    }

    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.amps * self.amps.adjoint()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            m: self.projector(),
        }
    }

    /// `U|self>`.
    pub fn transform(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        check_dims(self.dim(), u.nrows())?;
        Self::normalized((u * &self.amps).iter().copied().collect())
    }
}

/// A positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: DMatrix<Complex64>, tol: &Tolerances) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let herm_dev = (&matrix - matrix.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !(herm_dev <= tol.hermitian) {
            return Err(Error::NotHermitian(herm_dev));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol.trace || trace.im.abs() > tol.trace {
            return Err(Error::TraceNotOne(trace.re));
        }
        let eig = hermitian_eigen(&matrix);
        let min_eig = eig.eigenvalues.min();
        if min_eig < -tol.eigenvalue {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { m: matrix })
    }

    pub fn from_pure(state: &PureState) -> Self {
        state.to_density()
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            m: DMatrix::from_diagonal_element(d, d, Complex64::new(1.0 / d as f64, 0.0)),
        })
    }

    /// `sum_i probs[i] |i><i|`.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let diag = DVector::from_iterator(probs.len(), probs.iter().map(|&p| Complex64::new(p, 0.0)));
        Self::new(DMatrix::from_diagonal(&diag))
    }

    /// Convex combination `sum_k w_k |psi_k><psi_k|`.
    pub fn mixture(weights: &[f64], states: &[&PureState]) -> Result<Self> {
        if weights.len() != states.len() {
            return Err(Error::DimensionMismatch {
                left: weights.len(),
                right: states.len(),
            });
        }
        let d = states.first().ok_or(Error::EmptyBook)?.dim();
        let mut m = DMatrix::zeros(d, d);
        for (&w, s) in weights.iter().zip(states) {
            check_dims(d, s.dim())?;
            m += s.projector() * Complex64::new(w, 0.0);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    /// Eigenvalues in decreasing order with matching eigenvector columns.
    pub fn spectrum(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let eig = hermitian_eigen(&self.m);
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_columns(
            &order
                .iter()
                .map(|&i| eig.eigenvectors.column(i).into_owned())
                .collect::<Vec<_>>(),
        );
        (values, vectors)
    }

    /// Largest eigenvalue and one unit eigenvector for it.
    pub fn top_eigenpair(&self) -> (f64, PureState) {
        let (values, vectors) = self.spectrum();
        let v: Vec<Complex64> = vectors.column(0).iter().copied().collect();
        (values[0], PureState::normalized(v).expect("eigenvector has unit norm"))
    }

    /// `U rho U^†`.
    pub fn conjugate_by(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        check_dims(self.dim(), u.nrows())?;
        let m = u * &self.m * u.adjoint();
        Ok(Self { m: symmetrize(&m) })
    }

    /// Whether the state has rank one within `tol` on its largest eigenvalue.
    pub fn is_pure(&self, tol: f64) -> bool {
        let purity = (&self.m * &self.m).trace().re;
        (purity - 1.0).abs() <= tol
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(s: &PureState) -> Self {
        s.to_density()
    }
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

pub(crate) fn symmetrize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigendecomposition of the Hermitian part of `m`.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
    symmetrize(m).symmetric_eigen()
}

#[derive(Serialize, Deserialize)]
struct PureStateRepr {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<PureState> for PureStateRepr {
    fn from(s: PureState) -> Self {
        Self {
            dim: s.dim(),
            re: s.amps.iter().map(|c| c.re).collect(),
            im: s.amps.iter().map(|c| c.im).collect(),
        }
    }
}

impl TryFrom<PureStateRepr> for PureState {
    type Error = Error;

    fn try_from(r: PureStateRepr) -> Result<Self> {
        if r.re.len() != r.dim || r.im.len() != r.dim {
            return Err(Error::Malformed(format!(
                "dim = {} but re/im have lengths {}/{}",
                r.dim,
                r.re.len(),
                r.im.len()
            )));
        }
        PureState::new(
            r.re.into_iter()
                .zip(r.im)
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl From<DensityMatrix> for DensityRepr {
    fn from(s: DensityMatrix) -> Self {
        let d = s.dim();
        let rows = |f: fn(&Complex64) -> f64| {
            (0..d)
                .map(|i| (0..d).map(|j| f(&s.m[(i, j)])).collect())
                .collect()
        };
        Self {
            dim: d,
            re: rows(|c| c.re),
            im: rows(|c| c.im),
        }
    }
}

impl TryFrom<DensityRepr> for DensityMatrix {
    type Error = Error;

    fn try_from(r: DensityRepr) -> Result<Self> {
        let d = r.dim;
        let shape_ok = r.re.len() == d
            && r.im.len() == d
            && r.re.iter().chain(&r.im).all(|row| row.len() == d);
        if !shape_ok {
            return Err(Error::Malformed(format!("expected {d}x{d} re/im arrays")));
        }
        DensityMatrix::new(DMatrix::from_fn(d, d, |i, j| {
            Complex64::new(r.re[i][j], r.im[i][j])
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_unnormalized_and_empty() {
        assert!(matches!(
            PureState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert_eq!(PureState::new(vec![]), Err(Error::InvalidDimension(0)));
        assert!(PureState::normalized(vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn density_validation() {
        let not_herm = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(not_herm), Err(Error::NotHermitian(_))));
        assert!(matches!(DensityMatrix::diagonal(&[0.7, 0.7]), Err(Error::TraceNotOne(_))));
        assert!(matches!(DensityMatrix::diagonal(&[1.2, -0.2]), Err(Error::NotPositive(_))));
        assert!(DensityMatrix::diagonal(&[0.8, 0.2, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn tolerances_are_overridable() {
        let loose = Tolerances {
            trace: 0.5,
            ..Tolerances::default()
        };
        let m = DMatrix::from_diagonal_element(2, 2, c(0.6, 0.0));
        assert!(DensityMatrix::new(m.clone()).is_err());
        assert!(DensityMatrix::with_tolerances(m, &loose).is_ok());
    }

    #[test]
    fn spectrum_is_sorted_descending() {
        let rho = DensityMatrix::diagonal(&[0.1, 0.6, 0.3]).unwrap();
        let (values, _) = rho.spectrum();
        assert!((values[0] - 0.6).abs() < 1e-14);
        assert!((values[2] - 0.1).abs() < 1e-14);
        let (p0, top) = rho.top_eigenpair();
        assert!((p0 - 0.6).abs() < 1e-14);
        assert!((top.overlap(&PureState::basis(3, 1).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_shapes() {
        let s = PureState::normalized(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["im"].as_array().unwrap().len(), 2);
        let back: PureState = serde_json::from_value(v).unwrap();
        assert!(trace_distance_pure(&s, &back).unwrap() < 1e-12);

        let rho = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let v = serde_json::to_value(&rho).unwrap();
        assert_eq!(v["re"][1][1], 0.75);
        let back: DensityMatrix = serde_json::from_value(v).unwrap();
        assert_eq!(back, rho);

        let bad = serde_json::json!({"dim": 2, "re": [1.0, 1.0], "im": [0.0, 0.0]});
        assert!(serde_json::from_value::<PureState>(bad).is_err());
        let ragged = serde_json::json!({"dim": 2, "re": [[1.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]});
        assert!(serde_json::from_value::<DensityMatrix>(ragged).is_err());
    }

    #[test]
    fn bloch_direction_states() {
        let plus = PureState::from_bloch_direction([1.0, 0.0, 0.0]).unwrap();
        let expected = PureState::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(trace_distance_pure(&plus, &expected).unwrap() < 1e-12);
        let minus_i = PureState::from_bloch_direction([0.0, -2.0, 0.0]).unwrap();
        let expected = PureState::normalized(vec![c(1.0, 0.0), c(0.0, -1.0)]).unwrap();
        assert!(trace_distance_pure(&minus_i, &expected).unwrap() < 1e-12);
    }
}
