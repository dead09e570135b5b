use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_dims, hermitian_eigen, DensityMatrix, PureState};
use crate::error::{Error, Result};

const PSD_CLAMP: f64 = 1e-10;
// Eigenvalues at roundoff level would otherwise enter as their square roots.
const SQRT_FLOOR: f64 = 1e-14;

/// Half the Schatten 1-norm of `a - b`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let diff = a.matrix() - b.matrix();
    let eig = hermitian_eigen(&diff);
    let t = 0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>();
    Ok(t.clamp(0.0, 1.0))
}

/// `sqrt(1 - |<a|b>|^2)`, evaluated as the norm of the component of `b`
/// orthogonal to `a` so that nearly equal states keep full precision.
pub fn trace_distance_pure(a: &PureState, b: &PureState) -> Result<f64> {
    let c = a.inner(b)?;
    let residual = b.amplitudes() - a.amplitudes() * c;
    Ok(residual.norm().min(1.0))
}

/// Trace distance between a pure state and an arbitrary state.
///
/// `psi - rho` has at most one positive eigenvalue, and it equals the
/// trace distance because the difference is traceless.
pub fn trace_distance_pure_mixed(psi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    check_dims(psi.dim(), rho.dim())?;
    let diff = psi.projector() - rho.matrix();
    let eig = hermitian_eigen(&diff);
    Ok(eig.eigenvalues.max().clamp(0.0, 1.0))
}

/// Uhlmann fidelity `(tr |sqrt(a) sqrt(b)|)^2`, summing the singular values
/// of `sqrt(a) sqrt(b)`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let product = psd_sqrt(a.matrix())? * psd_sqrt(b.matrix())?;
    let root_sum: f64 = product.singular_values().iter().sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// `<phi|rho|phi>`.
pub fn fidelity_pure_mixed(phi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    check_dims(phi.dim(), rho.dim())?;
    Ok(phi.expectation(rho.matrix()).clamp(0.0, 1.0))
}

fn psd_sqrt(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = hermitian_eigen(m);
    let min = eig.eigenvalues.min();
    if min < -PSD_CLAMP {
        return Err(Error::NotPositive(min));
    }
    let roots = eig
        .eigenvalues
        .map(|l| Complex64::new(if l > SQRT_FLOOR { l.sqrt() } else { 0.0 }, 0.0));
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&roots) * v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(d: usize, k: usize) -> PureState {
        PureState::basis(d, k).unwrap()
    }

    #[test]
    fn trace_distance_basics() {
        let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-15);
        let t = trace_distance(&ket(2, 0).to_density(), &ket(2, 1).to_density()).unwrap();
        assert!((t - 1.0).abs() < 1e-14);
        let err = trace_distance(&rho, &DensityMatrix::maximally_mixed(3).unwrap());
        assert_eq!(err, Err(Error::DimensionMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn pure_trace_distance_matches_overlap() {
        let theta: f64 = 0.37;
        let psi = PureState::normalized(vec![
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(0.0, theta.sin()),
        ])
        .unwrap();
        let f = psi.overlap(&ket(2, 0)).unwrap();
        let general = trace_distance(&psi.to_density(), &ket(2, 0).to_density()).unwrap();
        assert!((general - (1.0 - f).sqrt()).abs() < 1e-12);
        assert!((trace_distance_pure(&psi, &ket(2, 0)).unwrap() - general).abs() < 1e-12);
        let mixed = trace_distance_pure_mixed(&psi, &ket(2, 0).to_density()).unwrap();
        assert!((mixed - general).abs() < 1e-12);
    }

    #[test]
    fn fidelity_cases() {
        let rho = DensityMatrix::diagonal(&[0.2, 0.5, 0.3]).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);

        let p0 = 0.83;
        let rho = DensityMatrix::diagonal(&[p0, 1.0 - p0]).unwrap();
        let zero = ket(2, 0);
        assert!((fidelity(&zero.to_density(), &rho).unwrap() - p0).abs() < 1e-12);
        assert!((fidelity(&rho, &zero.to_density()).unwrap() - p0).abs() < 1e-12);
        assert!((fidelity_pure_mixed(&zero, &rho).unwrap() - p0).abs() < 1e-15);

        let plus = PureState::from_bloch_direction([1.0, 0.0, 0.0]).unwrap();
        let f = fidelity(&plus.to_density(), &zero.to_density()).unwrap();
        assert!((f - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let a = DensityMatrix::maximally_mixed(2).unwrap();
        let b = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(matches!(fidelity(&a, &b), Err(Error::DimensionMismatch { .. })));
    }
}
