//! Volumes of trace-distance balls `B_eps(rho) = { psi pure : T(psi, rho) < eps }`
//! under the unitarily invariant measure on pure states.

mod bound;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::state::{
    haar_sample, trace_distance_pure, trace_distance_pure_mixed, DensityMatrix, PureState,
    SeededSampler,
};

pub use bound::{f_lower_bound, g4_closed_form, g4_coefficients, g_integral};

/// Monte Carlo estimate of a ball volume with its Bernoulli standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub point_estimate: f64,
    pub std_error: f64,
    pub num_samples: usize,
    pub epsilon: f64,
    pub dim: usize,
}

impl VolumeEstimate {
    fn from_hits(hits: usize, num_samples: usize, epsilon: f64, dim: usize) -> Self {
        let p = hits as f64 / num_samples as f64;
        Self {
            point_estimate: p,
            std_error: (p * (1.0 - p) / num_samples as f64).sqrt(),
            num_samples,
            epsilon,
            dim,
        }
    }

    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn within_sigmas(&self, value: f64, k: f64) -> bool {
        (self.point_estimate - value).abs() <= k * self.std_error
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallSpec {
    center: DensityMatrix,
    epsilon: f64,
}

impl BallSpec {
    pub fn new(center: DensityMatrix, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self { center, epsilon })
    }

    pub fn center(&self) -> &DensityMatrix {
        &self.center
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(domain("epsilon", epsilon, "(0, 1]"))
    }
}

pub(crate) fn check_half_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 0.5 {
        Ok(())
    } else {
        Err(domain("epsilon", epsilon, "(0, 1/2]"))
    }
}

/// `mu(B_eps(phi)) = eps^(2(d-1))` for any pure center `phi`.
pub fn ball_volume_exact(epsilon: f64, d: usize) -> Result<f64> {
    check_epsilon(epsilon)?;
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok(epsilon.powi(2 * (d as i32 - 1)))
}

/// Upper bound on the ball volume for an arbitrary (possibly mixed) center:
/// `(2 eps)^(2(d-1))` in general, `eps^(2(d-1))` once `d >= 4`.
pub fn external_ball_bound(epsilon: f64, d: usize) -> Result<f64> {
    check_half_epsilon(epsilon)?;
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let exponent = 2 * (d as i32 - 1);
    Ok(if d < 4 {
        (2.0 * epsilon).powi(exponent)
    } else {
        epsilon.powi(exponent)
    })
}

enum Center {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl Center {
    fn of(rho: &DensityMatrix) -> Self {
        if rho.is_pure(1e-12) {
            Center::Pure(rho.top_eigenpair().1)
        } else {
            Center::Mixed(rho.clone())
        }
    }

    fn distance(&self, psi: &PureState) -> f64 {
        match self {
            Center::Pure(c) => trace_distance_pure(c, psi),
            Center::Mixed(rho) => trace_distance_pure_mixed(psi, rho),
        }
        .expect("dimensions agree by construction")
    }
}

fn count_hits(center: &Center, epsilon: f64, d: usize, n: usize, sampler: &mut SeededSampler) -> usize {
    (0..n)
        .filter(|_| {
            let psi = haar_sample(d, sampler).expect("d >= 1");
            center.distance(&psi) < epsilon
        })
        .count()
}

/// Fraction of `num_samples` Haar-random pure states inside the ball.
pub fn ball_volume_mc(spec: &BallSpec, num_samples: usize, sampler: &mut SeededSampler) -> Result<VolumeEstimate> {
    if num_samples == 0 {
        return Err(domain("num_samples", 0.0, "[1, inf)"));
    }
    let d = spec.center.dim();
    let center = Center::of(&spec.center);
    let hits = count_hits(&center, spec.epsilon, d, num_samples, sampler);
    Ok(VolumeEstimate::from_hits(hits, num_samples, spec.epsilon, d))
}

/// [`ball_volume_mc`] split over `workers` deterministic sub-streams.
pub fn ball_volume_mc_parallel(
    spec: &BallSpec,
    num_samples: usize,
    sampler: &mut SeededSampler,
    workers: usize,
) -> Result<VolumeEstimate> {
    if num_samples == 0 {
        return Err(domain("num_samples", 0.0, "[1, inf)"));
    }
    let d = spec.center.dim();
    let center = Center::of(&spec.center);
    let hits: usize = sampler
        .partitioned(num_samples, workers, |n, s| count_hits(&center, spec.epsilon, d, n, s))
        .into_iter()
        .sum();
    Ok(VolumeEstimate::from_hits(hits, num_samples, spec.epsilon, d))
}
