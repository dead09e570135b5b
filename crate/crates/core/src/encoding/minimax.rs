//! Sampled check of `max_phi min_sigma T(phi, decode(sigma))` against
//! `1 - min_phi max_x F(rho_x, phi)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{probabilistic_encode_with, SolverOptions};
use crate::covering::Covering;
use crate::error::{domain, Error, Result};
use crate::state::{haar_sample, PureState, SeededSampler};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxOptions {
    /// Best samples kept for local refinement on each side.
    pub restarts: usize,
    /// Perturbation proposals per restart.
    pub refine_steps: usize,
    pub initial_step: f64,
    pub solver: SolverOptions,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        Self {
            restarts: 100,
            refine_steps: 300,
            initial_step: 0.3,
            solver: SolverOptions {
                tol: 1e-10,
                ..SolverOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimaxReport {
    /// Largest probabilistic encoding distance found.
    pub lhs: f64,
    /// One minus the smallest best-element fidelity found.
    pub rhs: f64,
    pub num_samples: usize,
}

impl MinimaxReport {
    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

pub fn verify_minimax(book: &Covering, num_phi_samples: usize, sampler: &mut SeededSampler) -> Result<MinimaxReport> {
    verify_minimax_with(book, num_phi_samples, sampler, &MinimaxOptions::default())
}

pub fn verify_minimax_with(
    book: &Covering,
    num_phi_samples: usize,
    sampler: &mut SeededSampler,
    opts: &MinimaxOptions,
) -> Result<MinimaxReport> {
    if book.is_empty() {
        return Err(Error::EmptyBook);
    }
    if num_phi_samples == 0 {
        return Err(domain("num_phi_samples", 0.0, "[1, inf)"));
    }
    let d = book.dim();
    let phis: Vec<PureState> = (0..num_phi_samples)
        .map(|_| haar_sample(d, sampler))
        .collect::<Result<_>>()?;

    let encode_distance = |phi: &PureState| -> Result<f64> {
        Ok(probabilistic_encode_with(phi, book, &opts.solver)?.achieved_distance)
    };
    // Negated so that both sides are maximized.
    let neg_best_fidelity = |phi: &PureState| -> Result<f64> {
        let best = book
            .elements()
            .iter()
            .map(|e| e.overlap(phi))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(-best)
    };

    let lhs = maximize(&phis, &encode_distance, sampler, opts)?;
    let rhs = 1.0 + maximize(&phis, &neg_best_fidelity, sampler, opts)?;
    Ok(MinimaxReport {
        lhs,
        rhs,
        num_samples: num_phi_samples,
    })
}

/// Scores every sample, then refines the best `restarts` of them by
/// accept-if-better random perturbations with an adaptive step.
fn maximize<F>(phis: &[PureState], f: &F, sampler: &mut SeededSampler, opts: &MinimaxOptions) -> Result<f64>
where
    F: Fn(&PureState) -> Result<f64> + Sync,
{
    let mut scored: Vec<(f64, usize)> = phis
        .par_iter()
        .enumerate()
        .map(|(i, phi)| f(phi).map(|v| (v, i)))
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    scored.truncate(opts.restarts.max(1));

    let subs = sampler.split(scored.len());
    let refined: Vec<f64> = scored
        .into_par_iter()
        .zip(subs)
        .map(|((value, i), mut rng)| refine(&phis[i], value, f, &mut rng, opts))
        .collect::<Result<_>>()?;
    Ok(refined.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn refine<F>(start: &PureState, start_value: f64, f: &F, rng: &mut SeededSampler, opts: &MinimaxOptions) -> Result<f64>
where
    F: Fn(&PureState) -> Result<f64>,
{
    let d = start.dim();
    let mut phi = start.clone();
    let mut value = start_value;
    let mut step = opts.initial_step;
    let scale = 1.0 / (2.0 * d as f64).sqrt();
    for _ in 0..opts.refine_steps {
        let amps: Vec<Complex64> = phi
            .amplitudes()
            .iter()
            .map(|&a| a + Complex64::new(rng.standard_normal(), rng.standard_normal()) * (step * scale))
            .collect();
        let candidate = PureState::normalized(amps)?;
        let v = f(&candidate)?;
        if v > value {
            phi = candidate;
            value = v;
            step = (step * 1.5).min(1.0);
        } else {
            step = (step * 0.8).max(1e-7);
        }
    }
    Ok(value)
}
