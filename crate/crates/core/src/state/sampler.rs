use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::PureState;
use crate::error::{Error, Result};

/// Deterministic random source identified by `(seed, stream)`.
///
/// Each stream is an independent ChaCha keystream under the same key, so
/// parallel workers can own distinct streams of one seed.
#[derive(Debug, Clone)]
pub struct SeededSampler {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl SeededSampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// `n` child samplers sharing a fresh seed drawn from `self`, on streams `0..n`.
    pub fn split(&mut self, n: usize) -> Vec<SeededSampler> {
        let child_seed = self.next_u64();
        (0..n as u64).map(|s| SeededSampler::new(child_seed, s)).collect()
    }

    /// Runs `work(count, sampler)` over `total` items split into `workers`
    /// deterministic chunks, each with its own child stream.
    pub fn partitioned<T, F>(&mut self, total: usize, workers: usize, work: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, &mut SeededSampler) -> T + Sync,
    {
        let counts = partition_counts(total, workers.max(1));
        let children = self.split(counts.len());
        counts
            .into_par_iter()
            .zip(children)
            .map(|(count, mut s)| work(count, &mut s))
            .collect()
    }
}

/// Splits `total` into `parts` near-equal counts, larger ones first.
pub fn partition_counts(total: usize, parts: usize) -> Vec<usize> {
    let parts = parts.max(1);
    let base = total / parts;
    let extra = total % parts;
    (0..parts).map(|i| base + usize::from(i < extra)).collect()
}

/// Haar-random pure state: `2d` standard Gaussians read as `d` complex
/// amplitudes, then normalized.
pub fn haar_sample(d: usize, sampler: &mut SeededSampler) -> Result<PureState> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    loop {
        let amps: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(sampler.standard_normal(), sampler.standard_normal()))
            .collect();
        if let Ok(state) = PureState::normalized(amps) {
            return Ok(state);
        }
    }
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre
/// matrix, with the phases of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary(d: usize, sampler: &mut SeededSampler) -> Result<DMatrix<Complex64>> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let g = DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(sampler.standard_normal(), sampler.standard_normal())
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_and_stream_repeat() {
        let mut a = SeededSampler::new(42, 3);
        let mut b = SeededSampler::new(42, 3);
        let mut c = SeededSampler::new(42, 4);
        let xs: Vec<f64> = (0..8).map(|_| a.standard_normal()).collect();
        let ys: Vec<f64> = (0..8).map(|_| b.standard_normal()).collect();
        let zs: Vec<f64> = (0..8).map(|_| c.standard_normal()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }

    #[test]
    fn partition_is_exact() {
        assert_eq!(partition_counts(10, 3), vec![4, 3, 3]);
        assert_eq!(partition_counts(2, 4), vec![1, 1, 0, 0]);
        assert_eq!(partition_counts(5, 0), vec![5]);
    }

    #[test]
    fn partitioned_is_deterministic() {
        let run = || {
            let mut s = SeededSampler::new(9, 0);
            s.partitioned(1000, 4, |n, s| (0..n).map(|_| s.uniform()).sum::<f64>())
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn haar_dimension_checks() {
        let mut s = SeededSampler::new(1, 0);
        assert_eq!(haar_sample(0, &mut s), Err(Error::InvalidDimension(0)));
        let one = haar_sample(1, &mut s).unwrap();
        assert!((one.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut s = SeededSampler::new(5, 0);
        let u = haar_unitary(4, &mut s).unwrap();
        let id = &u * u.adjoint();
        let err = (id - DMatrix::<Complex64>::identity(4, 4)).iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }
}
