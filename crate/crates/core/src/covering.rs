//! Internal epsilon-coverings of the pure-state manifold.
//!
//! The randomized construction draws `J_R` Haar-random centers, then packs
//! additional states with disjoint `eps_P`-balls into the region those
//! centers leave uncovered. The union is an `(eps_R + eps_P)`-covering once
//! the packing is maximal; since maximality cannot be certified, coverage is
//! checked afterwards by sampling.

use serde::{Deserialize, Serialize};

use crate::ball::{check_epsilon, check_half_epsilon};
use crate::error::{domain, Error, Result};
use crate::state::{haar_sample, trace_distance_pure, PureState, SeededSampler};

/// Radii and random-phase size of the two-phase construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub j_r: usize,
    pub epsilon_r: f64,
    pub epsilon_p: f64,
    pub x: f64,
}

/// Ratio `eps_R / eps_P` defaulting to `max(1, D ln D)` with `D = 2(d-1)`.
pub fn default_x(d: usize) -> f64 {
    let big_d = 2.0 * (d as f64 - 1.0);
    (big_d * big_d.ln()).max(1.0)
}

/// Consecutive rejections after which packing stops: `max(1000, 10 J_R)`.
pub fn default_fail_streak(j_r: usize) -> usize {
    (10 * j_r).max(1000)
}

/// `eps_R = x eps / (1 + x)`, `eps_P = eps_R / x`,
/// `J_R = ceil(D / eps_R^D * ln(eps_R / eps_P))`.
pub fn covering_schedule(d: usize, epsilon: f64, x: f64) -> Result<Schedule> {
    if d < 2 {
        return Err(domain("d", d as f64, "[2, inf)"));
    }
    check_epsilon(epsilon)?;
    if !(x >= 1.0 && x.is_finite()) {
        return Err(domain("x", x, "[1, inf)"));
    }
    let big_d = 2 * (d as i32 - 1);
    let epsilon_r = x / (1.0 + x) * epsilon;
    // Exact by Sterbenz since eps_R >= eps/2, so eps_R + eps_P == eps.
    let epsilon_p = epsilon - epsilon_r;
    let j_r = (big_d as f64 / epsilon_r.powi(big_d) * x.ln()).ceil();
    Ok(Schedule {
        j_r: j_r.max(0.0) as usize,
        epsilon_r,
        epsilon_p,
        x,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstructionMeta {
    pub j_r: usize,
    pub j_p: usize,
    pub epsilon_r: f64,
    pub epsilon_p: f64,
    pub x: f64,
    pub seed: u64,
    pub fail_streak_limit: usize,
}

/// A labeled code book of pure states with a declared covering radius.
/// Labels are the element indices `0..len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoveringRepr", into = "CoveringRepr")]
pub struct Covering {
    dim: usize,
    radius: f64,
    meta: Option<ConstructionMeta>,
    elements: Vec<PureState>,
}

impl Covering {
    pub fn new(dim: usize, radius: f64, elements: Vec<PureState>) -> Result<Self> {
        Self::with_meta(dim, radius, elements, None)
    }

    pub fn with_meta(
        dim: usize,
        radius: f64,
        elements: Vec<PureState>,
        meta: Option<ConstructionMeta>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        check_epsilon(radius)?;
        if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        if let Some(m) = &meta {
            if m.j_r + m.j_p != elements.len() {
                return Err(Error::Malformed(format!(
                    "meta declares {} + {} elements, found {}",
                    m.j_r,
                    m.j_p,
                    elements.len()
                )));
            }
            if (m.epsilon_r + m.epsilon_p - radius).abs() > 1e-12 {
                return Err(Error::Malformed(format!(
                    "radius {radius} != eps_R + eps_P = {}",
                    m.epsilon_r + m.epsilon_p
                )));
            }
        }
        Ok(Self {
            dim,
            radius,
            meta,
            elements,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn meta(&self) -> Option<&ConstructionMeta> {
        self.meta.as_ref()
    }

    pub fn elements(&self) -> &[PureState] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, label: usize) -> Result<&PureState> {
        self.elements.get(label).ok_or(Error::UnknownLabel(label))
    }

    /// Distance from `phi` to the nearest element, with the smallest such label.
    /// Distances within `1e-12` of each other count as ties.
    pub fn nearest(&self, phi: &PureState) -> Result<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (label, e) in self.elements.iter().enumerate() {
            let t = trace_distance_pure(e, phi)?;
            if best.is_none_or(|(_, b)| t < b - 1e-12) {
                best = Some((label, t));
            }
        }
        best.ok_or(Error::EmptyBook)
    }
}

/// Builds an internal covering of radius `eps_R + eps_P = eps`.
///
/// Phase 1 draws `J_R` Haar states. Phase 2 draws candidates and keeps one
/// iff it is at least `eps_R + eps_P` from every phase-1 state and at least
/// `2 eps_P` from every kept candidate; it stops after `fail_streak_limit`
/// consecutive rejections.
pub fn build_internal_covering(
    d: usize,
    epsilon: f64,
    x: f64,
    fail_streak_limit: usize,
    sampler: &mut SeededSampler,
) -> Result<Covering> {
    let schedule = covering_schedule(d, epsilon, x)?;
    if fail_streak_limit == 0 {
        return Err(domain("fail_streak_limit", 0.0, "[1, inf)"));
    }
    let seed = sampler.seed();
    let random: Vec<PureState> = (0..schedule.j_r)
        .map(|_| haar_sample(d, sampler))
        .collect::<Result<_>>()?;

    let far_from_random = schedule.epsilon_r + schedule.epsilon_p;
    let far_from_packed = 2.0 * schedule.epsilon_p;
    let mut packed: Vec<PureState> = Vec::new();
    let mut streak = 0;
    while streak < fail_streak_limit {
        let candidate = haar_sample(d, sampler)?;
        let accept = random
            .iter()
            .all(|phi| trace_distance_pure(phi, &candidate).is_ok_and(|t| t >= far_from_random))
            && packed
                .iter()
                .all(|psi| trace_distance_pure(psi, &candidate).is_ok_and(|t| t >= far_from_packed));
        if accept {
            packed.push(candidate);
            streak = 0;
        } else {
            streak += 1;
        }
    }

    let meta = ConstructionMeta {
        j_r: random.len(),
        j_p: packed.len(),
        epsilon_r: schedule.epsilon_r,
        epsilon_p: schedule.epsilon_p,
        x,
        seed,
        fail_streak_limit,
    };
    let mut elements = random;
    elements.extend(packed);
    Covering::with_meta(d, epsilon, elements, Some(meta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub covered_fraction: f64,
    /// Largest nearest-element distance seen; 1 for an empty book.
    pub worst_gap: f64,
    pub num_samples: usize,
    pub std_error: f64,
}

impl CoverageReport {
    /// Report for precomputed nearest-element distances.
    pub fn from_gaps(gaps: &[f64], epsilon: f64) -> Self {
        let n = gaps.len().max(1) as f64;
        let hits = gaps.iter().filter(|&&g| g < epsilon).count();
        let worst_gap = gaps.iter().copied().fold(0.0, f64::max);
        Self::from_counts(hits, worst_gap, gaps.len(), n)
    }

    fn from_counts(hits: usize, worst_gap: f64, num_samples: usize, n: f64) -> Self {
        let p = hits as f64 / n;
        Self {
            covered_fraction: p,
            worst_gap,
            num_samples,
            std_error: (p * (1.0 - p) / n).sqrt(),
        }
    }

    fn empty(num_samples: usize) -> Self {
        Self {
            covered_fraction: 0.0,
            worst_gap: 1.0,
            num_samples,
            std_error: 0.0,
        }
    }
}

fn coverage_chunk(c: &Covering, epsilon: f64, n: usize, sampler: &mut SeededSampler) -> (usize, f64) {
    let mut hits = 0;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let phi = haar_sample(c.dim, sampler).expect("covering dim >= 1");
        let (_, gap) = c.nearest(&phi).expect("non-empty covering");
        if gap < epsilon {
            hits += 1;
        }
        worst = worst.max(gap);
    }
    (hits, worst)
}

/// Fraction of Haar-random states within `epsilon` of some book element.
pub fn coverage_verify(c: &Covering, epsilon: f64, num_samples: usize, sampler: &mut SeededSampler) -> CoverageReport {
    coverage_verify_parallel(c, epsilon, num_samples, sampler, 1)
}

/// [`coverage_verify`] split over `workers` deterministic sub-streams.
pub fn coverage_verify_parallel(
    c: &Covering,
    epsilon: f64,
    num_samples: usize,
    sampler: &mut SeededSampler,
    workers: usize,
) -> CoverageReport {
    if c.is_empty() {
        return CoverageReport::empty(num_samples);
    }
    let chunks = sampler.partitioned(num_samples, workers, |n, s| coverage_chunk(c, epsilon, n, s));
    let hits = chunks.iter().map(|c| c.0).sum();
    let worst = chunks.iter().map(|c| c.1).fold(0.0, f64::max);
    CoverageReport::from_counts(hits, worst, num_samples, num_samples.max(1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringBounds {
    pub lower: f64,
    pub upper: f64,
}

/// `(1/eps)^(2(d-1)) <= I_in <= 5 d ln d (1/eps)^(2(d-1))`.
pub fn internal_covering_bounds(d: usize, epsilon: f64) -> Result<CoveringBounds> {
    if d < 2 {
        return Err(domain("d", d as f64, "[2, inf)"));
    }
    check_epsilon(epsilon)?;
    let lower = (1.0 / epsilon).powi(2 * (d as i32 - 1));
    let df = d as f64;
    Ok(CoveringBounds {
        lower,
        upper: 5.0 * df * df.ln() * lower,
    })
}

/// `I_ex >= (1/(2 eps))^(2(d-1))`, strengthened to `(1/eps)^(2(d-1))` for `d >= 4`.
pub fn external_covering_lower_bound(d: usize, epsilon: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    check_half_epsilon(epsilon)?;
    let exponent = 2 * (d as i32 - 1);
    Ok(if d >= 4 {
        (1.0 / epsilon).powi(exponent)
    } else {
        (0.5 / epsilon).powi(exponent)
    })
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    label: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CoveringRepr {
    dim: usize,
    radius: f64,
    meta: Option<ConstructionMeta>,
    elements: Vec<ElementRepr>,
}

impl From<Covering> for CoveringRepr {
    fn from(c: Covering) -> Self {
        let elements = c
            .elements
            .iter()
            .enumerate()
            .map(|(label, e)| ElementRepr {
                label,
                re: e.amplitudes().iter().map(|z| z.re).collect(),
                im: e.amplitudes().iter().map(|z| z.im).collect(),
            })
            .collect();
        Self {
            dim: c.dim,
            radius: c.radius,
            meta: c.meta,
            elements,
        }
    }
}

impl TryFrom<CoveringRepr> for Covering {
    type Error = Error;

    fn try_from(r: CoveringRepr) -> Result<Self> {
        let mut elements = Vec::with_capacity(r.elements.len());
        for (i, e) in r.elements.into_iter().enumerate() {
            if e.label != i {
                return Err(Error::Malformed(format!(
                    "element {i} carries label {}; labels must be 0..n in order",
                    e.label
                )));
            }
            if e.re.len() != e.im.len() {
                return Err(Error::Malformed(format!("element {i}: re/im length mismatch")));
            }
            let amps = e
                .re
                .into_iter()
                .zip(e.im)
                .map(|(re, im)| num_complex::Complex64::new(re, im))
                .collect();
            elements.push(PureState::new(amps)?);
        }
        Covering::with_meta(r.dim, r.radius, elements, r.meta)
    }
}
