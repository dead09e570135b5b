//! Upper bounds on the volume of balls with mixed centers.
//!
//! `f_rho(psi)` lower-bounds `T(psi, rho)` by pinching `psi - rho` onto the
//! plane spanned by `psi` and the top eigenvector of `rho`. Integrating the
//! resulting ball condition over the Haar measure gives `g_{d,eps}(p0)`,
//! which has a closed form for `d = 4`.

use super::{check_half_epsilon, quadrature};
use crate::error::{domain, Error, Result};
use crate::state::{check_dims, DensityMatrix, PureState};

const PARALLEL_OVERLAP: f64 = 1.0 - 1e-12;
const QUAD_ABS_TOL: f64 = 1e-300;
const QUAD_REL_TOL: f64 = 1e-12;
const QUAD_MAX_PANELS: usize = 1_000_000;

/// Lower bound on `T(psi, rho)` built from the largest eigenvalue `p0` of
/// `rho`, its eigenvector `|0>`, and `q = <0_perp|rho|0_perp>` where
/// `|0_perp>` completes `|0>` to a basis of `span{|0>, |psi>}`.
pub fn f_lower_bound(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    check_dims(rho.dim(), psi.dim())?;
    let (p0, top) = rho.top_eigenpair();
    let c = top.inner(psi)?;
    let overlap = c.norm_sqr();
    if overlap > PARALLEL_OVERLAP {
        return Ok(1.0 - p0);
    }
    let perp = PureState::normalized(
        (psi.amplitudes() - top.amplitudes() * c)
            .iter()
            .copied()
            .collect(),
    )?;
    let q = perp.expectation(rho.matrix());
    let radicand = (1.0 + p0 - q).powi(2) - 4.0 * (p0 - q) * overlap;
    Ok(0.5 * radicand.max(0.0).sqrt() + 0.5 * (1.0 - p0 - q))
}

/// `g_{d,eps}(p0) = (d-2) * int_0^1 (1-x)^(d-3) delta((1-p0) x)^(2(d-1)) dx`
/// with `delta(q)^2 = (eps + q)(p0 + eps - 1) / (p0 - q)`.
///
/// Returns 0 when `p0 <= 1 - eps` (the ball is then empty) and
/// `eps^(2(d-1))` at `p0 = 1`.
pub fn g_integral(d: usize, epsilon: f64, p0: f64) -> Result<f64> {
    if d < 4 {
        return Err(domain("d", d as f64, "[4, inf)"));
    }
    check_half_epsilon(epsilon)?;
    if !(0.0..=1.0).contains(&p0) {
        return Err(domain("p0", p0, "[0, 1]"));
    }
    if p0 <= 1.0 - epsilon {
        return Ok(0.0);
    }
    let n = d as i32 - 1;
    if p0 == 1.0 {
        return Ok(epsilon.powi(2 * n));
    }
    let shift = p0 + epsilon - 1.0;
    let spread = 1.0 - p0;
    let integrand = |x: f64| {
        let q = spread * x;
        let delta_sq = (epsilon + q) * shift / (p0 - q);
        (d as f64 - 2.0) * (1.0 - x).powi(d as i32 - 3) * delta_sq.powi(n)
    };
    let r = quadrature::integrate(integrand, 0.0, 1.0, QUAD_ABS_TOL, QUAD_REL_TOL, QUAD_MAX_PANELS);
    Ok(r.value)
}

/// The coefficients `a = (2 p0 - 1)/(eps + p0)` and `b = p0/(eps + p0)`
/// of the `d = 4` closed form.
pub fn g4_coefficients(epsilon: f64, p0: f64) -> (f64, f64) {
    ((2.0 * p0 - 1.0) / (epsilon + p0), p0 / (epsilon + p0))
}

/// `(1 - ln(1+t)/t) / t`, stable as `t -> 0`.
fn log_ratio_defect(t: f64) -> f64 {
    if t.abs() < 1e-3 {
        // 1/2 - t/3 + t^2/4 - ...
        (0..8).rev().fold(0.0, |acc, k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc * t + sign / (k as f64 + 2.0)
        })
    } else {
        (1.0 - t.ln_1p() / t) / t
    }
}

/// Closed form of `g_{4,eps}(p0)` on the open interval `1 - eps < p0 < 1`.
pub fn g4_closed_form(epsilon: f64, p0: f64) -> Result<f64> {
    check_half_epsilon(epsilon)?;
    let lo = 1.0 - epsilon;
    if p0 == lo || p0 == 1.0 {
        return Err(Error::Endpoint(p0));
    }
    if !(p0 > lo && p0 < 1.0) {
        return Err(domain("p0", p0, "(1 - epsilon, 1)"));
    }
    let (a, b) = g4_coefficients(epsilon, p0);
    // With t = (b - a)/a the log term reads 3(a+1)/a^2 * (1 - ln(1+t)/t)/t.
    let t = (1.0 - p0) / (2.0 * p0 - 1.0);
    let rational = (1.0 - 6.0 * b - a * b * b) / (2.0 * a * b * b);
    let log_term = 3.0 * (a + 1.0) / (a * a) * log_ratio_defect(t);
    Ok(2.0 * (p0 + epsilon - 1.0).powi(3) * (rational + log_term))
}
