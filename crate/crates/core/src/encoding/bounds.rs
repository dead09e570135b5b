use serde::{Deserialize, Serialize};

use crate::ball::{check_epsilon, check_half_epsilon};
use crate::error::{domain, Result};

/// Bit-length bounds for the most compact encoder of a given kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitLengthBounds {
    pub lower_bits: f64,
    pub upper_bits: f64,
    /// `r(d, eps)` at the requested parameters.
    pub rate: f64,
}

/// `r(d, eps) = (d - 1) log2(1/eps)`.
pub fn rate(d: usize, epsilon: f64) -> f64 {
    (d as f64 - 1.0) * (1.0 / epsilon).log2()
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(domain("d", d as f64, "[2, inf)"));
    }
    Ok(())
}

fn overhead(d: usize) -> f64 {
    let df = d as f64;
    (5.0 * df * df.ln()).log2()
}

/// Deterministic encoders: `2 r(d, 2 eps)` below (`2 r(d, eps)` once
/// `d >= 4`) and `2 r(d, eps) + log2(5 d ln d)` above.
pub fn bit_length_bounds_deterministic(d: usize, epsilon: f64) -> Result<BitLengthBounds> {
    check_dim(d)?;
    check_half_epsilon(epsilon)?;
    let r = rate(d, epsilon);
    let lower_bits = if d >= 4 { 2.0 * r } else { 2.0 * rate(d, 2.0 * epsilon) };
    Ok(BitLengthBounds {
        lower_bits,
        upper_bits: 2.0 * r + overhead(d),
        rate: r,
    })
}

/// Probabilistic encoders: `r(d, eps) - log2 d` below and
/// `r(d, eps) + log2(5 d ln d)` above. The lower bound may be negative.
pub fn bit_length_bounds_probabilistic(d: usize, epsilon: f64) -> Result<BitLengthBounds> {
    check_dim(d)?;
    check_epsilon(epsilon)?;
    let r = rate(d, epsilon);
    Ok(BitLengthBounds {
        lower_bits: r - (d as f64).log2(),
        upper_bits: r + overhead(d),
        rate: r,
    })
}
