//! Numerical tools for approximate classical representations of pure
//! quantum states.
//!
//! - [`state`]: pure/mixed states, trace distance, fidelity, Haar sampling.
//! - [`ball`]: volumes of trace-distance balls on the pure-state manifold.
//! - [`covering`]: randomized internal coverings and covering-number bounds.
//! - [`encoding`]: deterministic and probabilistic encoders over a code book,
//!   the fidelity/trace-distance minimax check, and bit-length bounds.

pub mod ball;
pub mod covering;
pub mod encoding;
pub mod error;
pub mod state;

pub use error::{Error, Result};
