//! Numerical continuous ridgelet analysis: the ridgelet transform and its
//! companions (Radon transform, dual Radon transform, 1-D continuous wavelet
//! transform) on sampled or analytic inputs, together with the reconstruction,
//! Parseval, duality, factorization, and desingularization identities as
//! tolerance-checked computations.
//!
//! The crate is policy-free: every check returns the two sides of an identity
//! and their gap, and callers decide what tolerance to enforce.

pub mod activation;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod numeric;
pub mod radon;
pub mod ridgelet;
pub mod wavelet;

pub use error::{Result, TransformError};

/// The two sides of a checked identity. Callers decide what gap to accept.
#[derive(Debug, Clone, Copy)]
pub struct IdentityCheck {
    pub lhs: num_complex::Complex64,
    pub rhs: num_complex::Complex64,
}

impl IdentityCheck {
    /// Relative gap `|lhs - rhs| / max(|lhs|, |rhs|)`, safe at zero.
    pub fn gap(&self) -> f64 {
        let scale = self.lhs.norm().max(self.rhs.norm()).max(1e-300);
        (self.lhs - self.rhs).norm() / scale
    }
}
