//! Numerical tolerances used for validation, in one place.

/// Tolerance record. [`Tolerances::DEFAULT`] holds the library defaults; the
/// `*_with` constructors across the crate accept a custom record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `| <psi|psi> - 1 |` for pure states.
    pub norm: f64,
    /// Elementwise Hermiticity of density matrices.
    pub hermitian: f64,
    /// Smallest admissible density-matrix eigenvalue is `-psd`.
    pub psd: f64,
    /// `| tr rho - 1 |`.
    pub trace: f64,
    /// `max |U^dagger U - I|` accepted when wrapping a matrix as a unitary.
    pub unitary: f64,
    /// Gram-matrix agreement required by unitary completion.
    pub gram: f64,
    /// Orthonormality of measurement bases.
    pub basis: f64,
    /// Residual norm below which a Gram–Schmidt candidate is skipped.
    pub gram_schmidt_skip: f64,
    /// Embedding overlap agreement.
    pub embedding: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        norm: 1e-12,
        hermitian: 1e-12,
        psd: 1e-12,
        trace: 1e-12,
        unitary: 1e-10,
        gram: 1e-10,
        basis: 1e-12,
        gram_schmidt_skip: 1e-8,
        embedding: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
