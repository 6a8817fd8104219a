use thiserror::Error;

/// Errors produced by the symbol calculus, quantization and spectral layers.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Action-angle coordinates are undefined at the phase-space origin.
    #[error("action-angle coordinates are undefined at the origin")]
    OriginActionAngle,

    /// A symbol violates a structural invariant (reality, profile pairing, ...).
    #[error("ill-formed symbol: {0}")]
    IllFormedSymbol(String),

    /// An operation required a real-valued symbol.
    #[error("symbol is not real-valued: {0}")]
    NotRealSymbol(String),

    /// Quadrature node count below the exactness requirement.
    #[error("insufficient quadrature nodes: need at least {needed}, got {got}")]
    InsufficientNodes { needed: usize, got: usize },

    /// Doubling the node count moved a matrix entry by more than the tolerance.
    #[error(
        "quadrature did not converge on band {band}: max entry change {max_delta:.3e} > {tol:.3e}"
    )]
    QuadratureNonConvergence { band: i64, max_delta: f64, tol: f64 },

    /// Lemma-5.2-style modulation needs a non-constant angular part.
    #[error("no admissible modulation order: symbol is constant on the circle")]
    NoAdmissibleModulation,

    /// The spectrally filtered state vanished.
    #[error("empty spectral window: filtered state has norm {norm:.3e}")]
    EmptySpectralWindow { norm: f64 },

    /// No regular value with a positive derivative margin could be selected.
    #[error("no regular value with positive margin found: {0}")]
    NoRegularValue(String),

    /// The pointwise Mourre inequality failed where it must hold.
    #[error("symbol Mourre inequality failed at theta = {theta:.6}: lhs {lhs:.3e} < rhs {rhs:.3e}")]
    MourreCheckFailed { theta: f64, lhs: f64, rhs: f64 },

    /// A matrix that must be Hermitian is not.
    #[error("matrix is not Hermitian: {0}")]
    NonHermitian(String),

    /// A fit window overlaps truncation-contaminated samples or is too thin.
    #[error("invalid fit window: {0}")]
    InvalidFitWindow(String),

    /// Configuration or input validation failure.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
