use thiserror::Error;

/// Errors surfaced by scheme validation, basis construction, operator
/// assembly, and the numerical solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A level scheme violates one of its structural invariants.
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    /// A requested pair-number sector does not exist for the scheme.
    #[error("sector {sector} out of range 0..={max}")]
    SectorOutOfRange { sector: u32, max: u32 },

    /// Two operators or states were combined over different bases.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    /// An operation demanded a basis kind (sector vs unrestricted) it did not get.
    #[error("{0}")]
    BasisKind(String),

    /// A spectral parameter landed on (or too close to) a pole of the
    /// parametrized operator or equation system.
    #[error("parameter {value} within {tol} of pole {pole}")]
    PoleProximity { value: String, pole: String, tol: f64 },

    /// Dense diagonalization refused a sector larger than the configured cap.
    #[error("sector dimension {dim} exceeds dense cap {cap}; use a smaller scheme")]
    DimensionCap { dim: usize, cap: usize },

    /// A Bethe product state collapsed to the zero vector, which signals an
    /// invalid or degenerate root set.
    #[error("Bethe state is zero: {0}")]
    ZeroState(String),

    /// A numerical identity that must hold failed beyond tolerance.
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
