use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("size budget exceeded: {0}")]
    SizeBudgetExceeded(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("field of degree {0} over its prime field is not a quadratic extension")]
    OddExtension(u32),
    #[error("field F_{small} does not embed in F_{large}")]
    NotEmbeddable { small: u32, large: u32 },
    #[error("modulus {found:?} does not match the canonical modulus {expected:?}")]
    ModulusMismatch { expected: Vec<u32>, found: Vec<u32> },

    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero vector is not a projective point")]
    ZeroVector,
    #[error("{0} is not contained in {1}")]
    ContainmentViolated(String, String),

    #[error("polynomial arity mismatch: expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("the zero polynomial does not define a hypersurface")]
    ZeroPolynomial,
    #[error("term exponents sum to {got}, expected degree {expected}")]
    NotHomogeneous { expected: u32, got: u32 },

    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("Hermitian form is degenerate")]
    DegenerateForm,
    #[error("point is not on the variety")]
    PointNotOnVariety,
    #[error("point is not on the surface")]
    PointNotOnSurface,
    #[error("trichotomy violated: {0}")]
    TrichotomyViolated(String),
    #[error("polynomial is not a quadric")]
    NotAQuadric,

    #[error("only {found} non-tangent hyperplanes through every candidate plane, need {needed}")]
    InsufficientNonTangent { needed: usize, found: usize },
    #[error("only {found} suitable planes through the secant line, need {needed}")]
    InsufficientPlanes { needed: usize, found: usize },
    #[error("the cone vertex lies on the base plane")]
    VertexOnBase,
    #[error("no base curve with the required meeting pattern was found")]
    BaseCurveSearchFailed,
    #[error("construction not found: {0}")]
    ConstructionNotFound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate mismatch: claimed {claimed}, enumerated {counted}")]
    CertificateMismatch { claimed: u64, counted: u64 },

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
