use thiserror::Error;

use crate::geometry::certificate::CertificateFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: bad JSON, bad rational, inconsistent dimensions.
    #[error("input error: {0}")]
    Input(String),

    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaVersion { expected: u32, found: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("origin is not strictly interior")]
    OriginNotInterior,

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("point set is not full-dimensional")]
    Degenerate,

    #[error("singular matrix")]
    Singular,

    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),

    #[error("degenerate incidence: {0}")]
    DegenerateIncidence(String),

    #[error("oracle bounds exceeded: {points} points in dimension {dim} (limit {max_points} points, dimension {max_dim})")]
    OracleBoundsExceeded {
        dim: usize,
        points: usize,
        max_dim: usize,
        max_points: usize,
    },

    #[error("projective map is not admissible: {0}")]
    InadmissibleMap(String),

    #[error("ray scaling changed the combinatorial type: {0}")]
    TypeChange(CertificateFailure),

    #[error("normal transformation degenerated a facet: {0}")]
    FacetDegenerated(String),

    #[error("not a combinatorial cube")]
    NotACube,

    #[error("not a combinatorial crosspolytope")]
    NotACrosspolytope,

    #[error("polytopes are not normally equivalent")]
    NotNormallyEquivalent,

    #[error("degenerate segment for axis {0}")]
    DegenerateSegment(usize),

    #[error("no projective correspondence between the facets: {0}")]
    NoProjectiveCorrespondence(String),

    #[error("gluing search exhausted at parameter 2^-{0} without a convex-union certificate")]
    SearchExhausted(u32),

    #[error("certificate failure: {0}")]
    Certificate(CertificateFailure),

    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),

    #[error("polynomial division is not exact: {0}")]
    NonExactDivision(String),

    #[error("Dehn-Sommerville relations violated")]
    DehnSommervilleViolated,

    #[error("invalid f-vector: {0}")]
    InvalidFVector(String),

    #[error("bound violated at step {step}: {detail}")]
    BoundViolation { step: usize, detail: String },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("zero target coordinate {0} where a ratio is required")]
    ZeroTarget(usize),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of an exact geometric check, as opposed to bad input.
    pub fn is_certificate_failure(&self) -> bool {
        matches!(
            self,
            Error::Certificate(_)
                | Error::TypeChange(_)
                | Error::FacetDegenerated(_)
                | Error::InternalAssertion(_)
                | Error::SearchExhausted(_)
                | Error::BoundViolation { .. }
        )
    }
}

impl From<CertificateFailure> for Error {
    fn from(f: CertificateFailure) -> Self {
        Error::Certificate(f)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(format!("malformed JSON: {e}"))
    }
}
