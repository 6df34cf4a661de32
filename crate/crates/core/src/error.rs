use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed cycle notation {text:?}: {reason}")]
    MalformedCycle { text: String, reason: String },

    #[error("point {point} appears more than once in {text:?}")]
    RepeatedPoint { text: String, point: usize },

    #[error("point {point} is out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("permutation degree must be at least 1")]
    ZeroDegree,

    #[error("generator of degree {found} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("group closure exceeds the order cap of {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("unknown group family {0:?} (expected cyclic, dihedral or sym3)")]
    UnknownFamily(String),

    #[error("invalid parameter {param} for group family {family}")]
    InvalidFamilyParam { family: String, param: i64 },

    #[error("irreducible decomposition did not separate after seeds {seeds:?}: {reason}")]
    IrrepDecomposition { seeds: Vec<u64>, reason: String },

    #[error("representation check failed: {0}")]
    RepresentationCheck(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("base graph is disconnected")]
    Disconnected,

    #[error("directed base graphs are only supported by the character method")]
    DirectedUnsupported,

    #[error("objects belong to different groups")]
    GroupMismatch,

    #[error("group algebra coefficient {value} of element {element} is not integral")]
    NonIntegralCoefficient { element: usize, value: f64 },

    #[error("eigendecomposition did not converge for a {size}x{size} matrix")]
    NonConvergence { size: usize },

    #[error("eigendecomposition residual {residual:e} exceeds tolerance {tol:e}")]
    EigenResidual { residual: f64, tol: f64 },

    #[error("rank identity violated: sum of dim*rank is {sum}, expected index {index}")]
    RankIdentity { sum: usize, index: usize },

    #[error(
        "eigenvector matrix of irrep {irrep} is singular (smallest singular value {sigma_min:e})"
    )]
    SingularEigenvectors { irrep: usize, sigma_min: f64 },

    #[error("only {found} independent eigenvector columns found, expected {expected}")]
    EigenbasisRank { found: usize, expected: usize },

    #[error("power-sum system of size {0} is too large (limit 32)")]
    TooManyPowerSums(usize),

    #[error("power-sum roundtrip failed, worst relative residual {worst:e}")]
    PowerSumRoundtrip { worst: f64, residuals: Vec<f64> },
}
