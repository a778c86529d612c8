use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("algebra mismatch: {0}")]
    SpecMismatch(String),
    #[error("invalid assignment plan: {0}")]
    InvalidPlan(String),
    #[error("representation is not multiplicative on basis pair ({0}, {1})")]
    NotMultiplicative(usize, usize),
    #[error("representation is not star-compatible on basis element {0}")]
    NotStarCompatible(usize),
    #[error("representation is not injective")]
    NotInjective,
    #[error("operator is not in the image of the representation")]
    NotInImage,
    #[error("real structure required")]
    MissingRealStructure,
    #[error("grading required")]
    MissingGrading,
    #[error("grading eigenspaces have unequal dimensions {0} and {1}")]
    UnequalEigenspaces(usize, usize),
    #[error("invalid twist: {0}")]
    InvalidTwist(String),
    #[error("twist is not compatible with the real structure: {0}")]
    Incompatible(String),
    #[error("signs {0} are not in the even KO table")]
    NotInKoTable(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
