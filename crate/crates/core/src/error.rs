use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("invalid invariant factors: {0}")]
    InvalidInvariants(String),
    #[error("malformed homomorphism: {0}")]
    MalformedHom(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group order {0} exceeds the supported maximum of 64")]
    GroupTooLarge(usize),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("invalid group action: {0}")]
    BadAction(String),
    #[error("invalid character: {0}")]
    BadCharacter(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("size budget exceeded: {what} needs {needed} matrix columns, limit {limit}")]
    BudgetExceeded {
        what: String,
        needed: usize,
        limit: usize,
    },
    #[error("unsupported degree {degree}: {reason}")]
    UnsupportedDegree { degree: i64, reason: String },
    #[error("cohomology class carries no representative cocycle")]
    MissingRepresentative,
    #[error("vector is not a cocycle: {0}")]
    NotACocycle(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("invalid local field parameters: {0}")]
    BadLocalField(String),
    #[error("isomorphism test bound exceeded: dimension {0} > {1}")]
    IsoBoundExceeded(usize, usize),
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
