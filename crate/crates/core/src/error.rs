use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("rational value is not defined modulo {0}")]
    BadPrime(u64),

    #[error("subspace has dimension 0")]
    EmptySubspace,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid variety: {0}")]
    InvalidVariety(String),

    #[error("germ is not immersed: first direction vanishes")]
    DegenerateGerm,

    #[error("characteristic {prime} too small for degree {degree} and jet length {jet_length}")]
    CharacteristicTooSmall {
        prime: u64,
        degree: usize,
        jet_length: usize,
    },

    #[error("scheme pieces have overlapping supports")]
    OverlappingSupports,

    #[error("no admissible scheme of degree {0} for the requested piece mix")]
    InadmissibleDegree(usize),

    #[error("family basis has generic rank {rank} but {len} vectors")]
    GenericRankDrop { rank: usize, len: usize },

    #[error("family degree {family} differs from limit degree {limit}")]
    NonFlat { family: usize, limit: usize },

    #[error("malformed family: {0}")]
    MalformedFamily(String),

    #[error("method not applicable: {0}")]
    MethodNotApplicable(String),

    #[error("method constant violated: rank {observed} on the variety exceeds k = {declared}")]
    KConstantViolated { declared: usize, observed: usize },

    #[error("method constant k is zero on this variety")]
    VacuousMethod,

    #[error("parse error: {0}")]
    Parse(String),
}
