use alloc::string::String;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{requested} qubits exceeds the dense limit of {cap}")]
    QubitCap { requested: usize, cap: usize },

    #[error("index {index} out of range for {len} modes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("operator requires two distinct sites, got {0} twice")]
    EqualIndices(usize),

    #[error("operator is not Hermitian")]
    NonHermitian,

    #[error("rotation generator must have unit coefficient, got {0}")]
    NonUnitCoefficient(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported deuteron level count {0} (only 2 and 3 are defined)")]
    UnsupportedLevelCount(usize),

    #[error("no basis states carry charge {charge} on {n_sites} sites")]
    EmptySector { charge: i64, n_sites: usize },

    #[error("requested energy rank {rank} but sector has only {size} states")]
    RankOutOfRange { rank: usize, size: usize },

    #[error("operator does not conserve particle number")]
    NotNumberConserving,

    #[error("translation by {shift} sites leaves the open chain")]
    OffLattice { shift: i64 },

    #[error("grid must be non-empty and uniformly spaced")]
    NonUniformGrid,

    #[error("ensemble trace is zero; observable undefined")]
    ZeroTrace,

    #[error("state has weight outside the decomposed subspace")]
    OutsideSubspace,

    #[error("terms in an evolution group do not commute")]
    NonCommutingGroup,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = core::result::Result<T, Error>;
