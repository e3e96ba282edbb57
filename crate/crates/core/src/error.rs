use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("sublattice and hyperplane lattice span different rational subspaces")]
    RankMismatch,
    #[error("invalid GIT datum: {0}")]
    InvalidDatum(String),
    #[error("anticone {0} is not minimal")]
    NotMinimal(String),
    #[error("stability vectors lie in the same chamber")]
    SameChamber,
    #[error("stability vectors are not separated by exactly one wall: {0}")]
    NotAdjacent(String),
    #[error("wall crossing is not crepant")]
    NotCrepant,
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("root-of-unity filter base must be a single monomial")]
    BaseNotMonomial,
    #[error("geometric quotient needs l >= 1, got {0}")]
    NonpositiveL(i64),
    #[error("exponent denominator {0} does not divide root order {1}")]
    DenominatorNotDividingL(i64, u64),
    #[error("class is not admissible at fixed point {0}")]
    NotAdmissible(String),
    #[error("denominator vanished at the chosen specialization")]
    DivisionByZeroAtSpecialization,
    #[error("Euler class vanished at the chosen specialization")]
    EulerClassVanishes,
    #[error("transform matrix stayed singular after {0} resamplings")]
    SingularAfterResampling(usize),
    #[error("character does not belong to the fixed point: {0}")]
    CharacterMismatch(String),
    #[error("class carries no global expression")]
    MissingGlobalExpression,
    #[error("wall lattice not generated by the wall characters (index {0})")]
    SaturationFailure(u64),
    #[error("arithmetic overflow in exponent bookkeeping")]
    Overflow,
}
