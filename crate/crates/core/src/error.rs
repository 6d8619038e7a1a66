use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u32),
    #[error("characteristic 2 is not supported (2 must be invertible)")]
    CharacteristicTwo,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field `{0}` (expected `fp:<p>` or `q`)")]
    FieldSyntax(String),
    #[error("cannot parse scalar `{0}`")]
    ScalarSyntax(String),

    #[error("invalid algebra presentation: {0}")]
    InvalidSpec(String),
    #[error("degree {degree} outside 1..={max_degree}")]
    DegreeOutOfRange { degree: usize, max_degree: usize },
    #[error("product degree {degree} exceeds truncation degree {max_degree}")]
    TruncationOverflow { degree: usize, max_degree: usize },
    #[error("word `{0}` is not normal")]
    NotNormal(String),
    #[error("cannot parse word `{0}`")]
    WordSyntax(String),

    #[error("operands belong to different algebras or fields")]
    SpecMismatch,
    #[error("work budget exceeded: dim A_{degree} = {dim} > {budget}")]
    BudgetExceeded { degree: usize, dim: u64, budget: u64 },
    #[error("f_{s} takes {expected} arguments, got {got}")]
    ArityMismatch { s: usize, expected: usize, got: usize },

    #[error("generating bound {bound} exceeds max degree {max_degree}")]
    BoundExceedsTruncation { bound: usize, max_degree: usize },
    #[error("subspace is not a Lie ideal: {0}")]
    NotALieIdeal(String),
    #[error("internal soundness failure: {0}")]
    InternalSoundnessFailure(String),
}
