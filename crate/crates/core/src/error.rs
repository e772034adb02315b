use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} outside 1..=255")]
    ModulusOutOfRange(i64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("level {0} is below 3")]
    LevelTooSmall(u32),
    #[error("level {0} is not a prime power")]
    NotPrimePower(u32),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("matrix is not symplectic mod {0}")]
    NotSymplectic(u32),
    #[error("generator {index} is not symplectic mod {level}")]
    NonSymplecticGenerator { index: usize, level: u32 },
    #[error("closure exceeded the ceiling of {ceiling} orbit points (chain depth reached: {depth})")]
    CeilingExceeded { ceiling: usize, depth: usize },
    #[error("subgroup is not contained in the ambient group")]
    NotSubgroup,
    #[error("value {0} is below 1")]
    BelowOne(String),
    #[error("the subgroup does not contain -1")]
    MissingCenter,
    #[error("invalid line: {0}")]
    InvalidLine(String),
    #[error("invalid triple point: {0}")]
    InvalidTriple(String),
    #[error("subgroups are not complementary orthogonal planes")]
    NotComplementary,
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("point is the zero vector")]
    ZeroVector,
    #[error("point is not on the quartic")]
    NotOnQuartic,
    #[error("point is singular on the quartic")]
    SingularPoint,
    #[error("permutation does not stabilize the point")]
    NotStabilizing,
    #[error("permutation cycle type {0} is not one of the classified types")]
    UnlistedType(String),
    #[error("degenerate tangent computation: {0}")]
    DegenerateTangent(String),
    #[error("matrix fails the involution preconditions: {0}")]
    NotInvolution(String),
    #[error("gcd of the normal-form parameters is zero")]
    DegenerateGcd,
    #[error("factors {0} and {1} are not coprime")]
    NotCoprime(u32, u32),
    #[error("prime {0} is below 5")]
    PrimeTooSmall(u32),
    #[error("field mismatch: Q(zeta_{0}) vs Q(zeta_{1})")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("result is not an integer: {0}")]
    NotIntegral(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
