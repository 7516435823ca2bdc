use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a positive integer, got {0}")]
    NotPositive(String),
    #[error("negative input {0}")]
    Negative(String),
    #[error("modulus must be odd, got {0}")]
    EvenModulus(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("modulus {0} does not fit the 63-bit fast path")]
    ModulusTooLarge(String),
    #[error("tuples need at least 2 coordinates, got {0}")]
    TooFewCoordinates(usize),
    #[error("coordinate index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("({0}) is not a solution of the fair-game equation")]
    NotASolution(String),
    #[error("trivial game: fewer than 2 balls")]
    TrivialGame,
    #[error("({0}) is a trivial 3-color game")]
    TrivialTernaryGame(String),
    #[error("({0}) is not a fair game")]
    NotFair(String),
    #[error("factor pair ({b}, {c}) does not match J = {j}")]
    FactorMismatch { b: String, c: String, j: String },
    #[error("{0} is not a member of C3")]
    NotInC3(u64),
    #[error("coordinate {0} must exceed 1")]
    CoordinateTooSmall(u64),
    #[error("not a point of w1^2 + w2^2 - w3^2 = -3: ({0})")]
    NotLorentzian(String),
    #[error("Lorentz point ({0}) has even second coordinate; swap w1 and w2 first")]
    EvenSecondCoordinate(String),
    #[error("density is undefined at limit 0")]
    ZeroLimit,
    #[error("bag total {0} exceeds the simulator's 64-bit range")]
    BagTooLarge(String),
    #[error("square-root certificate does not square to -3 modulo {0}")]
    BadCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
