use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lens space L({p},{q}): p must be at least 2 and gcd(q,p) must be 1")]
    InvalidLensSpace { p: i64, q: i64 },

    #[error("invalid simple knot: k = {k} is 0 mod {p}")]
    InvalidKnot { p: u64, k: i64 },

    #[error("K({p},{q},{k}) is not primitive: gcd(k,p) = {gcd}")]
    NotPrimitive { p: u64, q: u64, k: u64, gcd: u64 },

    #[error("{value} is not invertible mod {modulus}")]
    NotInvertible { value: u64, modulus: u64 },

    #[error("surgery coefficient {m} is not admissible: need m != 0 and m = {required} (mod {p})")]
    InvalidCoefficient { m: i64, required: u64, p: u64 },

    #[error("polynomial division by t^{p} - 1 left a nonzero remainder")]
    DivisionNotExact { p: u64 },

    #[error("p = {p} exceeds the arithmetic word budget {budget}")]
    ResourceLimit { p: u64, budget: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("checkpoint corrupt: {0}")]
    CheckpointCorrupt(String),

    #[error("checkpoint parameters do not match this invocation: {0}")]
    ParameterMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
