use thiserror::Error;

/// Errors raised by the exact-arithmetic, geometry and localization layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator vanishes identically under the substitution t2 = {rho} t1")]
    DegenerateDirection { rho: String },

    #[error("pole of order {order} at z = 0: no non-equivariant limit")]
    Pole { order: u32 },

    #[error("generic directions disagree: {first} vs {second}")]
    DirectionDisagreement { first: String, second: String },

    #[error("ran out of generic directions after {tried} attempts")]
    NoGenericDirection { tried: usize },

    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("box ({i}, {j}) lies outside the Young diagram")]
    BoxOutside { i: usize, j: usize },

    #[error("zero tangent weight at a fixed point")]
    ZeroWeight,

    #[error("malformed fan: {0}")]
    MalformedFan(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("value {0} is not an integer")]
    NotInteger(String),

    #[error("missing variable {0} in the invariant vector")]
    MissingVariable(String),

    #[error("rank-deficient system: monomials {monomials:?} are not determined by the samples")]
    RankDeficient { monomials: Vec<String> },

    #[error("nonzero residual on sample {sample}: fitted {fitted}, computed {computed}")]
    Residual {
        sample: usize,
        fitted: String,
        computed: String,
    },

    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
