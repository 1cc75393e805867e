use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),

    #[error("value {value} is outside the carrier of semiring `{semiring}`")]
    Carrier { semiring: String, value: String },

    #[error("semiring `{semiring}` has no {what}")]
    Capability { semiring: String, what: &'static str },

    #[error("length mismatch in {what}: {left} vs {right}")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("mixed key tags on {axis} axis: {first} and {second}")]
    MixedKeyTags {
        axis: &'static str,
        first: &'static str,
        second: &'static str,
    },

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("duplicate key `{0}`")]
    DuplicateKey(String),

    #[error("predicate `{name}` returned {got}, expected 0 or 1")]
    PredicateContract { name: String, got: String },

    #[error("aggregator `{name}`: {reason}")]
    AggregatorContract { name: String, reason: String },

    #[error("row function `{name}` produced {got}, outside its declared output kind")]
    FunctionOutput { name: String, got: String },

    #[error("column name collision on `{0}`")]
    ColumnCollision(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("plan leaf `{0}` has no statistics")]
    MissingStats(String),

    #[error("plan leaf `{0}` has no data")]
    MissingData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
