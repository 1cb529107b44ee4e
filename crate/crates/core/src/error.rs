use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),

    #[error("malformed graph spec `{0}`")]
    MalformedSpec(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("size out of range for {family}: {detail}")]
    SizeOutOfRange { family: &'static str, detail: String },

    #[error("vertex counts differ ({0} vs {1})")]
    VertexCountMismatch(usize, usize),

    #[error("edge mask width {found} does not match edge count {expected}")]
    MaskWidth { expected: usize, found: usize },

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("{what} is {value}, above the supported limit of {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("level {level} exceeds the edge count {edges}")]
    InvalidLevel { level: usize, edges: usize },

    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("classical bound {0} outside (0, 1]")]
    InvalidLhvBound(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
