use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },

    #[error("size cap exceeded: {what} = {value} (max {max})")]
    SizeCap {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("operator is not a symmetry of the state (dominant transfer eigenvalue modulus {0:.6})")]
    NotASymmetry(f64),

    #[error("state trace is {0}, expected 1")]
    NotUnitTrace(f64),

    #[error(
        "channel is not trace-scaling: sum of weighted K^dag K deviates from a multiple of identity by {0:.3e}"
    )]
    NotTraceScaling(f64),

    #[error("unknown catalog noise id {0} (expected 1-4)")]
    UnknownNoise(u8),

    #[error("inconsistent measurement record: {0}")]
    InconsistentRecord(String),

    #[error("kraus file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
