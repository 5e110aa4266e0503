use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector length {found} does not match vertex count {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("dimension vector entries must be nonnegative")]
    NegativeEntry,
    #[error("vertex {0} carries a loop; reflections are only defined at loop-free vertices")]
    LoopAtVertex(usize),
    #[error("the zero vector is not allowed here")]
    ZeroVector,
    #[error("dimension vector is not sincere")]
    NotSincere,
    #[error("root pool has {size} elements, above the cap of {cap}")]
    PoolTooLarge { size: usize, cap: usize },
    #[error("operation requires lambda = 0")]
    NonzeroLambda,
    #[error("invalid representation type: {0}")]
    InvalidRepType(String),
    #[error("invalid top-type: {0}")]
    InvalidTopType(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("form is not skew-symmetric")]
    NotSkew,
    #[error("form is degenerate")]
    Degenerate,
    #[error("form is not balanced: fails for a generator of block {block}")]
    Unbalanced { block: usize },
    #[error("subspace is not a sub-bimodule")]
    NotSubBimodule,
    #[error("sub-bimodule is not simple")]
    NotSimple,
    #[error("subspace is not maximal isotropic: {0}")]
    NotMaximalIsotropic(String),
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("lambda . alpha = {0} is nonzero, so the fibre is empty by the trace identity")]
    EmptyByTrace(String),
    #[error("no convergence after {iterations} iterations (best residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("invalid conjugacy class: {0}")]
    InvalidClass(String),
    #[error("class sizes differ: {0}")]
    ClassSizeMismatch(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
