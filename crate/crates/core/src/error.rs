use thiserror::Error;

/// Errors surfaced by the selection and certification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("operation requires a nonzero matrix")]
    ZeroMatrix,
    #[error("brute-force norm requires at most {cap} columns, got {got}")]
    TooLarge { cap: usize, got: usize },
    #[error("selected columns are rank deficient (rank {rank} < {wanted})")]
    RankDeficient { rank: usize, wanted: usize },
    #[error("matrix is not an orthogonal projector")]
    NotAProjector,
    #[error("requested size {r} exceeds rank {rank}")]
    RankTooSmall { r: usize, rank: usize },
    #[error("sign-vector family too small for target {target}")]
    NotEnoughVectors { target: usize },
    #[error("shattering dimension {dim} exceeds cap {cap}")]
    DimTooLarge { dim: usize, cap: usize },
    #[error("measure optimization did not converge after {iters} iterations")]
    NoConvergence { iters: usize },
    #[error("columns are not linearly independent")]
    NotFullColumnRank,
    #[error("k = {k} must be smaller than rank {rank}")]
    KTooLarge { k: usize, rank: usize },
    #[error("polynomial is not real-rooted (max imaginary part {imag:e})")]
    NotRealRooted { imag: f64 },
    #[error("the two characteristic-polynomial routes disagree (rel err {rel:e})")]
    IdentityMismatch { rel: f64 },
    #[error("bivariate interpolation is ill conditioned")]
    InterpolationIllConditioned,
    #[error("polynomial root finding failed")]
    RootFindingFailure,
    #[error("bound not applicable: {reason}")]
    NotApplicable { reason: String },
    #[error("subset enumeration too large: {count} > {cap}")]
    TooManySubsets { count: u64, cap: u64 },
    #[error("unknown generator kind {0:?}")]
    UnknownGenerator(String),
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
