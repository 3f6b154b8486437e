use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("potential sample is negative ({value} at x1={x1}, x2={x2})")]
    NegativeValue { x1: f64, x2: f64, value: f64 },

    #[error("x1 grid is empty")]
    EmptyGrid,

    #[error("x1 grid is not strictly increasing at index {0}")]
    UnorderedGrid(usize),

    #[error("quadrature did not reach tolerance after {subdivisions} subdivisions (estimate {estimate}, error {error})")]
    QuadratureFailure {
        subdivisions: usize,
        estimate: f64,
        error: f64,
    },

    #[error("unknown potential family '{0}'")]
    UnknownFamily(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("flux {psi} is an integer; the estimate requires non-integer flux")]
    IntegerFlux { psi: f64 },

    #[error("node counts did not stabilise under step refinement: {counts:?}")]
    NonConvergence { counts: Vec<usize> },

    #[error("singular start {delta} is not below truncation {truncation}")]
    SingularitySetup { delta: f64, truncation: f64 },

    #[error("LDL^T factorization broke down at pivot {index} (|d| = {pivot:e})")]
    FactorizationBreakdown { index: usize, pivot: f64 },

    #[error("bracket [{lo}, {hi}] does not straddle eigenvalue index {index} (counts {count_lo}, {count_hi})")]
    BracketInvalid {
        index: usize,
        lo: f64,
        hi: f64,
        count_lo: usize,
        count_hi: usize,
    },

    #[error("grid of {requested} unknowns exceeds cap {cap}")]
    GridCap { requested: usize, cap: usize },

    #[error("counters disagree on mode {k}: prufer={prufer}, lattice={lattice}")]
    CounterDisagreement { k: i64, prufer: usize, lattice: usize },

    #[error("mode {k}: {source}")]
    Mode {
        k: i64,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::QuadratureFailure { .. }
            | Error::NonConvergence { .. }
            | Error::FactorizationBreakdown { .. }
            | Error::CounterDisagreement { .. }
            | Error::BracketInvalid { .. } => true,
            Error::Mode { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

impl Error {
    /// Short snake_case name of the variant, for report rows.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NegativeValue { .. } => "negative_value",
            Error::EmptyGrid => "empty_grid",
            Error::UnorderedGrid(_) => "unordered_grid",
            Error::QuadratureFailure { .. } => "quadrature_failure",
            Error::UnknownFamily(_) => "unknown_family",
            Error::InvalidParams(_) => "invalid_params",
            Error::IntegerFlux { .. } => "integer_flux",
            Error::NonConvergence { .. } => "non_convergence",
            Error::SingularitySetup { .. } => "singularity_setup",
            Error::FactorizationBreakdown { .. } => "factorization_breakdown",
            Error::BracketInvalid { .. } => "bracket_invalid",
            Error::GridCap { .. } => "grid_cap",
            Error::CounterDisagreement { .. } => "counter_disagreement",
            Error::Mode { source, .. } => source.kind(),
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
