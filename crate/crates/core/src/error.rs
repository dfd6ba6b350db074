use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("empty language at depth {depth}")]
    EmptyLanguage { depth: usize },
    #[error("dead end: symbol {symbol} has no admissible successor")]
    DeadEnd { symbol: u8 },
    #[error("word is not admissible: {0}")]
    InadmissibleWord(String),
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("instance too large: depth {depth} has {count} cylinders, cap is {cap}")]
    TooLarge { depth: usize, count: u64, cap: u64 },
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("non-ergodic chain")]
    NonErgodic,
    #[error("delta out of range: {0} is not in (0, 1)")]
    DeltaOutOfRange(f64),
    #[error("depth cap {depth_cap} is below the minimal cover depth {required}")]
    DepthCapTooSmall { depth_cap: usize, required: usize },
    #[error("bracket not found: {0}")]
    BracketNotFound(String),
    #[error("potential not uniformly expanding: minimal growth {growth}")]
    NotExpanding { growth: f64 },
    #[error("non-hyperbolic: Lyapunov bracket [{lo}, {hi}] touches 0")]
    NonHyperbolic { lo: f64, hi: f64 },
    #[error("not average conformal: Lyapunov defect {defect} exceeds {tolerance}")]
    NotAverageConformal { defect: f64, tolerance: f64 },
    #[error("insufficient generic samples: {passed} passed the diagnostics")]
    InsufficientGenericSamples { passed: usize },
    #[error("branch separation violated: {0}")]
    SeparationViolated(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
