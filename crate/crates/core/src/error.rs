use thiserror::Error;

pub type Result<T, E = PercError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum PercError {
    /// A ball or window grew past the configured vertex budget.
    #[error("vertex budget of {limit} exceeded while expanding radius {radius}")]
    Budget { limit: usize, radius: u64 },

    /// An event needs a window that contains a larger ball than was sampled.
    #[error("window too small: need a window containing B(v, {needed}), center is at distance {offset} in a window of radius {window}")]
    WindowTooSmall { needed: u64, offset: u64, window: u64 },

    #[error("vertex is outside the sampled window")]
    OutOfWindow,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: edge weight must be a positive integer, got {weight}")]
    NonPositiveWeight { line: usize, weight: i64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("E[R^{dim}] is infinite for {law}; the subcriticality threshold requires a finite moment")]
    InfiniteMoment { law: String, dim: f64 },

    #[error("invalid input: {0}")]
    InvalidSpec(String),

    #[error("this operation does not support {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PercError {
    /// Budget and window failures are resource problems rather than bad input;
    /// front ends report them with a distinct exit status.
    pub fn is_resource(&self) -> bool {
        matches!(self, PercError::Budget { .. } | PercError::WindowTooSmall { .. } | PercError::OutOfWindow)
    }
}
