//! Boolean discrete percolation on doubling graphs.
//!
//! Occupied vertices of a Bernoulli point process carry i.i.d. radii; each
//! occupied vertex is joined to everything in its ball. The crate provides
//! the metric machinery (balls, separated nets, covering profiles), a
//! counter-based sampler, exact evaluation of the multiscale crossing events
//! and the analytic bounds and Monte Carlo estimators built on them.

pub mod analysis;
pub mod error;
pub mod graph;
pub mod laws;
pub mod perc;
pub mod sampler;
pub mod unionfind;
pub mod window;

pub use error::{PercError, Result};
pub use graph::{BallView, GraphKind, GraphModel, Vertex};
pub use laws::RadiusLaw;
pub use perc::{ClusterResult, Evaluator};
pub use sampler::{marks_at, sample_window, Configuration, Marks, ProcessSpec};
pub use window::Window;
