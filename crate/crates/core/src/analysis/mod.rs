//! Estimators, bounds and checks built on the percolation layer.

pub mod bounds;
pub mod census;
pub mod coverage;
pub mod estimate;
pub mod lemmas;
pub mod oracle;
pub mod recursion;
pub mod scaling;

pub use bounds::{
    bound_sb1, bound_sb2, p_zero, p_zero_exact, prob_h_bracket, Constants, ExactConstants, HBracket, Provenance,
};
pub use census::{cluster_census, Census};
pub use coverage::{coverage_fraction, coverage_series, is_covered, CoverageSeries, SeriesClass};
pub use estimate::{
    count_replicas, mc_estimate, mc_estimate_sup, sample_centers, wilson_interval, EventDescriptor, EventEstimate,
    EventKind, Z95,
};
pub use lemmas::{escala_check, ghm_check, EscalaNets, EscalaOutcome, GhmOutcome};
pub use oracle::{oracle_g_exact, OracleG};
pub use recursion::{recursion_check, Dyadic, RecursionReport};
pub use scaling::{scaling_inequality_check, ScalingReport};
