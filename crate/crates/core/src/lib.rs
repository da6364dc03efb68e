//! Polynomial knots `ℝ → ℝⁿ` with exact rational coefficients.
//!
//! Coefficient tables and the sequence space, certified embedding checks,
//! `d_r` metrics, open-set inclusion witnesses and the linearising and
//! contracting homotopies.

pub mod certify;
pub mod deform;
pub mod error;
pub mod format;
pub mod metric;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod table;
pub mod topology;

pub use certify::{certify_embedding, certify_knot, certify_with, CertCertificate, CertifyOptions, Evidence};
pub use deform::{contract_trace, linearize_homotopy, trace_linearization, HomotopyTrace, TraceKind, TraceSample, TraceState};
pub use error::{Error, Result};
pub use metric::{distance, seq_distance, BallSpec, Membership, MetricTag, Point, Space};
pub use oracle::{sampling_oracle, Grid, OracleOutcome};
pub use scalar::{Interval, Rational, Scalar};
pub use table::{
    embed_linear, extend_from_dim, make_knot, project_linear, truncate_to_dim, CoefficientTable, Index,
    PolynomialKnot, SequencePoint, Verdict,
};
pub use topology::{Comparison, InclusionWitness, OpenInterval, OpenSpec, Region, StrictnessInstance, StrictnessParams};
