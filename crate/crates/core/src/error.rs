use thiserror::Error;

/// Errors raised by the geometric routines.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("composition needs inner jets without constant term (got {0:e}, {1:e})")]
    NonZeroConstant(f64, f64),

    #[error("series expansion needs a positive constant term, got {0:e}")]
    SingularJet(f64),

    #[error("not a cross cap: |f_v(0,0)| = {fv_norm:e}, delta = {delta:e}")]
    NotACrossCap { fv_norm: f64, delta: f64 },

    #[error("degenerate point ({u}, {v}): f_u x f_v vanishes")]
    DegeneratePoint { u: f64, v: f64 },

    #[error("normal form solve failed at order {order} (residual {residual:e})")]
    SolveFailed { order: usize, residual: f64 },

    #[error("metric is not of cross cap type: {0}")]
    InvalidMetric(String),

    #[error("curve leaves its chart: |s| = {s} reaches the limit {limit}")]
    ChartExceeded { s: f64, limit: f64 },

    #[error("degenerate ruling: {0}")]
    DegenerateRuling(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
