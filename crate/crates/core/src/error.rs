use thiserror::Error;

/// Errors carry the name of the violated invariant where one applies; CLI
/// reports map these onto their anchor strings.
#[derive(Error, Debug)]
pub enum PentaError {
    #[error("DegenerateForm: wedge pairing has rank {rank}, expected 4 (pseudoconvex condition (1))")]
    DegenerateForm { rank: usize },
    #[error("NotPseudoconvex: {reason}")]
    NotPseudoconvex { reason: String },
    #[error("InvalidDeformation: sup|mu| = {sup_norm} >= 1")]
    InvalidDeformation { sup_norm: f64 },
    #[error("Obstructed: right-hand side has a kernel component of norm {norm}")]
    Obstructed { norm: f64 },
    #[error("InvalidTruncation: invariance defect {defect} exceeds tolerance {tol}; raise the degree cap")]
    InvalidTruncation { defect: f64, tol: f64 },
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("degree overflow: wedge of degrees {0} and {1} exceeds the top degree")]
    DegreeOverflow(u8, u8),
    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),
    #[error("solver did not converge: {0}")]
    NonConvergence(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
