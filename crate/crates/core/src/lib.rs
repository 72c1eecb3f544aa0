//! Toolkit for closed 3-forms on 5-manifolds: structure extraction,
//! contact hyperkähler / Sasaki–Einstein verification, adapted connections
//! and their Weitzenböck curvature, an exact Galerkin spectral engine on the
//! unit 5-sphere, the linearized embedding solve, and the Minkowski-problem
//! reduction for data on Σ × T³.
//!
//! Exact computations run on multivariate polynomials over Q(√2) (complex
//! sectors over Q(i,√2)); chart demos may use sampled numeric fields with
//! finite-difference stencils.

pub mod acceptance;
pub mod connection;
pub mod error;
pub mod forms;
pub mod hypersurface;
pub mod linalg;
pub mod minkowski;
pub mod moments;
pub mod numeric;
pub mod poly;
pub mod report;
pub mod s5;
pub mod scalar;
pub mod spectral;
pub mod structure;
pub mod su2;

pub use error::PentaError;
pub use scalar::{CScalar, Rat, Scalar};
