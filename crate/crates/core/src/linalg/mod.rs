//! Small dense linear algebra kernels: exact rational and floating point.

pub mod exact;
pub mod float;
pub mod simplex;

pub use exact::QMatrix;
pub use float::{FMatrix, FloatRowBasis};
