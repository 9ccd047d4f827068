//! Exact-arithmetic tools for deformations and degenerations of
//! finite-dimensional associative algebras over the rationals.

pub mod algebra;
pub mod deformation;
pub mod degeneration;
pub mod error;
pub mod hochschild;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod variety;

pub use algebra::{Algebra, LinearMap};
pub use error::{Error, Result};
pub use hochschild::Cochain;
pub use scalar::Scalar;
