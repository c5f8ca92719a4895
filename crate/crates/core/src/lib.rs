//! Numerical toolkit for biharmonic conformal immersions of surfaces in
//! 3-manifolds.

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod ambient;
pub mod cmc;
pub mod error;
pub mod expr;
pub mod geom;
pub mod residual;
pub mod rotational;
pub mod verify;

pub use error::{Error, ErrorClass, Result};
