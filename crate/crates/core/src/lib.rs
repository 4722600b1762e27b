//! General L_φ / L_ψ affine surface areas of convex bodies, their extremal
//! versions, and numerical checks of the associated inequalities.

// `!(x >= lo)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asa;
pub mod config;
pub mod error;
pub mod extremal;
pub mod funclass;
pub mod geometry;
pub mod numeric;
pub mod verify;

pub use config::{DiffScheme, QuadratureConfig};
pub use error::{Error, Result};
