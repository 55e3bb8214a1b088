//! Exact arithmetic substrate: rationals, labels, label-indexed exponent
//! vectors and matrices, and the division order.

mod label;
mod matrix;
mod rat;
mod vector;

pub use label::{natural_cmp, CornerId, Label, EXCEPTIONAL_PREFIX};
pub use matrix::{ExponentMatrix, MatrixJson};
pub use rat::Rat;
pub use vector::{div_le, minimal_elements, ExponentVector};
