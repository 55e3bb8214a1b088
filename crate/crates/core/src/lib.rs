//! Exact combinatorics of monomial manifolds: corner atlases with rational
//! exponent matrices, codimension-two blow-ups with adapted
//! standardizations, and principalization of monomial ideals, which reduces
//! a finite minimal support to monomial type at every corner.

pub mod blowup;
pub mod error;
pub mod gps;
pub mod kernel;
pub mod manifold;
pub mod mideal;
pub mod pipeline;
pub mod standardization;

pub use error::{Error, Result};
pub use kernel::{CornerId, ExponentMatrix, ExponentVector, Label, Rat};
