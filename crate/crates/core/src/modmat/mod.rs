//! Exact linear algebra over Z/m: Howell and Smith normal forms, kernels,
//! solves, and canonical row spans.
//!
//! Row-vector convention everywhere: a matrix `A` is applied as `x·A`.
//! Callers working with column actions transpose at the boundary.

mod howell;
mod matrix;
pub mod ring;
mod smith;
mod span;

pub use howell::{howell_form, kernel, solve, HowellBuilder};
pub use matrix::ZModMatrix;
pub use ring::Zm;
pub use smith::{smith_normal_form, SmithForm};
pub use span::{RowSpan, Subquotient};

use crate::error::Result;

pub fn mat_mul(a: &ZModMatrix, b: &ZModMatrix) -> Result<ZModMatrix> {
    a.mul(b)
}

pub fn is_invertible(a: &ZModMatrix) -> Result<bool> {
    a.is_invertible()
}
