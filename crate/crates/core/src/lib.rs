//! Group cohomology of finite matrix groups acting on `(Z/p^k)^n`, and the
//! finite abelian group machinery around divisibility, purity and direct
//! summands.

pub mod abelian;
pub mod cohomology;
pub mod error;
pub mod lemma_lab;
pub mod matgroup;
pub mod modmat;

pub use error::{Error, Result};
