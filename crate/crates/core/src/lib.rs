//! Linear representations of the loop braid group `LB_n` built from ribbon
//! fusion category data.
//!
//! Each loop is cut by a plane into a pair of points labelled `x, y`. The two
//! loop generators then become double-strand braids in `B_2n`, and a ribbon
//! category turns those into matrices on the fusion space
//! `Hom(z, (x⊗y)^{⊗n})`. When the double braiding of `x⊗y` with itself is
//! trivial, the matrices satisfy every loop braid relation.

pub mod basis;
pub mod builtin;
pub mod category;
pub mod error;
pub mod io;
pub mod linalg;
pub mod loop_rep;
pub mod oracle;
pub mod word;

pub use category::{ObjectId, RibbonCategory, DEFAULT_TOL};
pub use error::{Error, Result};
pub use linalg::CMatrix;
