//! Exact linear algebra over ℤ and ℚ: sparse matrices, rank, and Smith
//! normal form.

mod elim;
mod sparse;

pub use elim::{merge_invariants, rank, smith_normal_form, smith_normal_form_dense};
pub use sparse::{BlockBuilder, SparseMatrix};
