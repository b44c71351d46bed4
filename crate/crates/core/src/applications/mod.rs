//! Reductions to the `ℓq`-`ℓ1` game: approximate Carathéodory and hard-margin
//! `ℓq` SVM.

mod caratheodory;
mod svm;

pub use caratheodory::{caratheodory_residual, caratheodory_solve, caratheodory_solve_with, SparseConvexCombination};
pub use svm::{svm_iterations, svm_margin_value, svm_radius, svm_solve, svm_solve_with, SvmOptions, SvmSolution};
