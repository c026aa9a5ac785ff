//! Exact rational scalars, dense vectors and matrices, and the elimination
//! kernels built on them.

mod linalg;
mod rational;

pub use linalg::{
    affine_dependencies, affine_hull_frame, independent_rows, matrix_rank, solve_linear_system,
    AffineHullFrame, LinalgError, LinearSolution, QMatrix, QVector,
};
pub use rational::{ParseRationalError, Rational};
