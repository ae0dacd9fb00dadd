//! Matrices over `F` and `E`: characteristic polynomials, valuation-aware
//! elimination, canonical lattice bases and the hermitian splitter.

mod hermitian;
mod hnf;
mod matrix;

pub use hermitian::hermitian_split;
pub use hnf::{hnf_basis, Hnf};
pub use matrix::{Matrix, MatrixE, MatrixF};
