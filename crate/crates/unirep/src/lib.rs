//! Floating-point realizations of unitary representations of SL(2,R) and
//! its covers on function spaces: discrete-series models on the upper
//! half-plane and disk, principal-series models on the line, differential
//! operator checks, truncated group-action matrices with certified interior
//! unitarity, cover phase diagnostics, and the complementary-series inner
//! product in its Fourier form.

pub mod complementary;
pub mod cover;
pub mod diffops;
pub mod gamma;
pub mod geometry;
pub mod matrix;
pub mod models;

pub use geometry::{
    cayley, cayley_inverse, iwasawa_decompose, sl2_from_params, CoveredElement, GroupParams,
};
pub use matrix::{group_matrix, MatrixError, Model, TruncatedOperatorMatrix};
