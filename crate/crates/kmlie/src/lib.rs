//! Exact-arithmetic toolkit for symmetric-Cartan-matrix Kac-Moody algebras.
//!
//! The crate builds the algebra from generators and defining relations over
//! arbitrary-precision rationals:
//!
//! - [`cartan`]: root-lattice geometry (Cartan matrices, Weyl reflections
//!   and orbits, fundamental weights, inner products);
//! - [`algebra`]: multi-bracket reduction, the contravariant Hermitian form,
//!   canonical root-space bases via Gram ranks, and root multiplicities with
//!   an independent Peterson-recursion backend;
//! - [`sl2`]: abstract representation theory of sl(2,R) covers (series
//!   labels, Casimir values, exact norm recursions, Clebsch-Gordan);
//! - [`so21`]: the so(2,1) subalgebras attached to timelike imaginary roots
//!   (plus real-root sl(2) and the principal so(2,1)) and the decomposition
//!   of the adjoint representation into unitary irreducible pieces;
//! - [`weights`]: weight tables of irreducible highest-weight modules and
//!   their decomposition into discrete series by column differencing.

pub mod algebra;
pub mod cartan;
pub mod parse;
pub mod ratio;
pub mod sl2;
pub mod so21;
pub mod weights;

pub use algebra::{Algebra, AlgebraError, LieElement, RootSpaceBasis, Term};
pub use cartan::{CartanError, CartanMatrix, NormClass, RootVector, Weight, WeylWord};
pub use sl2::IrrepLabel;
pub use so21::{AdjointDecomposition, So21Error, So21Triple, TripleKind};
pub use weights::{HwDecomposition, WeightTable, WeightsError};
