//! Gamma calculus on the three model subelliptic Lie groups (Heisenberg,
//! SU(2), SL(2)), heat semigroups by Monte Carlo and finite differences,
//! Li-Yau type inequality constants and their variational optimization.
//!
//! The groups carry a basis `X, Y, Z` of the Lie algebra with
//! `[X,Y] = Z`, `[X,Z] = -ρY`, `[Y,Z] = ρX`, and the sub-Laplacian is
//! `L = X² + Y²`.

pub mod error;
pub mod expr;
pub mod field;
pub mod gamma;
pub mod geometry;
pub mod group;
pub mod heat;
pub mod jet;
pub mod liyau;
pub mod quadrature;
pub mod spectral;
pub mod stats;
pub mod vprofile;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use group::{AlgebraElement, GroupElement, GroupModel, ModelKind};
pub use jet::{Jet, Scalar};
