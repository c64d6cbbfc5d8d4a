//! Exact arithmetic for integral operators with linear substitutions acting
//! on separated exponential polynomials, with a terminating rewrite system
//! that brings operator expressions to a normal form.

pub mod bialgebra;
pub mod hierarchy;
pub mod matrixsubst;
pub mod opring;
pub mod rational;
pub mod syntax;
pub mod verify;

pub use bialgebra::{BasisFunction, Coefficient};
pub use hierarchy::{HierarchyElement, TensorMonomial};
pub use matrixsubst::{EliminantVector, SubstMatrix};
pub use opring::{normalize, Letter, NormalizeOptions, OperatorExpr, OperatorWord, Strategy};
pub use rational::Rational;
