//! Exact computations with the affine Hecke algebra of type B.

pub mod algebra;
pub mod characters;
pub mod clifford;
pub mod crystal;
pub mod error;
pub mod fixtures;
pub mod functors;
pub mod linalg;
pub mod modrep;
pub mod multiseg;
pub mod scalars;
pub mod weyl;

pub use error::{HeckeError, Result};
pub use linalg::{Echelon, Matrix, Poly, Vector};
pub use modrep::ModuleRep;
pub use scalars::{LaurentPoly, Scalar, Weight};
