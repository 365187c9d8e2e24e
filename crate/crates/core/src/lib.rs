//! Finite fields, projective geometry and Hermitian varieties, with tools for
//! counting the rational points on intersections of a Hermitian threefold
//! with hypersurfaces.

pub mod audit;
pub mod constructions;
pub mod error;
pub mod eval;
pub mod field;
pub mod hermitian;
pub mod linalg;
pub mod plane_cubic;
pub mod poly;
pub mod projective;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldSpec};
pub use hermitian::{HermitianForm, Variety};
pub use poly::HomogeneousPoly;
pub use projective::{Flat, ProjPoint, ProjSpace};
