//! Exact computations with Koszul pairs: quadratic algebras and their dual corings,
//! the six Koszul complexes, bar and cobar homology, and twisted tensor products.

pub mod bar;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod field;
pub mod graded;
pub mod koszul;
pub mod linalg;
pub mod tensor;
pub mod twisting;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use linalg::{Matrix, Subspace};
