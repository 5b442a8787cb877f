//! Exact algebra for hyperelliptic curves, their embeddings and the rational
//! maps built from them.

pub mod error;
pub mod field;
pub mod forms;
pub mod hyperelliptic;
pub mod linsys;
pub mod matrix;
pub mod modulimaps;
pub mod par;
pub mod poly;
pub mod proj;
pub mod rnc;
pub mod rng;
pub mod suites;

pub use error::{Error, Result};
pub use field::{Field, FieldTag, PrimeField, Rationals};
pub use forms::{Form, MonomialBasis};
pub use matrix::{Matrix, RowEchelon};
pub use proj::{ProjPoint, ProjSubspace};
