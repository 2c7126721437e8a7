//! Exact computational model of finite linear categories over ℚ: DG-categories
//! of forms, finitely generated projective modules with connections, the de
//! Rham quotient complex and the Chern map from formal K₀ elements to de Rham
//! cohomology.
//!
//! Everything is exact rational arithmetic. The crate is `no_std` and only
//! needs `alloc`; file formats and the command-line driver live in the `lincat`
//! crate.

#![no_std]

extern crate alloc;

pub mod category;
pub mod chern;
pub mod connection;
pub mod derham;
pub mod dg;
mod error;
pub mod graded;
pub mod instances;
pub mod linalg;
pub mod module;

pub use category::Category;
pub use connection::{Connection, CurvatureData};
pub use derham::DeRhamComplex;
pub use dg::DGCategory;
pub use error::{Error, Result};
pub use graded::{DiagonalForm, Form, FormMatrix, Graded, ObjectId};
pub use linalg::{Matrix, QuotientSpace, Scalar, Vector};
pub use module::ProjectiveModule;
