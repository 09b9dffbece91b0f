//! Stable cohomology, extension degrees and local Auslander–Reiten structure
//! for finite-dimensional symmetric algebras given by structure constants.
//!
//! The crate is layered bottom-up:
//!
//! * [`xfield`]: exact scalars (`F_p`, `Q`) and dense linear algebra;
//! * [`algebra`]: algebras, validation, symmetrizing forms, projectives;
//! * [`modcat`]: modules, morphisms, Hom and stable Hom, covers, duals;
//! * [`decomp`]: isomorphism tests and Krull–Schmidt decomposition;
//! * [`resolve`]: syzygies, cosyzygies, complete-resolution windows, `Ext^`;
//! * [`extdeg`]: extension degrees, perp relations, cones;
//! * [`arquiver`]: almost split sequences, components, Ω-perfect tests;
//! * [`workbench`]: corpus fixtures, verification suites and reports.

pub mod algebra;
pub mod arquiver;
pub mod decomp;
pub mod extdeg;
pub mod modcat;
pub mod resolve;
pub mod workbench;
pub mod xfield;

pub use algebra::Algebra;
pub use modcat::{Module, Morphism};
pub use xfield::{FieldSpec, Matrix, Scalar};

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("algebra is not symmetric: {0}")]
    NotSymmetric(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
