//! Exterior calculus on polynomial charts.

pub mod exterior;
pub mod form;
pub mod polyvector;

pub use exterior::{Exterior, FormKind, Kind, Mask, VectorKind};
pub use form::{lefschetz_contract, DiffForm};
pub use polyvector::Multivector;
