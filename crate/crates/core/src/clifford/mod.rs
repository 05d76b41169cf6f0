//! Clifford algebra of `T ⊕ T*`, its spin representation on forms, and
//! adjoint actions on sections.

pub mod algebra;
pub mod bch;
pub mod section;

pub use algebra::Clifford;
pub use bch::{bch_log, CliffordSeries};
pub use section::{adjoint, adjoint_on_section, adjoint_series, courant, pairing, GenSection};
