//! Exact symbolic computations for generalized complex and Kähler geometry
//! on polynomial charts of `C^n`.

pub mod clifford;
pub mod coeffring;
pub mod deform;
pub mod error;
pub mod gcs;
pub mod linalg;
pub mod spinor;
pub mod submanifold;
pub mod tensorcalc;

pub use error::{Error, Result};

pub use coeffring::{Gauss, Poly, PolyIdeal, Ring, Scalar, Series};
pub use clifford::{Clifford, GenSection};
pub use deform::{DeformationSeries, KOne, ObstructionMatrix};
pub use gcs::{GCStructure, GenMetric};
pub use spinor::{PointForm, PointSpace};
pub use submanifold::SubmanifoldModel;
pub use tensorcalc::{DiffForm, Multivector};

pub type Rational = num_rational::BigRational;
pub type GaussRat = Gauss<Rational>;
pub type PolyScalar = Poly<GaussRat>;
pub type Form = DiffForm<GaussRat>;
pub type Polyvector = Multivector<GaussRat>;
pub type CliffordElem = Clifford<GaussRat>;
