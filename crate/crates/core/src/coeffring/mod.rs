//! Exact coefficient rings: Gaussian rationals, polynomials in `z, zb`,
//! truncated power series in `t`, and polynomial ideals.

pub mod ideal;
pub mod poly;
pub mod scalar;
pub mod series;

pub use ideal::{IdealKind, PolyIdeal};
pub use poly::{complex_values, Monomial, Poly, MAX_TOTAL_DEGREE};
pub use scalar::{factorial, Gauss, RealField, Ring, Scalar};
pub use series::Series;
