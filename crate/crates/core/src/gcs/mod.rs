//! Generalized complex structures, generalized metrics and B-field transforms.

pub mod metric;
pub mod structure;

pub use metric::{
    hermitian_form, is_positive_hermitian, kahler_pair_at, kahler_pair_check, plus_splitting_at, GenMetric, KahlerPairReport,
    PointPairReport,
};
pub use structure::{conj_components, pairing_matrix, tmat_mul, GCStructure, IntegrabilityReport, TMatrix};
