//! Deformations of the standard Kähler structure along a holomorphic Poisson
//! bivector.

pub mod bihermitian;
pub mod kone;
pub mod solver;

pub use bihermitian::{
    bihermitian_first_order, build_torus_cp1_bivector, dual_coframe, ks_class, obstruction_rank_test,
    FirstOrderFrames, KsClass, ObstructionMatrix, ObstructionReport,
};
pub use kone::{k1_membership, k2_factor, k2_membership, KOne};
pub use solver::{
    certify_exact, first_order_source, first_order_source_split, kahler_spinor, residual, solve_deformation,
    spinor_series, DeformationSeries, DEFAULT_DEGREE_SLACK, MAX_ORDER,
};
