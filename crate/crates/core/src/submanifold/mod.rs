//! Polynomial submanifold models and the structure they inherit.

pub mod checks;
pub mod model;
pub mod poisson;

pub use checks::{
    conormal_invariant_at, gamma_iso_check, induced_structure_at, is_conormal_invariant, is_j_submanifold,
    j_submanifold_at, GammaReport, JSubmanifoldDiag, JSubmanifoldReport, SampleReport,
};
pub use model::{conj_slots, gauss_sqrt, SubmanifoldModel};
pub use poisson::{
    cubic_bivector, extends_to_projective, group_invariant_ideal_check, induced_poisson, is_poisson_submanifold,
    InducedPoisson, ProjectiveReport,
};
