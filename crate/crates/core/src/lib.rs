//! Spectra and eigenvectors of relative and regular graph lifts computed
//! from the irreducible representations of the voltage group.

pub mod algebra;
pub mod characters;
pub mod error;
pub mod group;
pub mod irreps;
pub mod linalg;
pub mod spectral;
pub mod sweep;
pub mod voltage;

pub use algebra::GroupAlgebraElement;
pub use characters::{
    apply_character, coefficient_of_identity, power_sums_to_roots, regular_spectrum_via_characters,
    CharacterSpectrum, PowerSumProfile,
};
pub use error::{Error, Result};
pub use group::{ConjugacyClass, FiniteGroup, Permutation, SubgroupContext, DEFAULT_ORDER_CAP};
pub use irreps::{builtin_irreps, compute_irreps, GroupFamily, Irrep, IrrepSet};
pub use linalg::{CMatrix, CVector};
pub use spectral::{
    lift_eigenvectors, lift_spectrum, verify_against_oracle, EigenvectorBundle, SpectrumReport,
    Tolerances, VerificationReport,
};
pub use voltage::{
    build_base_matrix, build_lift, build_regular_lift, BaseMatrix, LiftGraph, VoltageGraph,
};
