//! Integral modular symbols for `Γ_0(N)` with square-free `N`: the Hecke
//! ring on the cuspidal lattice, Eisenstein ideals and their indices.

mod hecke;
mod ideal;
mod p1;
mod report;
mod ring;
mod space;

pub use hecke::merel_matrices;
pub use ideal::{eisenstein_index, EisensteinIdealModel, StabilizationStep};
pub use p1::P1List;
pub use report::{
    compare_index_order, enumerate_eisenstein_maximal, verify_main_theorem, IndexComparisonReport,
    LevelAnalysis, MainTheoremCheck, MaximalIdealRecord, NonmaximalCheck, PrimeExponents, Verdict,
};
pub use ring::{hecke_ring, HeckeRingModel};
pub use space::{genus_formula, CuspSet, ManinSymbolSpace, SpaceSummary, DEFAULT_MAX_LEVEL};
