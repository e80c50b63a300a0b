//! Jump counting for ternary cyclotomic polynomials.
//!
//! For pairwise coprime `p, q, r` with `n = pqr`, the coefficients of
//! `Phi_n` change by `V(k) = a(k) - a(k-1)` at each index. This crate
//! computes `V(k)` three ways (from the octuple of CRT floors, from the zone
//! table, and by brute-force expansion), the closed form for the number `J` of
//! jumping-up indices, and the families where `J` stays small.

pub mod count;
pub mod error;
pub mod families;
pub mod modular;
pub mod poly;
pub mod report;
pub mod repr;
pub mod zones;

pub use count::{bound_report, closed_j, BoundReport, JumpComponents};
pub use error::{Error, Result};
pub use families::{
    germain_triples, scan, six_m_family, Epsilon, FamilyInstance, ScanConfig, ScanRow,
};
pub use modular::{validate_triple, Label, Triple};
pub use poly::{coefficients, jump_scan, CoefficientStats, CoefficientTable};
pub use report::{analyze, AnalysisReport, AnalyzeOptions};
pub use repr::{decompose, jump_from_octuple, octuple, Octuple, Representation};
pub use zones::{classify, lemma_r_status, table_v, zone_profile, JumpClass, ZoneProfile};
