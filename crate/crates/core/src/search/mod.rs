//! Ratio-tuple enumeration, instance generators, exhaustive enumeration up
//! to lattice symmetry, and audits of instances against known bounds.

pub mod audit;
mod canonical;
mod enumerate;
mod generate;
mod ratios;

pub use audit::{audit, audit_with, AuditOptions, AuditReport, CheckKind, CheckStatus};
pub use canonical::canonical_form;
pub use enumerate::{
    check_quads, enumerate_intersecting, grid_segments, Enumeration, EnumerationStats,
};
pub use generate::{
    extension_candidates, generate_intersecting, generate_random, GenerateError, Generated,
};
pub use ratios::{
    allowed_ratios, enumerate_ratio_tuples, ratio_enumeration, step_feasible, RatioEnumeration,
    RatioTuple,
};
