//! Theorem-level checks: exact ratio verdicts, instance generators,
//! family-wide closed forms, and the brute-force oracle.

pub mod generate;
pub mod oracle;
pub mod ratio;
pub mod structural;

pub use generate::{arithmetic, geometric, random_set, GeneratorSpec};
pub use oracle::{brute_force_oracle, brute_force_oracle_with_limit, OracleResult};
pub use ratio::{compare_fractions, ratio_check, RatioVerdict};
pub use structural::{structural_checks, StructuralCheck, StructuralKind, StructuralReport};
