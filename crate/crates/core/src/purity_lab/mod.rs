//! Concrete finite extensions of the model rings: monomial orders, trace
//! forms, Frobenius surjectivity, the length ledger and the flatness check.

mod extension;
mod field;
mod flatness;
mod frobsurj;
mod ledger;

pub use extension::{
    build_extension, discriminant_valuation, tower_discriminants, tower_report, trace_matrix,
    ExtensionKind, ExtensionOrder, ExtensionSpec,
};
pub use flatness::{flatness_check, flatness_grid};
pub use frobsurj::{
    frobenius_root, frobenius_surjectivity_check, random_residue, verify_root, FrobeniusRoot,
};
pub use ledger::{purity_ledger, PurityLedger};
