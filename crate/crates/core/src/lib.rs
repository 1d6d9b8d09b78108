//! Posets of real-root multiplicity patterns, their merge/insert complexes,
//! and exact integer homology.
//!
//! Everything is generic over a [`Coefficient`] ring of exact integers; the
//! aliases at the root fix it to [`BigInt`].

pub mod chain;
pub mod characteristic;
pub mod complex;
pub mod error;
pub mod homology;
pub mod invariants;
pub mod matrix;
pub mod pattern;
pub mod poset;
pub mod report;
pub mod scalar;
pub mod snf;

pub use num_bigint::BigInt;

pub use complex::{BoundaryVariant, ComplexKind, Direction};
pub use error::{Error, Result};
pub use homology::{complex_homology, HomologyGroup, HomologyTable};
pub use pattern::Pattern;
pub use invariants::{
    bouquet_check, codimension_report, complement_cohomology, complement_homology, euler_number, stability_quantities,
    stabilization_report,
};
pub use characteristic::{arnold_crosscheck, chain_1221, theta_chain, theta_dual_class, vassiliev_mul, VassilievElement};
pub use poset::{build_poset, ClosedPoset, Family, ParityPolicy, PosetQuery, PosetSpec};
pub use scalar::Coefficient;
pub use report::Verdict;
pub use snf::{SmithForm, SnfConfig};

/// Default coefficient ring.
pub type Integer = BigInt;
pub type Chain = chain::Chain<Integer>;
pub type GradedComplex = complex::GradedComplex<Integer>;
pub type SparseMatrix = matrix::SparseMatrix<Integer>;
/// Machine-word complex used on hot paths; homology promotes on overflow.
pub type SmallComplex = complex::GradedComplex<i64>;
