//! Verification toolkit for distinguished weightings of simple root systems.
//!
//! A weighting assigns 0 or 2 to each simple root of a simple root system and
//! extends linearly to all roots.  The library decides whether a weighting is
//! *distinguished* (`#V₂ = #V₀ + rank`, where `V_k` is the set of roots of
//! weight `k`) and verifies that this is equivalent to strict positivity, for
//! every Weyl group element `w`, of the vector
//!
//! ```text
//! ζ(w) = Σ_{v ∈ V₂} |w(v)|  −  Σ_{v ∈ V₀} |w(v)|
//! ```
//!
//! expressed in simple-root coordinates (`|r|` is `r` or `−r`, whichever is a
//! positive root).  Three independent routes are implemented and cross-checked:
//!
//! * a brute-force scan of the full Weyl group ([`engine`]),
//! * closed-form block/occupancy formulas for the classical types
//!   ([`closedform`]),
//! * a reduction of types B/C/D (and a quasi-minuscule G₂ instance) to
//!   type-A computations via explicit root-lattice maps ([`reduction`]).

pub mod closedform;
pub mod engine;
pub mod error;
mod lift;
pub mod reduction;
pub mod rootsys;
pub mod weights;
pub mod weyl;
pub mod zeta;

pub use error::{Error, Result};
pub use rootsys::{build_root_system, Family, Root, RootSystem};
pub use weights::{
    all_weightings, block_partition, is_distinguished_cardinality, is_distinguished_closed_form,
    weight_classes, BlockCase, BlockPartition, WeightClasses, WeightFunction,
};
pub use weyl::{
    apply_word, enumerate_extended_d, enumerate_weyl, group_order, outer_twist, reflect,
    ExtendedElementD, RootAction, WeylElement,
};
pub use zeta::{zeta_of, ZetaVector};

pub use engine::{verify_all, verify_weighting, Mode, Outcome, Report, ScanOptions, Verdict};
