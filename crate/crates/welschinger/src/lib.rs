//! Exact Welschinger invariants of the projective plane and of the two- and
//! three-dimensional ellipsoid quadrics, computed from symplectic field theory
//! degenerations along the real locus.
//!
//! A degree-`d` curve through `r` real points and `r_X` conjugate pairs breaks
//! into a real piece in the cotangent bundle of the Lagrangian and conjugate
//! pieces in the complement. [`trees`] enumerates the combinatorial types,
//! [`cotangent`] and [`relative`] supply the two kinds of building blocks, and
//! [`assembly`] puts them together:
//!
//! ```
//! use welschinger::{chi, GeometryKind};
//!
//! assert_eq!(chi(GeometryKind::ProjectivePlane, 6, 1).unwrap().value, 1024.into());
//! ```

pub mod assembly;
pub mod contact;
pub mod cotangent;
pub mod error;
pub mod exec;
pub mod relative;
pub mod tables;
pub mod trees;
pub mod verify;

pub use assembly::{
    check_congruence, check_sign_law, chi, chi_polynomial, lower_bound_report, Calculator, ChiEntry,
    ChiPolynomial, ChiResult, LedgerEntry,
};
pub use contact::{ContactVector, GeometryKind, LagrangianKind};
pub use cotangent::{FInvariants, FKey, FTable};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use relative::{CuratedTable, Engine, RelativeInvariants, RelativeKey, RelativeProvider};
pub use trees::{enumerate_trees, DecoratedTree, TreeFamily, TreeWithCount};
