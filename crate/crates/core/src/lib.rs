//! Exact lattice computations over a discrete valuation ring and the finite
//! combinatorics of the generalized Waldhausen construction, evaluated at the
//! level of sets, groups and Grothendieck groups.
//!
//! Modules build on each other in the order listed: [`dvr`] supplies field
//! arithmetic, [`linalg`] the Smith and Hermite normal forms, [`lattice`] the
//! Sato Grassmannian model, [`torsion`] the category of finite length modules,
//! [`poset`] and [`diagram`] the index space and pre-index map, [`schain`] the
//! simplicial objects and the index map between them, and [`simplicial`] the
//! finite-level checks on nerves and bisimplicial sets.

#![allow(clippy::needless_range_loop)]

pub mod check;
pub mod diagram;
pub mod dvr;
pub mod gen;
pub mod lattice;
pub mod linalg;
pub mod poset;
pub mod schain;
pub mod simplicial;
pub mod torsion;

pub use dvr::{FieldElement, Precision, RingConfig, RingKind, Valuation};
pub use lattice::Lattice;
pub use linalg::MatrixF;
pub use torsion::TorsionModule;
