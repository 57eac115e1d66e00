//! Conjugation-invariant norms on concrete groups.
//!
//! The crate is organised around a handful of modules:
//!
//! * [`group`] — exact element arithmetic and enumeration for the supported
//!   group families (permutations, free groups, wreath products, `Aff(Z)`,
//!   the swap extension `Ḡ`, `SL(n, Z)`, `SL(n, Z/p)`, direct products).
//! * [`norms`] — conjugation-generated norms, commutator length, quasi-norms,
//!   stabilization and axiom checking, all with exact rational values.
//! * [`fcomm`] — explicit F-commutator decompositions in groups with
//!   commuting conjugate copies of a subgroup.
//! * [`displacement`] — packing numbers, displacement energies and the
//!   displacement inequalities.
//! * [`quasimorphism`] — defects, homogenization, the `Ḡ` extension and
//!   certified stable commutator length bounds.
//! * [`suites`] and [`cache`] — deterministic verification suites and an
//!   on-disk cache for norm tables.
//!
//! With the default `parallel` feature the inner loops (BFS frontiers,
//! exhaustive scans, seeded trials) run on rayon; without it everything runs
//! sequentially and produces bit-identical results.

pub mod cache;
pub mod displacement;
pub mod error;
pub mod fcomm;
pub mod group;
pub mod norms;
pub mod par;
pub mod quasimorphism;
pub mod rational;
pub mod sampling;
pub mod suites;

pub use error::{Error, Result};
pub use group::{Element, FiniteGroup, GroupDescriptor, SubgroupSpec};
pub use rational::Rational;

/// Version string stamped into reports and cache entries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
