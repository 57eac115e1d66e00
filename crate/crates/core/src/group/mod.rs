//! Group families, canonical elements and finite enumeration.

mod descriptor;
mod element;
mod enumerate;
mod finite;
mod literal;
mod matrix;
mod ops;
mod perm;
mod word;

pub use descriptor::{AbelianizationOrder, GroupDescriptor};
pub use element::{AffElement, BarElement, BitWord, Element, WreathElement};
pub use enumerate::DEFAULT_LIMIT;
pub use finite::{closure, FiniteGroup, SubgroupSpec};
pub use matrix::{IntMatrix, ModMatrix};
pub use perm::Perm;
pub use word::Word;
