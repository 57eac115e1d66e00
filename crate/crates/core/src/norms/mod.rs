//! Conjugation-invariant norms, pseudo-norms and quasi-norms.
//!
//! Every value is an exact [`Rational`]. Finite groups get explicit
//! [`NormTable`]s; the infinite families expose norms as [`Norm`]
//! implementations that are checked on finite windows.

mod axioms;
mod bfs;
mod builtin;
mod filtration;
mod quasinorm;
mod stabilization;
mod table;

pub use axioms::{verify_norm_axioms, Axiom, AxiomReport, AxiomViolation};
pub use bfs::{
    check_extremal_domination, commutator_length, commutator_length_in, qk_norm, qk_norm_in, ClTable,
    DominationReport,
};
pub use builtin::{support_norm, FnNorm, SupportNorm, TrivialNorm, WreathSupportNorm};
pub use filtration::generator_filtration_norm;
pub use quasinorm::{
    aff_z_commutator_witness, aff_z_window, all_pairs, coset_extension_qnorm, pullback_qnorm, quasinorm_to_norm,
    verify_quasinorm, CosetExtension, QuasiNormReport, QuasiNormSpec,
};
pub use stabilization::{stabilization_upper, StabilizationEstimate};
pub use table::{NormMeta, NormTable, NormTableJson};

use crate::error::Result;
use crate::group::Element;
use crate::rational::Rational;

/// A function on group elements that is claimed to be a norm.
pub trait Norm: Sync {
    fn name(&self) -> String;

    /// The value at `g`; an error when `g` is outside the norm's domain.
    fn norm(&self, g: &Element) -> Result<Rational>;
}

impl<N: Norm + ?Sized> Norm for &N {
    fn name(&self) -> String {
        (**self).name()
    }

    fn norm(&self, g: &Element) -> Result<Rational> {
        (**self).norm(g)
    }
}

impl<N: Norm + ?Sized> Norm for Box<N> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn norm(&self, g: &Element) -> Result<Rational> {
        (**self).norm(g)
    }
}
