//! Exact analysis of linear constant-coefficient PDE systems.
//!
//! A system is an [`diffop::OperatorMatrix`] over the commutative ring
//! `Q[d1..dn]`. The [`analysis`] module decides whether the differential
//! module it presents is torsion-free — equivalently, whether the solution
//! space admits a potential-style parametrization — by the adjoint /
//! compatibility-condition / adjoint / compatibility-condition pipeline,
//! and produces either the parametrization or explicit torsion elements.

pub mod analysis;
pub mod cli;
pub mod diffop;
pub mod dsl;
pub mod exact_poly;
pub mod gallery;
pub mod groebner;
pub mod janet;
