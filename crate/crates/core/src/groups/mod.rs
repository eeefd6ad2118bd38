//! Zariski closures, dimension polynomials and stabilization, and the
//! generalized-group constructions built on a schedule of ideal slices.
//!
//! Every quantity is computed from slices of the σ-ideal in the linear
//! reading, so the additive and multiplicative families share one code path.

mod chain;
mod closure;

pub use chain::{
    chain, closed_forms, generalized_dims, generalized_report, settle, kernels, kernels_of,
    projections, stabilization_bound, top_slice, twisted_kernels, zariski_indicators, AxiomCheck, Chain,
    GeneralizedGroupSpec, GeneralizedReport, Kernels, Projections, Schedule, TwistedKernels,
};
pub use closure::{
    ambient_dim, extend_ideal_slice, shift_closure, stabilization_from, tighten, top_dim, Certificate, Closure,
    ClosureReport, DimensionPolynomial, GenerationCheck, Stabilization,
};

use crate::diffterm::{GroupDescriptor, SliceVector};
use crate::error::Result;
use crate::numpoly::Invariants;

pub fn zariski_dims(desc: &GroupDescriptor, max_level: u32) -> Result<Vec<u64>> {
    Closure::new(desc)?.dims(max_level)
}

pub fn dimension_polynomial(desc: &GroupDescriptor) -> Result<DimensionPolynomial> {
    Closure::new(desc)?.dimension_polynomial()
}

pub fn group_invariants(desc: &GroupDescriptor) -> Result<Invariants> {
    Closure::new(desc)?.invariants()
}

pub fn stabilization_index(desc: &GroupDescriptor) -> Result<Stabilization> {
    Closure::new(desc)?.stabilization()
}

pub fn finite_generation_certificate(desc: &GroupDescriptor) -> Result<(u32, Vec<SliceVector>)> {
    let c = Closure::new(desc)?.certificate(None)?;
    Ok((c.level, c.generators))
}

/// Default report depth `2·(max generator order) + n + 4`.
pub fn default_max_level(desc: &GroupDescriptor) -> u32 {
    2 * desc.max_generator_order() + desc.n as u32 + 4
}
