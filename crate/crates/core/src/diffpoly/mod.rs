//! Exact-rational differential polynomial ring, the Lenard–Magri recursion and the
//! Painlevé I hierarchy it generates.

mod hierarchy;
mod json;
mod lax;
mod poly;

use thiserror::Error;

pub use hierarchy::{
    apply_lenard_operator, generate_equation, generate_kdv_flow, integrate_total_derivative,
    lenard_sequence, normalization_factor, EquationOptions, FlowEquation, HierarchyEquation,
};
pub use json::{PolyDoc, TermDoc};
pub use lax::{
    assemble_beta, beta_equation_coefficients, verify_lax_identities, IdentityCheck, LaxPolynomial,
    LaxReport,
};
pub use poly::{rational_to_f64, DiffPoly, Monomial, Point, Var};

pub(crate) use poly::int;
#[cfg(test)]
pub(crate) use poly::rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffPolyError {
    #[error("not a total derivative of a differential polynomial")]
    NotATotalDerivative,
    #[error("odd order m = {0} requested without the unsupported-regime override")]
    OddOrderRequested(u32),
    #[error("no value assigned to {0}")]
    MissingAssignment(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("schema violation: {0}")]
    Schema(String),
}
