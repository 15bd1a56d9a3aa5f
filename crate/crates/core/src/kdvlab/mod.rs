//! Small-dispersion KdV near a gradient catastrophe: Hopf characteristics, non-generic
//! initial data, a spectral KdV solver, and the double-scaling comparison with the
//! Painlevé I hierarchy.

mod data;
mod evolve;
mod scaling;
mod series;

use thiserror::Error;

use crate::painleve::PainleveError;

pub use data::{
    build_initial_data, critical_point, hopf_solve, hopf_solve_below, CriticalPoint, DataMode,
    DataParams, InitialDataSpec, Taper,
};
pub use evolve::{kdv_evolve, kdv_evolve_values, KdvConfig, KdvField};
pub use scaling::{
    compare_double_scaling, fit_rate, physical_point, predicted_u, scaling_map, CompareOptions,
    CompareReport, Window,
};
pub use series::Series;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KdvError {
    #[error("order m = {0} must be even and at least 2")]
    InvalidOrder(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("f_L is not decreasing near u = {u}")]
    MonotonicityLost { u: f64 },
    #[error("the vanishing-derivative constraints are singular")]
    ConstraintSingular,
    #[error("t = {t} is past the breaking time {t_c}")]
    MultivaluedRegion { t: f64, t_c: f64 },
    #[error("no characteristic through x = {x}")]
    NoBracket { x: f64 },
    #[error("the steepest slope is attained at u = {u_a} and u = {u_b}")]
    MaximizerNotUnique { u_a: f64, u_b: f64 },
    #[error("f_L derivative of order {order} is {value:e} at the critical point")]
    DerivativeChainBroken { order: u32, value: f64 },
    #[error("spectral tail {tail:e} above tolerance at t = {t}")]
    ResolutionInsufficient { tail: f64, t: f64 },
    #[error("non-finite values at t = {t}")]
    Blowup { t: f64 },
    #[error("window outside the solution domain: {0}")]
    WindowOutsideSolutionDomain(String),
    #[error(transparent)]
    Painleve(#[from] PainleveError),
}
