//! Optimal polynomial approximants of reciprocals in Dirichlet-type spaces,
//! together with the constructive machinery around them: Rudin peak
//! functions, simultaneous zero-free polynomial approximation, and steering
//! the approximants of a perturbed function towards a prescribed target on a
//! finite boundary set.

// `!(x > t)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blaschke;
pub mod boundary;
pub mod coeffseries;
pub mod error;
pub mod grid;
pub mod json;
pub mod opa;
pub mod rudin;
pub mod spaces;
pub mod steer;
pub mod zerofree;

pub use blaschke::{blaschke_eval, blaschke_series, polynomial_inner_outer, InnerOuterFactorization};
pub use boundary::{neighborhood, piecewise_partition, sup_on_set, BoundarySet, PiecewisePartition};
pub use coeffseries::{dilate, evaluate, exp_series, multiply, zero_free_on_closed_disc, CoeffSeries, ZeroFreeReport};
pub use error::{Error, ErrorClass, Result};
pub use num_complex::Complex64;
pub use opa::{convergence_profile, gram_matrix, opa_solve, opa_solve_with, GramSystem, OpaResult, Solver};
pub use rudin::{
    analytic_completion, bump_profile, dirichlet_rudin, equilibrium_measure, hardy_rudin, BoundaryFunction, DiscreteMeasure, Profile,
    RudinFunction,
};
pub use spaces::{dirichlet_integral, distance_alpha, inner_product_alpha, norm_alpha, AlphaWeight, Space};
pub use steer::{opa_search_m, steer, SteerResult};
pub use zerofree::{phi_builder, simultaneous_zero_free, Tolerances, ZeroFreeApproxResult, ZeroFreeOptions};
