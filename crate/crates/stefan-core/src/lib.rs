//! Weak-formulation (enthalpy) solver for the one-dimensional multiphase
//! Stefan problem, plus an optimal-control harness that recovers an unknown
//! left-boundary heat flux from a right-boundary temperature measurement.
//!
//! The problem is posed in Kirchhoff-transformed variables: the temperature
//! `u` becomes `v = F(u) = ∫ k(y) dy`, the free boundaries become level sets
//! `v = v^j`, and the whole multiphase system collapses to a single quasilinear
//! equation `∂b(v)/∂t − v_xx = f` with a monotone enthalpy `b` that jumps by
//! the latent heat `γ_j` at each critical value. The discrete state is the
//! implicit finite-difference solution of the mollified equation on a uniform
//! grid; a boundary flux is identified by minimizing the weighted mismatch
//! `Σ τ (v_m(k) − Γ_k)²` over a discrete Sobolev ball.
//!
//! Module map:
//! - [`physics`]: Kirchhoff transform, enthalpy construction, mollification;
//! - [`discretization`]: grids, Steklov cell averages, control mappings and
//!   discrete norms;
//! - [`solver`]: the implicit scheme and its successive-approximation /
//!   Newton time steps;
//! - [`interpolants`]: the space-time interpolations of the discrete state,
//!   discrete norms and the weak-form residual;
//! - [`control`]: cost functionals and the projected compass-search
//!   minimizer;
//! - [`verification`]: exact-solution benchmarks and refinement studies.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `libm`. Every public type is immutable after construction and safe to
//! share across threads.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod control;
pub mod discretization;
pub mod error;
pub mod func;
pub mod interpolants;
pub mod physics;
pub mod quad;
pub mod solver;
pub mod verification;

pub use control::{
    cost_in, evaluate_control, minimize, surrogate_j, ControlProblem, EvalRecord,
    OptimizationTrace, OptimizerParams,
};
pub use discretization::{
    pn_map, project_to_ball, qn_map, steklov_averages, w21_continuous_norm, w21_discrete_norm,
    w21_discrete_norm_sq, DiscreteControl, Grid, ProblemData, SteklovData,
};
pub use error::{Error, Result};
pub use func::{Field, PiecewiseLinear, Poly, Poly2, Profile};
pub use interpolants::{
    energy_norm, linf_norm, space_interp_equivalence, test_function_library,
    time_interp_equivalence, weak_residual, Interpolant, InterpolantKind, TestFunction,
};
pub use physics::{
    build_enthalpy, mollify, Coeff, EnthalpyFunction, EpsilonPolicy, MollifiedEnthalpy, PhaseSpec,
};
pub use solver::{
    contraction_delta, residual_check, scalar_monotone_solve, solve_all, solve_step, Array2,
    DiscreteState, SolverMode, SolverParams, StepReport,
};
pub use verification::{
    extract_front, functional_convergence_study, neumann_setup, refinement_study, FrontOracle,
    FunctionalReport, LevelResult, NeumannBenchmark, NeumannConstants, StudyCase, StudyReport,
};
