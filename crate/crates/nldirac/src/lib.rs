//! Solver library for a family of first-order nonlinear spinor equations in
//! two space dimensions, `i d/dt psi = H(psi) psi`, in cartesian and
//! cylindrical frames.
//!
//! The crate provides the model registry and pointwise kernels ([`model`],
//! [`rhs`]), finite-difference derivatives ([`stencil`]), frame and gauge
//! maps ([`transform`]), stationary reductions and their closed-form
//! solution catalog ([`reduce`], [`solutions`]), time integration for fields
//! and radial profiles ([`evolve`], [`ivp`]), and exact-derivative reference
//! fields for residual and scaling checks ([`analytic`]).

pub mod analytic;
pub mod couplings;
pub mod error;
pub mod evolve;
pub mod grid;
pub mod ivp;
pub mod model;
pub mod reduce;
mod rk;
pub mod rhs;
pub mod solutions;
pub mod state;
pub mod stencil;
pub mod transform;

pub use analytic::{scale_check, AnalyticState, GaussianPacket, Jet, ScaleReport};
pub use couplings::{coupling_fields, radicands, PointCouplings, RadicandPolicy};
pub use error::{Error, Result};
pub use evolve::{evolve, DiagnosticsRecord, FieldState, Integrator, Scheme, Trajectory};
pub use grid::{AxisKind, Boundary, Grid, Grid1D, Grid2D, GridAxis};
pub use ivp::{HaltReason, IvpOptions, IvpSolution};
pub use model::{
    algebraic_entries, nonlinear_entries, AlgebraicMatrix, CoordSystem, Couplings, EquationId,
    ModelSpec,
};
pub use num_complex::Complex64;
pub use reduce::{
    free_amplitude_ratio, free_dispersion, lift, plane_wave_determinant, plane_wave_matrix,
    reduce, reduced_residual, reduced_residual_field, DerivativeSource, LiftedState,
    ReducedProfile, ReducedSystem,
};
pub use rhs::{h_apply_at, norm_flux, residual, residual_phi, rhs, rhs_phi, PointDerivatives};
pub use solutions::{
    verify_row, CatalogRow, ClosedFormSolution, ComponentAssignment, RadicalScope, RowConstants,
    RowVerification,
};
pub use state::{FieldPair, PhiState, SpinorState};
pub use stencil::{effective_wavenumber, DerivativeOperator, EdgeRule, StencilOrder};
