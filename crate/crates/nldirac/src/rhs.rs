//! Pointwise interaction kernels and their application over a grid:
//! `rhs = -i H(psi) psi` and the defect `residual = i (d/dt psi) - H psi`
//! written as `i (time_derivative - rhs)`.
//!
//! All ten members share one free Dirac part; the nonlinear couplings only
//! add algebraic entries. A model with all couplings zero therefore runs the
//! same code path as every other linear member, which keeps their outputs
//! bitwise identical.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridAxis};
use crate::model::{algebraic_entries_inner, AlgebraicMatrix, CoordSystem, ModelSpec};
use crate::state::{measure_weights, FieldPair, PhiState, SpinorState};
use crate::stencil::{DerivativeOperator, EdgeRule};

/// First derivatives of both components at one point: `d1` along x or r,
/// `d2` along y or theta.
#[derive(Clone, Copy, Debug, Default)]
pub struct PointDerivatives {
    pub d1_plus: Complex64,
    pub d1_minus: Complex64,
    pub d2_plus: Complex64,
    pub d2_minus: Complex64,
}

/// `H(psi) psi` at one point. `radial` carries `r` for cylindrical members
/// (used both by the `1/sqrt(r)` coupling scale and the `1/r` angular
/// derivative) and must be `None` for cartesian ones.
pub fn h_apply_at(
    spec: &ModelSpec,
    p: Complex64,
    m: Complex64,
    d: &PointDerivatives,
    radial: Option<f64>,
) -> Result<(Complex64, Complex64)> {
    let a = crate::model::algebraic_entries(spec, p, m, radial)?;
    Ok(h_assemble(spec, &a, p, m, d, radial))
}

#[inline]
fn h_assemble(
    spec: &ModelSpec,
    a: &AlgebraicMatrix,
    p: Complex64,
    m: Complex64,
    d: &PointDerivatives,
    radial: Option<f64>,
) -> (Complex64, Complex64) {
    let angular_scale = match (spec.coords(), radial) {
        (CoordSystem::Cartesian, None) => 1.0,
        (CoordSystem::Cylindrical, Some(r)) => 1.0 / r,
        _ => unreachable!("coordinate contract checked by the entry builder"),
    };
    let i = Complex64::I;
    let h_plus = a.e11 * p + a.e12 * m + d.d1_minus - i * angular_scale * d.d2_minus;
    let h_minus = a.e21 * p + a.e22 * m - d.d1_plus - i * angular_scale * d.d2_plus;
    (h_plus, h_minus)
}

fn expect_coords(spec: &ModelSpec, grid: &Grid) -> Result<()> {
    let want_cyl = spec.coords() == CoordSystem::Cylindrical;
    if grid.is_cylindrical() != want_cyl {
        return Err(Error::InvalidParameter(format!(
            "{} is {}, but the state lives on a {} grid",
            spec.equation,
            if want_cyl { "cylindrical" } else { "cartesian" },
            if grid.is_cylindrical() { "cylindrical" } else { "cartesian" },
        )));
    }
    Ok(())
}

/// Shared grid pass; computes `-i H psi` for the component vectors on `grid`.
pub(crate) fn rhs_inner(
    spec: &ModelSpec,
    grid: &Grid,
    plus: &[Complex64],
    minus: &[Complex64],
    op: &DerivativeOperator,
) -> Result<FieldPair> {
    expect_coords(spec, grid)?;
    let n = grid.len();
    let mut d1_plus = vec![Complex64::ZERO; n];
    let mut d1_minus = vec![Complex64::ZERO; n];
    let mut d2_plus = vec![Complex64::ZERO; n];
    let mut d2_minus = vec![Complex64::ZERO; n];

    match grid {
        Grid::One(g) => {
            // 1D states stand in for y-independent fields.
            let edge = if g.wraps() { EdgeRule::Wrap } else { EdgeRule::OneSided };
            op.derivative_1d(plus, g.spacing(), edge, &mut d1_plus);
            op.derivative_1d(minus, g.spacing(), edge, &mut d1_minus);
        }
        Grid::Two(g) => {
            op.derivative_axis(g, plus, GridAxis::First, &mut d1_plus);
            op.derivative_axis(g, minus, GridAxis::First, &mut d1_minus);
            op.derivative_axis(g, plus, GridAxis::Second, &mut d2_plus);
            op.derivative_axis(g, minus, GridAxis::Second, &mut d2_minus);
        }
    }

    // With every coupling zero the algebraic matrix is the constant mass
    // matrix; hoisting it keeps all linear members on one code path.
    let linear_matrix = if spec.couplings.is_zero() {
        Some(AlgebraicMatrix {
            e11: Complex64::from(spec.mass),
            e12: Complex64::ZERO,
            e21: Complex64::ZERO,
            e22: Complex64::from(-spec.mass),
        })
    } else {
        None
    };

    let radial_of = |k: usize| -> Option<f64> {
        match grid {
            Grid::Two(g) if g.is_cylindrical() => {
                Some(g.first_axis().point(k / g.second_axis().len()))
            }
            _ => None,
        }
    };

    let minus_i = -Complex64::I;
    let mut out = FieldPair::zeros(n);
    for k in 0..n {
        let (p, m) = (plus[k], minus[k]);
        let radial = radial_of(k);
        let a = match linear_matrix {
            Some(a) => a,
            None => algebraic_entries_inner(spec, p, m, radial, true).map_err(|e| e.at(k))?,
        };
        let d = PointDerivatives {
            d1_plus: d1_plus[k],
            d1_minus: d1_minus[k],
            d2_plus: d2_plus[k],
            d2_minus: d2_minus[k],
        };
        let (h_p, h_m) = h_assemble(spec, &a, p, m, &d, radial);
        out.plus[k] = minus_i * h_p;
        out.minus[k] = minus_i * h_m;
    }
    Ok(out)
}

/// `-i H(psi) psi` over the grid of a laboratory-frame state. Cartesian
/// members only.
pub fn rhs(spec: &ModelSpec, state: &SpinorState, op: &DerivativeOperator) -> Result<FieldPair> {
    rhs_inner(spec, state.grid(), state.plus(), state.minus(), op)
}

/// `-i H(phi) phi` for the cylindrical members.
pub fn rhs_phi(spec: &ModelSpec, state: &PhiState, op: &DerivativeOperator) -> Result<FieldPair> {
    rhs_inner(spec, state.grid(), state.plus(), state.minus(), op)
}

fn residual_from(rhs: FieldPair, time_derivative: &FieldPair) -> FieldPair {
    assert_eq!(rhs.len(), time_derivative.len(), "time derivative length mismatch");
    let i = Complex64::I;
    let plus = time_derivative
        .plus
        .iter()
        .zip(&rhs.plus)
        .map(|(dt, r)| i * (dt - r))
        .collect();
    let minus = time_derivative
        .minus
        .iter()
        .zip(&rhs.minus)
        .map(|(dt, r)| i * (dt - r))
        .collect();
    FieldPair { plus, minus }
}

/// Equation defect `i (d/dt psi) - H psi` given the time derivative samples.
/// Zero exactly when the state solves the discretized equation.
pub fn residual(
    spec: &ModelSpec,
    state: &SpinorState,
    time_derivative: &FieldPair,
    op: &DerivativeOperator,
) -> Result<FieldPair> {
    Ok(residual_from(rhs(spec, state, op)?, time_derivative))
}

/// Cylindrical counterpart of [`residual`].
pub fn residual_phi(
    spec: &ModelSpec,
    state: &PhiState,
    time_derivative: &FieldPair,
    op: &DerivativeOperator,
) -> Result<FieldPair> {
    Ok(residual_from(rhs_phi(spec, state, op)?, time_derivative))
}

/// Instantaneous rate of change of the density integral,
/// `d/dt ||psi||^2 = 2 Re <psi, d/dt psi>` under the grid's measure.
pub fn norm_flux(state: &SpinorState, time_derivative: &FieldPair) -> f64 {
    let w = measure_weights(state.grid(), true);
    let mut rate = 0.0;
    for k in 0..state.len() {
        let dot = (state.plus()[k].conj() * time_derivative.plus[k]
            + state.minus()[k].conj() * time_derivative.minus[k])
            .re;
        rate += 2.0 * w[k] * dot;
    }
    rate
}
