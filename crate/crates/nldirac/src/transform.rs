//! Field maps between frames and gauges.
//!
//! The cylindrical pair: `phi_pm = sqrt(r) exp(pm i theta / 2) psi_pm`, which
//! absorbs the radial measure (`|phi|^2 = r |psi|^2` pointwise) and turns the
//! cartesian derivative entries into their radial form.
//!
//! The abelian gauge map multiplies both components of a y-independent state
//! by `exp(-i alpha_u theta(x))` with `theta' = u_tilde`. Applied with the
//! negated coefficient (see [`GaugePhase::eliminating`]) it removes the
//! pseudo-vector coupling from the four-coupling member, mapping it onto the
//! three-coupling one without touching any |component| or any coupling
//! value, since `u_tilde` itself only sees moduli and relative phase
//! differences that the common factor leaves alone.

use num_complex::Complex64;

use crate::couplings::{couplings_at, RadicandPolicy};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::state::{PhiState, SpinorState};

/// Accumulated gauge angle `alpha_u * theta(x)` along the x axis.
#[derive(Clone, Debug)]
pub struct GaugePhase {
    theta: Vec<f64>,
    alpha_u: f64,
}

/// Largest per-column deviation from the first y-lane; a state is treated as
/// y-independent when this stays at rounding level.
fn y_variation(state: &SpinorState) -> f64 {
    match state.grid() {
        Grid::One(_) => 0.0,
        Grid::Two(g) => {
            let (n1, n2) = (g.first_axis().len(), g.second_axis().len());
            let mut worst = 0.0_f64;
            for i in 0..n1 {
                let k0 = g.idx(i, 0);
                for j in 1..n2 {
                    let k = g.idx(i, j);
                    worst = worst
                        .max((state.plus()[k] - state.plus()[k0]).norm())
                        .max((state.minus()[k] - state.minus()[k0]).norm());
                }
            }
            worst
        }
    }
}

/// The x samples of a state that is one-dimensional in x: either a 1D grid
/// or the first y-lane of a y-independent 2D grid.
fn x_profile(state: &SpinorState) -> Result<(Vec<f64>, Vec<(Complex64, Complex64)>)> {
    let variation = y_variation(state);
    if variation > 1e-12 {
        return Err(Error::NotYIndependent { variation });
    }
    match state.grid() {
        Grid::One(g) => {
            if g.axis().is_radial() {
                return Err(Error::InvalidParameter(
                    "the gauge map is defined along a cartesian x axis".into(),
                ));
            }
            let pairs = state.plus().iter().copied().zip(state.minus().iter().copied()).collect();
            Ok((g.points().collect(), pairs))
        }
        Grid::Two(g) => {
            if g.is_cylindrical() {
                return Err(Error::InvalidParameter(
                    "the gauge map is defined along a cartesian x axis".into(),
                ));
            }
            let pairs = (0..g.first_axis().len())
                .map(|i| {
                    let k = g.idx(i, 0);
                    (state.plus()[k], state.minus()[k])
                })
                .collect();
            Ok((g.first_axis().points().collect(), pairs))
        }
    }
}

impl GaugePhase {
    /// Integrate `theta' = u_tilde(x)` along the x axis by the trapezoid
    /// rule, with `theta = 0` at the left edge.
    pub fn accumulate(state: &SpinorState, alpha_u: f64, policy: RadicandPolicy) -> Result<Self> {
        let (xs, pairs) = x_profile(state)?;
        let mut u = Vec::with_capacity(pairs.len());
        for (k, &(p, m)) in pairs.iter().enumerate() {
            u.push(couplings_at(p, m, policy).map_err(|e| e.at(k))?.u_tilde);
        }
        let mut theta = Vec::with_capacity(u.len());
        let mut acc = 0.0;
        theta.push(0.0);
        for k in 1..u.len() {
            acc += 0.5 * (xs[k] - xs[k - 1]) * (u[k] + u[k - 1]);
            theta.push(acc);
        }
        Ok(Self { theta, alpha_u })
    }

    /// The phase that cancels the pseudo-vector term of the four-coupling
    /// member: same accumulated angle, negated coefficient.
    pub fn eliminating(state: &SpinorState, alpha_u: f64, policy: RadicandPolicy) -> Result<Self> {
        let mut phase = Self::accumulate(state, alpha_u, policy)?;
        phase.alpha_u = -phase.alpha_u;
        Ok(phase)
    }

    /// Build from an externally known angle profile.
    pub fn from_theta(theta: Vec<f64>, alpha_u: f64) -> Self {
        Self { theta, alpha_u }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn alpha_u(&self) -> f64 {
        self.alpha_u
    }
}

/// Multiply both components by `exp(-i alpha_u theta(x))`.
pub fn apply_gauge(state: &SpinorState, phase: &GaugePhase) -> Result<SpinorState> {
    let n1 = match state.grid() {
        Grid::One(g) => g.len(),
        Grid::Two(g) => g.first_axis().len(),
    };
    if phase.theta.len() != n1 {
        return Err(Error::InvalidParameter(format!(
            "gauge angle has {} samples but the x axis has {n1} points",
            phase.theta.len()
        )));
    }
    let factor =
        |i: usize| Complex64::from_polar(1.0, -phase.alpha_u * phase.theta[i]);
    let (plus, minus): (Vec<_>, Vec<_>) = match state.grid() {
        Grid::One(_) => state
            .plus()
            .iter()
            .zip(state.minus())
            .enumerate()
            .map(|(i, (p, m))| (p * factor(i), m * factor(i)))
            .unzip(),
        Grid::Two(g) => {
            let n2 = g.second_axis().len();
            let mut plus = Vec::with_capacity(state.len());
            let mut minus = Vec::with_capacity(state.len());
            for i in 0..n1 {
                let f = factor(i);
                for j in 0..n2 {
                    let k = g.idx(i, j);
                    plus.push(state.plus()[k] * f);
                    minus.push(state.minus()[k] * f);
                }
            }
            (plus, minus)
        }
    };
    SpinorState::new(*state.grid(), plus, minus, state.time())
}

/// Map laboratory-frame samples on a cylindrical grid to the transformed
/// pair: `phi_pm = sqrt(r) exp(pm i theta / 2) psi_pm`.
pub fn phi_from_psi(psi: &SpinorState) -> Result<PhiState> {
    let g = match psi.grid() {
        Grid::Two(g) if g.is_cylindrical() => *g,
        _ => {
            return Err(Error::InvalidGrid(
                "the half-angle map takes a state on a cylindrical grid".into(),
            ))
        }
    };
    let n2 = g.second_axis().len();
    let mut plus = Vec::with_capacity(psi.len());
    let mut minus = Vec::with_capacity(psi.len());
    for i in 0..g.first_axis().len() {
        let root_r = g.first_axis().point(i).sqrt();
        for j in 0..n2 {
            let half = Complex64::from_polar(1.0, 0.5 * g.second_axis().point(j));
            let k = g.idx(i, j);
            plus.push(root_r * half * psi.plus()[k]);
            minus.push(root_r * half.conj() * psi.minus()[k]);
        }
    }
    PhiState::new(g, plus, minus, psi.time())
}

/// Inverse of [`phi_from_psi`].
pub fn psi_from_phi(phi: &PhiState) -> Result<SpinorState> {
    let g = *phi.grid2();
    let n2 = g.second_axis().len();
    let mut plus = Vec::with_capacity(phi.len());
    let mut minus = Vec::with_capacity(phi.len());
    for i in 0..g.first_axis().len() {
        let inv_root_r = 1.0 / g.first_axis().point(i).sqrt();
        for j in 0..n2 {
            let half = Complex64::from_polar(1.0, 0.5 * g.second_axis().point(j));
            let k = g.idx(i, j);
            plus.push(inv_root_r * half.conj() * phi.plus()[k]);
            minus.push(inv_root_r * half * phi.minus()[k]);
        }
    }
    SpinorState::new(Grid::Two(g), plus, minus, phi.time())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AxisKind, Boundary, Grid1D, Grid2D};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ring_state() -> SpinorState {
        let grid = Grid2D::cylindrical_with_margin(24, 6.0, 16).unwrap();
        SpinorState::from_fn(grid, 0.0, |r, th| {
            let bump = (-(r - 3.0) * (r - 3.0)).exp();
            (c(bump, 0.0), c(0.0, 0.4 * bump * th.cos()))
        })
    }

    #[test]
    fn half_angle_map_known_values() {
        let r = Grid1D::inclusive(AxisKind::RadialR, 8, 4.0, 11.0).unwrap();
        let theta =
            Grid1D::wrapped(AxisKind::AngularTheta, 8, 0.0, 2.0 * std::f64::consts::PI).unwrap();
        let g = Grid2D::cylindrical(r, theta, Boundary::Periodic).unwrap();
        let psi = SpinorState::from_fn(g, 0.0, |_, _| (c(1.0, 0.0), c(1.0, 0.0)));
        let phi = phi_from_psi(&psi).unwrap();
        // At r = 4, theta = 0: phi_plus = 2.
        assert!((phi.plus()[g.idx(0, 0)] - c(2.0, 0.0)).norm() < 1e-14);
        // At theta = pi (index 4 of 8): phi_pm = pm 2 i at r = 4.
        assert!((phi.plus()[g.idx(0, 4)] - c(0.0, 2.0)).norm() < 1e-14);
        assert!((phi.minus()[g.idx(0, 4)] - c(0.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn half_angle_map_round_trips_and_matches_the_density() {
        let psi = ring_state();
        let phi = phi_from_psi(&psi).unwrap();

        // Pointwise density identity |phi|^2 = r |psi|^2.
        let g = phi.grid2();
        for i in 0..g.first_axis().len() {
            let r = g.first_axis().point(i);
            for j in 0..g.second_axis().len() {
                let k = g.idx(i, j);
                let lhs = phi.plus()[k].norm_sqr() + phi.minus()[k].norm_sqr();
                let rhs = r * (psi.plus()[k].norm_sqr() + psi.minus()[k].norm_sqr());
                assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(1e-300));
            }
        }
        // Integrated norms agree exactly up to rounding, and the inverse map
        // restores the samples.
        assert!((phi.norm() - psi.norm()).abs() <= 1e-13 * psi.norm());
        let back = psi_from_phi(&phi).unwrap();
        for k in 0..psi.len() {
            assert!((back.plus()[k] - psi.plus()[k]).norm() < 1e-14);
            assert!((back.minus()[k] - psi.minus()[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn gauge_factor_is_a_pure_phase_and_preserves_moduli() {
        let grid = Grid1D::inclusive(AxisKind::CartesianX, 64, -3.0, 3.0).unwrap();
        let state = SpinorState::from_fn_1d(grid, 0.0, |x| {
            let env = (-0.5 * x * x).exp();
            (c(env, 0.0), c(0.0, 0.8 * env))
        });
        let phase = GaugePhase::accumulate(&state, 0.7, RadicandPolicy::SignedSqrt).unwrap();
        let gauged = apply_gauge(&state, &phase).unwrap();
        for k in 0..state.len() {
            assert!((gauged.plus()[k].norm() - state.plus()[k].norm()).abs() < 1e-14);
            assert!((gauged.minus()[k].norm() - state.minus()[k].norm()).abs() < 1e-14);
        }
        assert!((gauged.norm() - state.norm()).abs() <= 1e-13 * state.norm());
        // theta starts at zero and the eliminating variant only flips the
        // coefficient.
        assert_eq!(phase.theta()[0], 0.0);
        let elim = GaugePhase::eliminating(&state, 0.7, RadicandPolicy::SignedSqrt).unwrap();
        assert_eq!(elim.alpha_u(), -0.7);
        assert_eq!(elim.theta(), phase.theta());
    }

    #[test]
    fn gauge_angle_matches_a_closed_form_for_constant_u() {
        // (p, m) = (1, i) e^{i phi0} has u_tilde = -sqrt(2) everywhere, so
        // theta(x) = -sqrt(2) (x - x0) for the signed-root branch.
        let grid = Grid1D::inclusive(AxisKind::CartesianX, 32, 0.0, 2.0).unwrap();
        let state = SpinorState::from_fn_1d(grid, 0.0, |_| (c(1.0, 0.0), c(0.0, 1.0)));
        let phase = GaugePhase::accumulate(&state, 1.0, RadicandPolicy::SignedSqrt).unwrap();
        for (x, th) in grid.points().zip(phase.theta()) {
            assert!((th - (-(2.0_f64.sqrt()) * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn y_dependent_states_are_rejected() {
        let grid = Grid2D::periodic_box(8, 0.0, 1.0).unwrap();
        let state = SpinorState::from_fn(grid, 0.0, |_, y| (c(1.0 + y, 0.0), Complex64::ZERO));
        let err = GaugePhase::accumulate(&state, 1.0, RadicandPolicy::SignedSqrt);
        assert!(matches!(err, Err(Error::NotYIndependent { .. })));
    }

    #[test]
    fn y_independent_2d_states_gauge_lane_by_lane() {
        let x = Grid1D::inclusive(AxisKind::CartesianX, 16, -1.0, 1.0).unwrap();
        let y = Grid1D::wrapped(AxisKind::CartesianY, 8, 0.0, 1.0).unwrap();
        let grid = Grid2D::cartesian(x, y, Boundary::Periodic).unwrap();
        let f = |xv: f64| (c((-xv * xv).exp(), 0.1), c(0.2, 0.3 * xv));
        let state2 = SpinorState::from_fn(grid, 0.0, |xv, _| f(xv));
        let state1 = SpinorState::from_fn_1d(x, 0.0, f);
        let phase2 = GaugePhase::accumulate(&state2, 0.9, RadicandPolicy::SignedSqrt).unwrap();
        let phase1 = GaugePhase::accumulate(&state1, 0.9, RadicandPolicy::SignedSqrt).unwrap();
        assert_eq!(phase1.theta(), phase2.theta());
        let g2 = apply_gauge(&state2, &phase2).unwrap();
        let g1 = apply_gauge(&state1, &phase1).unwrap();
        for i in 0..16 {
            for j in 0..8 {
                let k = grid.idx(i, j);
                assert_eq!(g2.plus()[k], g1.plus()[i]);
                assert_eq!(g2.minus()[k], g1.minus()[i]);
            }
        }
    }
}
