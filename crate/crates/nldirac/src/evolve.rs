//! Time integration of the field equations: fixed-step fourth-order
//! Runge-Kutta and an embedded adaptive 5(4) pair sharing one tableau.
//!
//! The right-hand side has no explicit time dependence, so stage times are
//! bookkeeping only. Closed edges are re-zeroed after every full step; that
//! is the discrete Dirichlet condition matching the one-sided stencils.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Boundary, Grid, Grid2D};
use crate::model::ModelSpec;
use crate::rk;
use crate::state::{FieldPair, PhiState, SpinorState};
use crate::stencil::DerivativeOperator;

mod sealed {
    use super::*;

    /// Crate-internal mutable view; keeps outside types from implementing
    /// [`super::FieldState`].
    pub trait RawParts {
        fn raw(&mut self) -> (&mut [Complex64], &mut [Complex64], &mut f64);
    }

    impl RawParts for SpinorState {
        fn raw(&mut self) -> (&mut [Complex64], &mut [Complex64], &mut f64) {
            (&mut self.plus, &mut self.minus, &mut self.time)
        }
    }

    impl RawParts for PhiState {
        fn raw(&mut self) -> (&mut [Complex64], &mut [Complex64], &mut f64) {
            (&mut self.plus, &mut self.minus, &mut self.time)
        }
    }
}

/// Field layouts the integrator can advance: the laboratory-frame state and
/// the half-angle transformed one. Sealed; the two implementations differ
/// only in which norm convention and right-hand-side entry point they use.
pub trait FieldState: Clone + sealed::RawParts {
    fn grid(&self) -> &Grid;
    fn time(&self) -> f64;
    fn norm(&self) -> f64;
    fn max_abs(&self) -> f64;
    fn components(&self) -> (&[Complex64], &[Complex64]);
    fn eval_rhs(&self, spec: &ModelSpec, op: &DerivativeOperator) -> Result<FieldPair>;
}

impl FieldState for SpinorState {
    fn grid(&self) -> &Grid {
        SpinorState::grid(self)
    }

    fn time(&self) -> f64 {
        SpinorState::time(self)
    }

    fn norm(&self) -> f64 {
        SpinorState::norm(self)
    }

    fn max_abs(&self) -> f64 {
        SpinorState::max_abs(self)
    }

    fn components(&self) -> (&[Complex64], &[Complex64]) {
        (self.plus(), self.minus())
    }

    fn eval_rhs(&self, spec: &ModelSpec, op: &DerivativeOperator) -> Result<FieldPair> {
        crate::rhs::rhs(spec, self, op)
    }
}

impl FieldState for PhiState {
    fn grid(&self) -> &Grid {
        PhiState::grid(self)
    }

    fn time(&self) -> f64 {
        PhiState::time(self)
    }

    fn norm(&self) -> f64 {
        PhiState::norm(self)
    }

    fn max_abs(&self) -> f64 {
        PhiState::max_abs(self)
    }

    fn components(&self) -> (&[Complex64], &[Complex64]) {
        (self.plus(), self.minus())
    }

    fn eval_rhs(&self, spec: &ModelSpec, op: &DerivativeOperator) -> Result<FieldPair> {
        crate::rhs::rhs_phi(spec, self, op)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scheme {
    /// Classic fixed-step fourth-order Runge-Kutta. Without an explicit
    /// `dt` the step is the CFL ceiling itself.
    Rk4 { dt: Option<f64> },
    /// Adaptive Dormand-Prince 5(4); accepted steps never exceed the CFL
    /// ceiling.
    Rk45 { abs_tol: f64, rel_tol: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integrator {
    pub scheme: Scheme,
    /// Fraction of the shortest mesh length used as the step ceiling.
    pub cfl_factor: f64,
    /// Accepted-plus-rejected step budget for one [`evolve`] call.
    pub max_steps: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self { scheme: Scheme::Rk4 { dt: None }, cfl_factor: 0.5, max_steps: 1_000_000 }
    }
}

impl Integrator {
    pub fn rk4() -> Self {
        Self::default()
    }

    pub fn rk45() -> Self {
        Self { scheme: Scheme::Rk45 { abs_tol: 1e-10, rel_tol: 1e-8 }, ..Self::default() }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.scheme = Scheme::Rk4 { dt: Some(dt) };
        self
    }

    pub fn with_cfl(mut self, cfl_factor: f64) -> Self {
        self.cfl_factor = cfl_factor;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.cfl_factor > 0.0 && self.cfl_factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cfl factor {} must be positive",
                self.cfl_factor
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("step budget must be nonzero".into()));
        }
        match self.scheme {
            Scheme::Rk4 { dt: Some(dt) } if !(dt > 0.0 && dt.is_finite()) => Err(
                Error::InvalidParameter(format!("explicit step {dt} must be positive")),
            ),
            Scheme::Rk45 { abs_tol, rel_tol } if !(abs_tol > 0.0 && rel_tol > 0.0) => {
                Err(Error::InvalidParameter("tolerances must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

/// One diagnostics row per accepted step (plus the initial state).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub norm: f64,
    pub max_abs: f64,
    /// Signed step that produced this row; zero on the initial row.
    pub dt: f64,
    /// Accepted steps taken so far.
    pub steps: usize,
}

/// Evolution output: sampled states and per-step diagnostics.
#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    /// Initial state, every `sample_stride`-th accepted state, final state.
    pub samples: Vec<S>,
    pub diagnostics: Vec<DiagnosticsRecord>,
}

impl<S> Trajectory<S> {
    pub fn final_state(&self) -> &S {
        self.samples.last().expect("a trajectory always holds its endpoint states")
    }
}

// NaN screens must look at raw components: a max-reduction silently skips
// NaN, reporting an innocent value for a poisoned state. The norm can
// overflow while every component is still finite (squaring doubles the
// exponent), so it needs its own check or a blown-up run sails through.
fn assert_finite<S: FieldState>(state: &S, step: usize) -> Result<()> {
    let (plus, minus) = state.components();
    let finite = plus
        .iter()
        .chain(minus)
        .all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite {
        return Err(Error::NonFinite { what: "field state", time: state.time(), step });
    }
    if !state.norm().is_finite() {
        return Err(Error::NonFinite { what: "field norm", time: state.time(), step });
    }
    Ok(())
}

/// Which edges of the grid carry the discrete Dirichlet condition.
fn needs_edge_zeroing(grid: &Grid) -> bool {
    match grid {
        Grid::One(g) => !g.wraps(),
        Grid::Two(g) => {
            g.is_cylindrical() || g.boundary() == Boundary::DirichletZero
        }
    }
}

fn zero_closed_edges_2d(g: &Grid2D, plus: &mut [Complex64], minus: &mut [Complex64]) {
    let (n1, n2) = (g.first_axis().len(), g.second_axis().len());
    // First axis (x or r): radial edges are always closed, cartesian ones
    // only under the Dirichlet boundary.
    if g.is_cylindrical() || g.boundary() == Boundary::DirichletZero {
        for j in 0..n2 {
            for i in [0, n1 - 1] {
                let k = g.idx(i, j);
                plus[k] = Complex64::ZERO;
                minus[k] = Complex64::ZERO;
            }
        }
    }
    if g.boundary() == Boundary::DirichletZero {
        for i in 0..n1 {
            for j in [0, n2 - 1] {
                let k = g.idx(i, j);
                plus[k] = Complex64::ZERO;
                minus[k] = Complex64::ZERO;
            }
        }
    }
}

fn apply_boundary<S: FieldState>(state: &mut S) {
    let grid = state.grid().clone();
    match grid {
        Grid::One(g) => {
            if !g.wraps() {
                let n = g.len();
                let (plus, minus, _) = state.raw();
                for k in [0, n - 1] {
                    plus[k] = Complex64::ZERO;
                    minus[k] = Complex64::ZERO;
                }
            }
        }
        Grid::Two(g) => {
            let (plus, minus, _) = state.raw();
            zero_closed_edges_2d(&g, plus, minus);
        }
    }
}

/// `target += a * k` over both components.
fn accumulate(target: &mut FieldPair, a: f64, k: &FieldPair) {
    for (t, s) in target.plus.iter_mut().zip(&k.plus) {
        *t += a * s;
    }
    for (t, s) in target.minus.iter_mut().zip(&k.minus) {
        *t += a * s;
    }
}

/// Write `base + dt * sum(row[j] k[j])` into `state`'s components.
fn load_stage<S: FieldState>(
    state: &mut S,
    base: &FieldPair,
    dt: f64,
    row: &[f64],
    stages: &[FieldPair],
    time: f64,
) {
    let (plus, minus, t) = state.raw();
    plus.copy_from_slice(&base.plus);
    minus.copy_from_slice(&base.minus);
    *t = time;
    for (k, &a) in stages.iter().zip(row) {
        if a == 0.0 {
            continue;
        }
        let c = dt * a;
        for (v, s) in plus.iter_mut().zip(&k.plus) {
            *v += c * s;
        }
        for (v, s) in minus.iter_mut().zip(&k.minus) {
            *v += c * s;
        }
    }
}

fn snapshot<S: FieldState>(state: &S) -> FieldPair
where
    S: Clone,
{
    let mut copy = state.clone();
    let (plus, minus, _) = copy.raw();
    FieldPair { plus: plus.to_vec(), minus: minus.to_vec() }
}

fn store<S: FieldState>(state: &mut S, pair: &FieldPair, time: f64) {
    let (plus, minus, t) = state.raw();
    plus.copy_from_slice(&pair.plus);
    minus.copy_from_slice(&pair.minus);
    *t = time;
}

/// Advance `state` by one classic fourth-order step of signed size `dt`.
pub fn rk4_step<S: FieldState>(
    spec: &ModelSpec,
    state: &mut S,
    op: &DerivativeOperator,
    dt: f64,
) -> Result<()> {
    if !dt.is_finite() || dt == 0.0 {
        return Err(Error::InvalidParameter(format!("step {dt} must be finite and nonzero")));
    }
    let t0 = state.time();
    let y0 = snapshot(state);
    let k1 = state.eval_rhs(spec, op)?;
    let mut scratch = state.clone();

    load_stage(&mut scratch, &y0, dt, &[0.5], std::slice::from_ref(&k1), t0 + 0.5 * dt);
    let k2 = scratch.eval_rhs(spec, op)?;
    load_stage(&mut scratch, &y0, dt, &[0.0, 0.5], &[k1.clone(), k2.clone()], t0 + 0.5 * dt);
    let k3 = scratch.eval_rhs(spec, op)?;
    load_stage(
        &mut scratch,
        &y0,
        dt,
        &[0.0, 0.0, 1.0],
        &[k1.clone(), k2.clone(), k3.clone()],
        t0 + dt,
    );
    let k4 = scratch.eval_rhs(spec, op)?;

    let mut update = y0;
    accumulate(&mut update, dt / 6.0, &k1);
    accumulate(&mut update, dt / 3.0, &k2);
    accumulate(&mut update, dt / 3.0, &k3);
    accumulate(&mut update, dt / 6.0, &k4);
    store(state, &update, t0 + dt);
    Ok(())
}

/// Weighted root-mean-square of the embedded error estimate.
fn error_norm(err: &FieldPair, y0: &FieldPair, y1: &FieldPair, abs_tol: f64, rel_tol: f64) -> f64 {
    let n = err.len();
    let mut acc = 0.0;
    for k in 0..n {
        let sc_p = abs_tol + rel_tol * y0.plus[k].norm().max(y1.plus[k].norm());
        let sc_m = abs_tol + rel_tol * y0.minus[k].norm().max(y1.minus[k].norm());
        let ep = err.plus[k].norm() / sc_p;
        let em = err.minus[k].norm() / sc_m;
        acc += ep * ep + em * em;
    }
    (acc / (2 * n) as f64).sqrt()
}

/// Evolve `initial` to `t_final`, recording diagnostics at every accepted
/// step and a state sample every `sample_stride` accepted steps
/// (`0` keeps only the initial and final states). `t_final` may lie in the
/// past; the march then runs backward.
pub fn evolve<S: FieldState>(
    spec: &ModelSpec,
    initial: &S,
    op: &DerivativeOperator,
    integrator: &Integrator,
    t_final: f64,
    sample_stride: usize,
) -> Result<Trajectory<S>> {
    integrator.validate()?;
    if !t_final.is_finite() {
        return Err(Error::InvalidParameter(format!("final time {t_final} is not finite")));
    }
    assert_finite(initial, 0)?;

    let t0 = initial.time();
    let ceiling = integrator.cfl_factor * initial.grid().cfl_length();
    let mut state = initial.clone();
    let mut diagnostics = vec![DiagnosticsRecord {
        time: t0,
        norm: state.norm(),
        max_abs: state.max_abs(),
        dt: 0.0,
        steps: 0,
    }];
    let mut samples = vec![state.clone()];
    if t_final == t0 {
        return Ok(Trajectory { samples, diagnostics });
    }
    let dir = (t_final - t0).signum();
    let zero_edges = needs_edge_zeroing(initial.grid());

    let mut accepted = 0usize;
    let mut total = 0usize;

    let record = |state: &S, dt: f64, accepted: usize, samples: &mut Vec<S>,
                  diagnostics: &mut Vec<DiagnosticsRecord>| {
        diagnostics.push(DiagnosticsRecord {
            time: state.time(),
            norm: state.norm(),
            max_abs: state.max_abs(),
            dt,
            steps: accepted,
        });
        if sample_stride > 0 && accepted % sample_stride == 0 {
            samples.push(state.clone());
        }
    };

    match integrator.scheme {
        Scheme::Rk4 { dt } => {
            let dt_mag = match dt {
                Some(d) => {
                    if d > ceiling * (1.0 + 1e-12) {
                        return Err(Error::InvalidParameter(format!(
                            "explicit step {d} exceeds the CFL ceiling {ceiling:.6e}"
                        )));
                    }
                    d
                }
                None => ceiling,
            };
            loop {
                let remaining = (t_final - state.time()) * dir;
                if remaining <= ceiling * 1e-12 {
                    break;
                }
                if total >= integrator.max_steps {
                    return Err(Error::StepBudget {
                        time: state.time(),
                        max_steps: integrator.max_steps,
                    });
                }
                let h = dt_mag.min(remaining) * dir;
                rk4_step(spec, &mut state, op, h)?;
                if zero_edges {
                    apply_boundary(&mut state);
                }
                total += 1;
                accepted += 1;
                assert_finite(&state, accepted)?;
                record(&state, h, accepted, &mut samples, &mut diagnostics);
            }
        }
        Scheme::Rk45 { abs_tol, rel_tol } => {
            let mut y = snapshot(&state);
            let mut scratch = state.clone();
            let mut k1 = state.eval_rhs(spec, op)?;
            let mut k = [(); 7].map(|_| FieldPair::zeros(y.len()));
            let mut h = ceiling;
            loop {
                let remaining = (t_final - state.time()) * dir;
                if remaining <= ceiling * 1e-12 {
                    break;
                }
                if total >= integrator.max_steps {
                    return Err(Error::StepBudget {
                        time: state.time(),
                        max_steps: integrator.max_steps,
                    });
                }
                if h < 4.0 * f64::EPSILON * state.time().abs().max(1.0) {
                    return Err(Error::StepUnderflow { time: state.time() });
                }
                let t = state.time();
                let h_mag = h.min(remaining).min(ceiling);
                let hs = h_mag * dir;
                total += 1;

                k[0] = k1.clone();
                let mut bad = false;
                for i in 1..7 {
                    load_stage(&mut scratch, &y, hs, &rk::A[i - 1][..i], &k[..i], t + rk::C[i - 1] * hs);
                    match scratch.eval_rhs(spec, op) {
                        Ok(ki) => {
                            if !ki.is_finite() {
                                bad = true;
                                break;
                            }
                            k[i] = ki;
                        }
                        Err(e) => return Err(e),
                    }
                }
                if bad {
                    h = h_mag * 0.5;
                    continue;
                }

                // FSAL: stage seven's state is the fifth-order candidate.
                let mut y_next = y.clone();
                for (j, &a) in rk::A[5].iter().enumerate() {
                    if a != 0.0 {
                        accumulate(&mut y_next, hs * a, &k[j]);
                    }
                }
                let mut err = FieldPair::zeros(y.len());
                for (j, &e) in rk::E.iter().enumerate() {
                    if e != 0.0 {
                        accumulate(&mut err, hs * e, &k[j]);
                    }
                }
                let err_norm = error_norm(&err, &y, &y_next, abs_tol, rel_tol);
                if !err_norm.is_finite() || !y_next.is_finite() {
                    h = h_mag * 0.5;
                    continue;
                }
                if err_norm > 1.0 {
                    h = h_mag * rk::next_step_factor(err_norm).min(1.0);
                    continue;
                }

                store(&mut state, &y_next, t + hs);
                if zero_edges {
                    apply_boundary(&mut state);
                    y = snapshot(&state);
                    k1 = state.eval_rhs(spec, op)?;
                } else {
                    y = y_next;
                    k1 = k[6].clone();
                }
                accepted += 1;
                assert_finite(&state, accepted)?;
                record(&state, hs, accepted, &mut samples, &mut diagnostics);
                h = (h_mag * rk::next_step_factor(err_norm)).min(ceiling);
            }
        }
    }

    // The march always lands on t_final exactly via the remaining-time clamp.
    if samples.last().map(|s| s.time()) != Some(state.time()) {
        samples.push(state.clone());
    }
    Ok(Trajectory { samples, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couplings::RadicandPolicy;
    use crate::grid::{AxisKind, Boundary, Grid1D, Grid2D};
    use crate::model::{Couplings, EquationId};
    use crate::stencil::StencilOrder;
    use std::f64::consts::PI;

    fn linear_cartesian(mass: f64) -> ModelSpec {
        ModelSpec::new(
            EquationId::Eq7,
            mass,
            Couplings::ThreeVector { alpha_s: 0.0, alpha_v: 0.0, alpha_w: 0.0 },
            RadicandPolicy::default(),
        )
        .unwrap()
    }

    /// Discrete plane-wave eigenstate on a wrapped line: the mode whose
    /// spatial residual vanishes exactly for the chosen stencil.
    fn discrete_wave(n: usize, q: f64, order: StencilOrder) -> (SpinorState, f64) {
        let grid = Grid1D::wrapped(AxisKind::CartesianX, n, 0.0, 2.0 * PI).unwrap();
        let q_eff = crate::stencil::effective_wavenumber(order, q, grid.spacing());
        let eps = q_eff.abs();
        // Massless eigen-partner: a_minus / a_plus = -i q_eff / eps.
        let ratio = Complex64::new(0.0, -q_eff / eps);
        let state = SpinorState::from_fn_1d(grid, 0.0, |x| {
            let wave = Complex64::new(0.0, q * x).exp();
            (wave, ratio * wave)
        });
        (state, eps)
    }

    #[test]
    fn plane_wave_amplitude_survives_one_period() {
        let (state, eps) = discrete_wave(64, 1.0, StencilOrder::Four);
        let spec = linear_cartesian(0.0);
        let op = DerivativeOperator::new(StencilOrder::Four);
        let period = 2.0 * PI / eps;
        let integrator = Integrator::rk4().with_cfl(0.25);
        let out = evolve(&spec, &state, &op, &integrator, period, 0).unwrap();
        let end = out.final_state();
        assert!((end.time() - period).abs() < 1e-12);
        // Pure phase evolution: amplitudes return to their initial values.
        for (a, b) in state.plus().iter().zip(end.plus()) {
            assert!((a.norm() - b.norm()).abs() < 1e-8);
        }
        // And the whole state matches the analytic phase to integrator error.
        let phase = Complex64::new(0.0, -eps * period).exp();
        for (a, b) in state.plus().iter().zip(end.plus()) {
            assert!((phase * a - b).norm() < 1e-6);
        }
        assert!(out.diagnostics.len() > 2);
    }

    #[test]
    fn adaptive_scheme_matches_the_analytic_phase() {
        let (state, eps) = discrete_wave(64, 1.0, StencilOrder::Four);
        let spec = linear_cartesian(0.0);
        let op = DerivativeOperator::new(StencilOrder::Four);
        let t = 1.0;
        let integrator = Integrator::rk45().with_cfl(0.4);
        let out = evolve(&spec, &state, &op, &integrator, t, 0).unwrap();
        let end = out.final_state();
        let phase = Complex64::new(0.0, -eps * t).exp();
        for (a, b) in state.minus().iter().zip(end.minus()) {
            assert!((phase * a - b).norm() < 1e-6);
        }
        // The controller must be live: at least one interior accepted step.
        assert!(out.diagnostics.last().unwrap().steps >= 2);
    }

    #[test]
    fn forward_then_backward_recovers_the_initial_state() {
        let grid = Grid2D::periodic_box(16, -4.0, 4.0).unwrap();
        let spec = ModelSpec::new(
            EquationId::Eq12,
            1.0,
            Couplings::ComponentWise {
                alpha_plus: 0.4,
                alpha_minus: 0.2,
                beta_plus: 0.0,
                beta_minus: 0.0,
            },
            RadicandPolicy::default(),
        )
        .unwrap();
        let op = DerivativeOperator::new(StencilOrder::Four);
        let initial = SpinorState::from_fn(grid, 0.0, |x, y| {
            let g = (-0.5 * (x * x + y * y)).exp();
            (Complex64::from(g), Complex64::new(0.0, 0.3) * g)
        });
        let mut state = initial.clone();
        let dt = 0.02;
        for _ in 0..10 {
            rk4_step(&spec, &mut state, &op, dt).unwrap();
        }
        for _ in 0..10 {
            rk4_step(&spec, &mut state, &op, -dt).unwrap();
        }
        assert!(state.time().abs() < 1e-14);
        let worst = initial
            .plus()
            .iter()
            .zip(state.plus())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        // Forward and backward truncation errors do not cancel; the bound
        // is the accumulated local error at this step size.
        assert!(worst < 1e-7, "round trip defect {worst:.3e}");
    }

    #[test]
    fn hermitian_member_conserves_the_norm() {
        let grid = Grid2D::periodic_box(32, -8.0, 8.0).unwrap();
        let spec = ModelSpec::new(
            EquationId::Eq7,
            1.0,
            Couplings::ThreeVector { alpha_s: 0.5, alpha_v: 0.5, alpha_w: 0.5 },
            RadicandPolicy::default(),
        )
        .unwrap();
        let op = DerivativeOperator::new(StencilOrder::Four);
        let initial = SpinorState::from_fn(grid, 0.0, |x, y| {
            let g = (-0.5 * (x * x + y * y)).exp();
            (Complex64::from(g), Complex64::new(0.0, 0.7) * g)
        });
        let integrator = Integrator::rk4().with_cfl(0.125);
        let out = evolve(&spec, &initial, &op, &integrator, 0.5, 0).unwrap();
        let n0 = out.diagnostics.first().unwrap().norm;
        for row in &out.diagnostics {
            assert!((row.norm - n0).abs() / n0 < 1e-6, "drift at t = {}", row.time);
        }
    }

    #[test]
    fn explicit_step_above_the_ceiling_is_rejected() {
        let (state, _) = discrete_wave(16, 1.0, StencilOrder::Four);
        let spec = linear_cartesian(0.0);
        let op = DerivativeOperator::new(StencilOrder::Four);
        let integrator = Integrator::rk4().with_dt(10.0);
        let err = evolve(&spec, &state, &op, &integrator, 1.0, 0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn runaway_steps_end_in_a_nonfinite_error() {
        let grid = Grid2D::periodic_box(16, -4.0, 4.0).unwrap();
        let spec = ModelSpec::new(
            EquationId::Eq12,
            1.0,
            Couplings::ComponentWise {
                alpha_plus: 3.0,
                alpha_minus: 3.0,
                beta_plus: 0.0,
                beta_minus: 0.0,
            },
            RadicandPolicy::default(),
        )
        .unwrap();
        let op = DerivativeOperator::new(StencilOrder::Four);
        let initial = SpinorState::from_fn(grid, 0.0, |x, y| {
            let g = 5.0 * (-0.5 * (x * x + y * y)).exp();
            (Complex64::from(g), Complex64::from(0.8 * g))
        });
        // A CFL factor of 50 authorizes wildly unstable steps on purpose;
        // the amplification compounds step over step until overflow.
        let integrator = Integrator::rk4().with_cfl(50.0);
        let err = evolve(&spec, &initial, &op, &integrator, 1000.0, 0).unwrap_err();
        match err {
            Error::NonFinite { time, step, .. } => {
                assert!(step > 0);
                assert!(time.is_finite());
            }
            other => panic!("expected a non-finite error, got {other}"),
        }
    }

    #[test]
    fn dirichlet_edges_stay_pinned_to_zero() {
        let x = Grid1D::inclusive(AxisKind::CartesianX, 24, -6.0, 6.0).unwrap();
        let y = Grid1D::inclusive(AxisKind::CartesianY, 24, -6.0, 6.0).unwrap();
        let grid = Grid2D::cartesian(x, y, Boundary::DirichletZero).unwrap();
        let spec = linear_cartesian(1.0);
        let op = DerivativeOperator::new(StencilOrder::Four);
        let initial = SpinorState::from_fn(grid, 0.0, |x, y| {
            let g = (-0.5 * (x * x + y * y)).exp();
            (Complex64::from(g), Complex64::from(0.5 * g))
        });
        let integrator = Integrator::rk4().with_cfl(0.25);
        let out = evolve(&spec, &initial, &op, &integrator, 0.4, 0).unwrap();
        let end = out.final_state();
        let g2 = grid;
        for j in 0..24 {
            for (i, jj) in [(0, j), (23, j), (j, 0), (j, 23)] {
                let k = g2.idx(i, jj);
                assert_eq!(end.plus()[k], Complex64::ZERO);
                assert_eq!(end.minus()[k], Complex64::ZERO);
            }
        }
    }

    #[test]
    fn sampling_stride_collects_interior_states() {
        let (state, _) = discrete_wave(16, 1.0, StencilOrder::Four);
        let spec = linear_cartesian(0.0);
        let op = DerivativeOperator::new(StencilOrder::Four);
        let integrator = Integrator::rk4().with_cfl(0.25);
        let out = evolve(&spec, &state, &op, &integrator, 0.5, 2).unwrap();
        let steps = out.diagnostics.last().unwrap().steps;
        // Initial state, every second accepted step, and the endpoint.
        let interior = steps / 2;
        let endpoint_extra = usize::from(steps % 2 != 0);
        assert_eq!(out.samples.len(), 1 + interior + endpoint_extra);
        assert_eq!(out.samples[0].time(), 0.0);
        assert_eq!(out.final_state().time(), 0.5);
        // Times strictly increase along the samples.
        for w in out.samples.windows(2) {
            assert!(w[1].time() > w[0].time());
        }
    }

    #[test]
    fn repeated_runs_are_bit_identical() {
        let grid = Grid2D::periodic_box(16, -4.0, 4.0).unwrap();
        let spec = ModelSpec::new(
            EquationId::Eq8b,
            0.7,
            Couplings::ComponentWise {
                alpha_plus: 0.0,
                alpha_minus: 0.0,
                beta_plus: 0.3,
                beta_minus: 0.4,
            },
            RadicandPolicy::default(),
        )
        .unwrap();
        let op = DerivativeOperator::new(StencilOrder::Four);
        let initial = SpinorState::from_fn(grid, 0.0, |x, y| {
            let g = (-0.4 * (x * x + y * y)).exp();
            (Complex64::new(g, 0.1 * g), Complex64::new(0.2 * g, -0.3 * g))
        });
        let integrator = Integrator::rk45().with_cfl(0.5);
        let a = evolve(&spec, &initial, &op, &integrator, 0.3, 0).unwrap();
        let b = evolve(&spec, &initial, &op, &integrator, 0.3, 0).unwrap();
        assert_eq!(a.final_state().plus(), b.final_state().plus());
        assert_eq!(a.diagnostics, b.diagnostics);
    }
}

