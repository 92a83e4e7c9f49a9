//! Analytic test fields with exact space-time derivatives, and the scaling
//! map `(D_lambda psi)(t,x,y) = lambda * psi(lambda t, lambda x, lambda y)`.
//!
//! Pointwise residuals built from exact jets carry no discretization error,
//! which makes them the right instrument for the covariance law
//! `R[D_lambda psi] = lambda^2 * R[psi] o scale`: the conformal members
//! satisfy it to rounding, the quadratic member breaks it by a predictable
//! cubic term, and a mass term breaks it by a predictable linear term.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::model::{nonlinear_entries, CoordSystem, Couplings, ModelSpec};
use crate::rhs::{h_apply_at, PointDerivatives};
use crate::state::SpinorState;

/// Value and first space-time derivatives of a field at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub dt: Complex64,
    pub dx: Complex64,
    pub dy: Complex64,
}

impl Jet {
    pub const ZERO: Jet = Jet {
        value: Complex64::ZERO,
        dt: Complex64::ZERO,
        dx: Complex64::ZERO,
        dy: Complex64::ZERO,
    };

    fn add(&mut self, other: Jet) {
        self.value += other.value;
        self.dt += other.dt;
        self.dx += other.dx;
        self.dy += other.dy;
    }
}

/// A travelling Gaussian envelope `amp * g(x,y) * exp(i(k.x - omega t))`.
///
/// The family is closed under the scaling map, so scaled states stay exactly
/// representable: `D_lambda` multiplies the amplitude, wavevector, and
/// frequency by `lambda` and divides the width and center by it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianPacket {
    pub amplitude: Complex64,
    pub center: (f64, f64),
    pub width: f64,
    pub wavevector: (f64, f64),
    pub frequency: f64,
}

impl GaussianPacket {
    pub fn jet(&self, t: f64, x: f64, y: f64) -> Jet {
        let (cx, cy) = self.center;
        let (kx, ky) = self.wavevector;
        let dx = x - cx;
        let dy = y - cy;
        let w2 = self.width * self.width;
        let envelope = (-(dx * dx + dy * dy) / (2.0 * w2)).exp();
        let phase = Complex64::new(0.0, kx * x + ky * y - self.frequency * t).exp();
        let value = self.amplitude * envelope * phase;
        Jet {
            value,
            dt: Complex64::new(0.0, -self.frequency) * value,
            dx: Complex64::new(-dx / w2, kx) * value,
            dy: Complex64::new(-dy / w2, ky) * value,
        }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            amplitude: lambda * self.amplitude,
            center: (self.center.0 / lambda, self.center.1 / lambda),
            width: self.width / lambda,
            wavevector: (lambda * self.wavevector.0, lambda * self.wavevector.1),
            frequency: lambda * self.frequency,
        }
    }
}

/// Two spinor components, each a superposition of Gaussian packets.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticState {
    plus: Vec<GaussianPacket>,
    minus: Vec<GaussianPacket>,
}

impl AnalyticState {
    pub fn new(plus: Vec<GaussianPacket>, minus: Vec<GaussianPacket>) -> Result<Self> {
        for p in plus.iter().chain(&minus) {
            if !(p.width > 0.0 && p.width.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "packet width {} must be positive",
                    p.width
                )));
            }
        }
        Ok(Self { plus, minus })
    }

    /// A fixed two-packet-per-component field with nothing aligned to the
    /// axes: the workhorse probe state for covariance checks.
    pub fn reference() -> Self {
        let plus = vec![
            GaussianPacket {
                amplitude: Complex64::new(1.0, 0.3),
                center: (0.4, -0.2),
                width: 1.0,
                wavevector: (0.7, -0.3),
                frequency: 0.9,
            },
            GaussianPacket {
                amplitude: Complex64::new(0.5, -0.2),
                center: (-0.6, 0.5),
                width: 1.4,
                wavevector: (-0.2, 0.4),
                frequency: -0.5,
            },
        ];
        let minus = vec![
            GaussianPacket {
                amplitude: Complex64::new(0.0, 0.8),
                center: (0.1, 0.3),
                width: 0.8,
                wavevector: (0.3, 0.6),
                frequency: 1.2,
            },
            GaussianPacket {
                amplitude: Complex64::new(0.4, 0.1),
                center: (-0.3, -0.4),
                width: 1.1,
                wavevector: (-0.5, -0.1),
                frequency: 0.4,
            },
        ];
        Self { plus, minus }
    }

    /// Probe points (t, x, y) used by default in covariance reports.
    pub fn default_probes() -> Vec<(f64, f64, f64)> {
        vec![
            (0.0, 0.3, -0.2),
            (0.1, -0.5, 0.4),
            (0.25, 0.8, 0.6),
            (-0.2, -0.1, -0.7),
        ]
    }

    pub fn jet_pair(&self, t: f64, x: f64, y: f64) -> (Jet, Jet) {
        let sum = |packets: &[GaussianPacket]| {
            let mut total = Jet::ZERO;
            for p in packets {
                total.add(p.jet(t, x, y));
            }
            total
        };
        (sum(&self.plus), sum(&self.minus))
    }

    /// The state under `D_lambda`, still in closed form.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scaling factor {lambda} must be positive"
            )));
        }
        Ok(Self {
            plus: self.plus.iter().map(|p| p.scaled(lambda)).collect(),
            minus: self.minus.iter().map(|p| p.scaled(lambda)).collect(),
        })
    }

    /// Sample the field on a cartesian grid at time `t`.
    pub fn sample(&self, grid: Grid2D, t: f64) -> Result<SpinorState> {
        if grid.is_cylindrical() {
            return Err(Error::InvalidGrid(
                "analytic packet fields are cartesian; sample them on a cartesian grid".into(),
            ));
        }
        Ok(SpinorState::from_fn(grid, t, |x, y| {
            let (p, m) = self.jet_pair(t, x, y);
            (p.value, m.value)
        }))
    }
}

fn expect_cartesian(spec: &ModelSpec) -> Result<()> {
    if spec.coords() == CoordSystem::Cartesian {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{} is cylindrical; pointwise analytic residuals cover the cartesian members",
            spec.equation
        )))
    }
}

/// Exact pointwise residual `i d_t psi - H(psi) psi` from the state's jets.
pub fn residual_at(
    spec: &ModelSpec,
    state: &AnalyticState,
    t: f64,
    x: f64,
    y: f64,
) -> Result<[Complex64; 2]> {
    expect_cartesian(spec)?;
    let (jp, jm) = state.jet_pair(t, x, y);
    let d = PointDerivatives {
        d1_plus: jp.dx,
        d1_minus: jm.dx,
        d2_plus: jp.dy,
        d2_minus: jm.dy,
    };
    let (h_plus, h_minus) = h_apply_at(spec, jp.value, jm.value, &d, None)?;
    Ok([Complex64::I * jp.dt - h_plus, Complex64::I * jm.dt - h_minus])
}

/// Exact covariance defect predicted from the model's non-conformal terms:
/// `(lambda^2 - lambda) m (psi_plus, -psi_minus)` for the mass and
/// `(lambda^2 - lambda^3) N(psi) psi` for the quadratic member, both
/// evaluated at the scaled point.
pub fn predicted_defect(
    spec: &ModelSpec,
    state: &AnalyticState,
    lambda: f64,
    probe: (f64, f64, f64),
) -> Result<[Complex64; 2]> {
    expect_cartesian(spec)?;
    let (t, x, y) = probe;
    let (jp, jm) = state.jet_pair(lambda * t, lambda * x, lambda * y);
    let mass_weight = (lambda * lambda - lambda) * spec.mass;
    let mut defect = [mass_weight * jp.value, -mass_weight * jm.value];
    if matches!(spec.couplings, Couplings::Quadratic { .. }) {
        let n = nonlinear_entries(spec, jp.value, jm.value, None)?;
        let (np, nm) = n.apply(jp.value, jm.value);
        let w = lambda * lambda - lambda.powi(3);
        defect[0] += w * np;
        defect[1] += w * nm;
    }
    Ok(defect)
}

/// One probe row of a covariance report.
#[derive(Clone, Copy, Debug)]
pub struct ProbeMismatch {
    pub probe: (f64, f64, f64),
    /// `max_c |R[D psi](p) - lambda^2 R[psi](lambda p)|_c`.
    pub mismatch: f64,
    /// Same norm of the predicted mass/quadratic defect.
    pub predicted: f64,
    /// Norm of (defect - prediction): rounding-level iff the model's
    /// non-conformal terms fully explain the mismatch.
    pub unexplained: f64,
    /// Cubic-term floor `|lambda - 1| / 2 * |N(D psi) D psi(p)|` for the
    /// quadratic member; zero for every other coupling family.
    pub control_floor: f64,
}

/// Covariance measurement of one model at one scaling factor.
#[derive(Clone, Debug)]
pub struct ScaleReport {
    pub lambda: f64,
    pub probes: Vec<ProbeMismatch>,
    pub max_mismatch: f64,
    pub max_unexplained: f64,
    pub max_control_floor: f64,
}

fn pair_norm(v: &[Complex64; 2]) -> f64 {
    v[0].norm().max(v[1].norm())
}

/// Compare `R[D_lambda psi]` against `lambda^2 R[psi] o scale` at the given
/// probes, with exact derivatives on both sides.
pub fn scale_check(
    spec: &ModelSpec,
    state: &AnalyticState,
    lambda: f64,
    probes: &[(f64, f64, f64)],
) -> Result<ScaleReport> {
    expect_cartesian(spec)?;
    if probes.is_empty() {
        return Err(Error::InvalidParameter("at least one probe is required".into()));
    }
    let scaled = state.scaled(lambda)?;
    let lam2 = lambda * lambda;
    let mut rows = Vec::with_capacity(probes.len());
    for &(t, x, y) in probes {
        let lhs = residual_at(spec, &scaled, t, x, y)?;
        let rhs = residual_at(spec, state, lambda * t, lambda * x, lambda * y)?;
        let defect = [lhs[0] - lam2 * rhs[0], lhs[1] - lam2 * rhs[1]];
        let predicted = predicted_defect(spec, state, lambda, (t, x, y))?;
        let gap = [defect[0] - predicted[0], defect[1] - predicted[1]];
        let control_floor = if matches!(spec.couplings, Couplings::Quadratic { .. }) {
            let (jp, jm) = scaled.jet_pair(t, x, y);
            let n = nonlinear_entries(spec, jp.value, jm.value, None)?;
            let term = n.apply(jp.value, jm.value);
            (lambda - 1.0).abs() / 2.0 * term.0.norm().max(term.1.norm())
        } else {
            0.0
        };
        rows.push(ProbeMismatch {
            probe: (t, x, y),
            mismatch: pair_norm(&defect),
            predicted: pair_norm(&predicted),
            unexplained: pair_norm(&gap),
            control_floor,
        });
    }
    let fold = |f: fn(&ProbeMismatch) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(ScaleReport {
        lambda,
        max_mismatch: fold(|r| r.mismatch),
        max_unexplained: fold(|r| r.unexplained),
        max_control_floor: fold(|r| r.control_floor),
        probes: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couplings::RadicandPolicy;
    use crate::model::EquationId;

    fn model(equation: EquationId, mass: f64) -> ModelSpec {
        let couplings = match Couplings::zeros_for(equation) {
            Couplings::FourVector { .. } => Couplings::FourVector {
                alpha_s: 0.3,
                alpha_v: 0.2,
                alpha_u: 0.4,
                alpha_w: 0.5,
            },
            Couplings::ThreeVector { .. } => {
                Couplings::ThreeVector { alpha_s: 0.3, alpha_v: 0.2, alpha_w: 0.5 }
            }
            Couplings::ComponentWise { .. } => Couplings::ComponentWise {
                alpha_plus: 0.3,
                alpha_minus: 0.2,
                beta_plus: 0.4,
                beta_minus: 0.5,
            },
            Couplings::Quadratic { .. } => {
                Couplings::Quadratic { alpha_plus: 0.3, alpha_minus: 0.2, alpha_w: 0.4 }
            }
        };
        ModelSpec::new(equation, mass, couplings, RadicandPolicy::default()).unwrap()
    }

    #[test]
    fn jets_agree_with_finite_differences() {
        let state = AnalyticState::reference();
        let h = 1e-6;
        let (t, x, y) = (0.15, 0.4, -0.3);
        let (jp, _) = state.jet_pair(t, x, y);
        let num_dt =
            (state.jet_pair(t + h, x, y).0.value - state.jet_pair(t - h, x, y).0.value)
                / (2.0 * h);
        let num_dx =
            (state.jet_pair(t, x + h, y).0.value - state.jet_pair(t, x - h, y).0.value)
                / (2.0 * h);
        let num_dy =
            (state.jet_pair(t, x, y + h).0.value - state.jet_pair(t, x, y - h).0.value)
                / (2.0 * h);
        assert!((jp.dt - num_dt).norm() < 1e-8);
        assert!((jp.dx - num_dx).norm() < 1e-8);
        assert!((jp.dy - num_dy).norm() < 1e-8);
    }

    #[test]
    fn scaling_a_packet_commutes_with_its_jet() {
        let state = AnalyticState::reference();
        let lambda = 2.0;
        let scaled = state.scaled(lambda).unwrap();
        let (t, x, y) = (0.2, -0.4, 0.7);
        let (sp, sm) = scaled.jet_pair(t, x, y);
        let (op, om) = state.jet_pair(lambda * t, lambda * x, lambda * y);
        // D_lambda multiplies values by lambda and derivatives by lambda^2.
        assert!((sp.value - lambda * op.value).norm() < 1e-14);
        assert!((sm.value - lambda * om.value).norm() < 1e-14);
        assert!((sp.dx - lambda * lambda * op.dx).norm() < 1e-13);
        assert!((sm.dt - lambda * lambda * om.dt).norm() < 1e-13);
    }

    #[test]
    fn identity_scaling_matches_exactly() {
        let state = AnalyticState::reference();
        for eq in [EquationId::Eq7, EquationId::Eq9] {
            let report =
                scale_check(&model(eq, 0.0), &state, 1.0, &AnalyticState::default_probes())
                    .unwrap();
            assert_eq!(report.max_mismatch, 0.0);
        }
    }

    #[test]
    fn massless_conformal_members_are_covariant() {
        let state = AnalyticState::reference();
        let probes = AnalyticState::default_probes();
        for eq in
            [EquationId::Eq7, EquationId::Eq8a, EquationId::Eq8b, EquationId::Eq12]
        {
            for lambda in [2.0, 1.0 / 3.0] {
                let report = scale_check(&model(eq, 0.0), &state, lambda, &probes).unwrap();
                assert!(
                    report.max_mismatch < 1e-12,
                    "{eq} at lambda {lambda}: {:.3e}",
                    report.max_mismatch
                );
            }
        }
    }

    #[test]
    fn quadratic_member_breaks_covariance_by_the_cubic_margin() {
        let state = AnalyticState::reference();
        let probes = AnalyticState::default_probes();
        for lambda in [2.0, 1.0 / 3.0] {
            let report = scale_check(&model(EquationId::Eq9, 0.0), &state, lambda, &probes)
                .unwrap();
            assert!(report.max_mismatch > 1e-3, "control too quiet at lambda {lambda}");
            for row in &report.probes {
                assert!(
                    row.mismatch >= row.control_floor * (1.0 - 1e-10),
                    "floor violated at {:?}",
                    row.probe
                );
            }
            // The cubic prediction explains the whole defect.
            assert!(report.max_unexplained < 1e-12);
        }
        // At lambda = 2 the defect sits exactly on the floor.
        let at_two =
            scale_check(&model(EquationId::Eq9, 0.0), &state, 2.0, &probes).unwrap();
        for row in &at_two.probes {
            assert!((row.mismatch - row.control_floor).abs() <= 1e-12 * row.mismatch.max(1.0));
        }
    }

    #[test]
    fn mass_term_accounts_for_the_whole_massive_mismatch() {
        let state = AnalyticState::reference();
        let probes = AnalyticState::default_probes();
        let massive = scale_check(&model(EquationId::Eq7, 1.3), &state, 2.0, &probes).unwrap();
        assert!(massive.max_mismatch > 1e-3);
        assert!(massive.max_unexplained < 1e-12);
        let massless = scale_check(&model(EquationId::Eq7, 0.0), &state, 2.0, &probes).unwrap();
        assert!(massless.max_mismatch < 1e-12);
    }

    /// Gap between the grid residual and the pointwise one at a fixed
    /// location, for an n-point box. The only difference between the two
    /// is the stencil error in the spatial derivatives.
    fn residual_gap(n: usize) -> (f64, f64) {
        use crate::state::FieldPair;
        use crate::stencil::{DerivativeOperator, StencilOrder};
        let state = AnalyticState::reference();
        let spec = model(EquationId::Eq12, 0.8);
        let t = 0.1;
        let grid = Grid2D::periodic_box(n, -12.0, 12.0).unwrap();
        let sampled = state.sample(grid, t).unwrap();
        let mut dt_field = FieldPair::zeros(grid.len());
        for i in 0..n {
            for j in 0..n {
                let (x, y) = grid.position(i, j);
                let (jp, jm) = state.jet_pair(t, x, y);
                dt_field.plus[grid.idx(i, j)] = jp.dt;
                dt_field.minus[grid.idx(i, j)] = jm.dt;
            }
        }
        let op = DerivativeOperator::new(StencilOrder::Four);
        let on_grid = crate::rhs::residual(&spec, &sampled, &dt_field, &op).unwrap();
        // Probe a point where the field, hence the residual, is order one.
        let (i, j) = (n * 50 / 96, n * 46 / 96);
        let (x, y) = grid.position(i, j);
        let exact = residual_at(&spec, &state, t, x, y).unwrap();
        assert!(exact[0].norm() + exact[1].norm() > 0.05);
        let k = grid.idx(i, j);
        let gap = (on_grid.plus[k] - exact[0])
            .norm()
            .max((on_grid.minus[k] - exact[1]).norm());
        (gap, exact[0].norm() + exact[1].norm())
    }

    #[test]
    fn pointwise_residual_matches_the_grid_residual() {
        let (coarse, scale) = residual_gap(96);
        // Small against the residual itself...
        assert!(coarse < 1e-2 * scale);
        // ...and shrinking at the stencil's rate: halving h must buy
        // close to a factor of sixteen, so this is truncation error and
        // not a term mismatch between the two assemblies.
        let (fine, _) = residual_gap(192);
        assert!(fine < coarse / 10.0);
    }
}
