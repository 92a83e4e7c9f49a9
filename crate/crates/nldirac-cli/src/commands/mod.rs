//! One module per subcommand plus the parameter vocabulary they share:
//! model assembly, grid assembly, integrator and tolerance settings.

pub mod evolve;
pub mod reduce;
pub mod residual;
pub mod scale;
pub mod sweep;
pub mod verify;

use nldirac::{
    AxisKind, Boundary, Couplings, EquationId, Grid1D, Grid2D, Integrator, IvpOptions, ModelSpec,
    RadicandPolicy, StencilOrder,
};

use crate::config::Layers;
use crate::failure::{CliResult, Failure};

/// Build the model from `model`, `mass`, `policy`, and the coupling keys of
/// the model's own family; constants of other families are rejected by
/// construction because they are simply never read.
const COUPLING_KEYS: &[&str] = &[
    "alpha-s",
    "alpha-v",
    "alpha-u",
    "alpha-w",
    "alpha-plus",
    "alpha-minus",
    "beta-plus",
    "beta-minus",
];

/// A coupling key set for the wrong family would be silently dropped;
/// refuse it instead so a typoed model name cannot zero out the couplings.
fn reject_inapplicable(cfg: &Layers, equation: EquationId, applicable: &[&str]) -> CliResult<()> {
    for key in COUPLING_KEYS {
        if !applicable.contains(key) && cfg.str_opt(key).is_some() {
            return Err(Failure::input(format!(
                "key '{key}' does not apply to {equation} ({} family)",
                equation.family()
            )));
        }
    }
    Ok(())
}

pub fn model_from(cfg: &Layers) -> CliResult<ModelSpec> {
    let name = cfg
        .str_opt("model")
        .ok_or_else(|| Failure::input("missing required key 'model'"))?;
    let equation: EquationId = name.parse().map_err(Failure::from)?;
    let mass = cfg.f64("mass", 0.0)?;
    let policy = policy_from(cfg)?;
    let applicable: &[&str] = match equation.family() {
        "four-vector" => &["alpha-s", "alpha-v", "alpha-u", "alpha-w"],
        "three-vector" => &["alpha-s", "alpha-v", "alpha-w"],
        "component-wise" => &["alpha-plus", "alpha-minus", "beta-plus", "beta-minus"],
        "quadratic" => &["alpha-plus", "alpha-minus", "alpha-w"],
        _ => &[],
    };
    reject_inapplicable(cfg, equation, applicable)?;
    let couplings = match equation.family() {
        "four-vector" => Couplings::FourVector {
            alpha_s: cfg.f64("alpha-s", 0.0)?,
            alpha_v: cfg.f64("alpha-v", 0.0)?,
            alpha_u: cfg.f64("alpha-u", 0.0)?,
            alpha_w: cfg.f64("alpha-w", 0.0)?,
        },
        "three-vector" => Couplings::ThreeVector {
            alpha_s: cfg.f64("alpha-s", 0.0)?,
            alpha_v: cfg.f64("alpha-v", 0.0)?,
            alpha_w: cfg.f64("alpha-w", 0.0)?,
        },
        "component-wise" => Couplings::ComponentWise {
            alpha_plus: cfg.f64("alpha-plus", 0.0)?,
            alpha_minus: cfg.f64("alpha-minus", 0.0)?,
            beta_plus: cfg.f64("beta-plus", 0.0)?,
            beta_minus: cfg.f64("beta-minus", 0.0)?,
        },
        "quadratic" => Couplings::Quadratic {
            alpha_plus: cfg.f64("alpha-plus", 0.0)?,
            alpha_minus: cfg.f64("alpha-minus", 0.0)?,
            alpha_w: cfg.f64("alpha-w", 0.0)?,
        },
        other => return Err(Failure::input(format!("unhandled coupling family '{other}'"))),
    };
    ModelSpec::new(equation, mass, couplings, policy).map_err(Failure::from)
}

pub fn policy_from(cfg: &Layers) -> CliResult<RadicandPolicy> {
    match cfg.str("policy", "signed-sqrt").as_str() {
        "signed-sqrt" => Ok(RadicandPolicy::SignedSqrt),
        "clamp-to-zero" => Ok(RadicandPolicy::ClampToZero),
        "error-on-negative" => Ok(RadicandPolicy::ErrorOnNegative),
        other => Err(Failure::input(format!(
            "key 'policy': '{other}' is not signed-sqrt, clamp-to-zero, or error-on-negative"
        ))),
    }
}

pub fn order_from(cfg: &Layers) -> CliResult<StencilOrder> {
    match cfg.usize("order", 4)? {
        2 => Ok(StencilOrder::Two),
        4 => Ok(StencilOrder::Four),
        other => Err(Failure::input(format!("key 'order': {other} is not 2 or 4"))),
    }
}

pub fn integrator_from(cfg: &Layers) -> CliResult<Integrator> {
    let cfl = cfg.f64("cfl-factor", 0.5)?;
    let max_steps = cfg.usize("max-steps", 1_000_000)?;
    let scheme = cfg.str("scheme", "rk4");
    let base = match scheme.as_str() {
        "rk4" => {
            let base = Integrator::rk4();
            match cfg.f64_opt("dt")? {
                Some(dt) => base.with_dt(dt),
                None => base,
            }
        }
        "rk45" => Integrator {
            scheme: nldirac::Scheme::Rk45 {
                abs_tol: cfg.f64("abs-tol", 1e-10)?,
                rel_tol: cfg.f64("rel-tol", 1e-8)?,
            },
            ..Integrator::rk45()
        },
        other => {
            return Err(Failure::input(format!("key 'scheme': '{other}' is not rk4 or rk45")));
        }
    };
    Ok(Integrator { cfl_factor: cfl, max_steps, ..base })
}

pub fn ivp_options_from(cfg: &Layers) -> CliResult<IvpOptions> {
    Ok(IvpOptions {
        abs_tol: cfg.f64("abs-tol", 1e-10)?,
        rel_tol: cfg.f64("rel-tol", 1e-8)?,
        max_steps: cfg.usize("max-steps", 200_000)?,
        pole_threshold: cfg.f64("pole-threshold", 1e8)?,
        initial_step: None,
    })
}

pub fn boundary_from(cfg: &Layers) -> CliResult<Boundary> {
    match cfg.str("boundary", "periodic").as_str() {
        "periodic" => Ok(Boundary::Periodic),
        "dirichlet" => Ok(Boundary::DirichletZero),
        other => {
            Err(Failure::input(format!("key 'boundary': '{other}' is not periodic or dirichlet")))
        }
    }
}

/// Assemble the evolution grid matching the model's coordinate system.
/// Cartesian runs live on a square box; cylindrical ones on a full annulus
/// whose inner radius defaults to ten spacings, keeping `1/r` bounded.
pub fn grid_from(cfg: &Layers, spec: &ModelSpec) -> CliResult<Grid2D> {
    let boundary = boundary_from(cfg)?;
    let grid = match spec.coords() {
        nldirac::CoordSystem::Cartesian => {
            let n = cfg.usize("grid-n", 64)?;
            let lo = cfg.f64("box-min", -8.0)?;
            let hi = cfg.f64("box-max", 8.0)?;
            if boundary == Boundary::Periodic {
                Grid2D::periodic_box(n, lo, hi)
            } else {
                let x = Grid1D::inclusive(AxisKind::CartesianX, n, lo, hi)?;
                let y = Grid1D::inclusive(AxisKind::CartesianY, n, lo, hi)?;
                Grid2D::cartesian(x, y, boundary)
            }
        }
        nldirac::CoordSystem::Cylindrical => {
            let n_r = cfg.usize("grid-n-r", 64)?;
            let n_theta = cfg.usize("grid-n-theta", 64)?;
            let r_max = cfg.f64("r-max", 12.0)?;
            let r_min = match cfg.f64_opt("r-min")? {
                Some(r) => r,
                None => 10.0 * r_max / (n_r as f64 + 9.0),
            };
            let r = Grid1D::inclusive(AxisKind::RadialR, n_r, r_min, r_max)?;
            let theta = Grid1D::wrapped(
                AxisKind::AngularTheta,
                n_theta,
                0.0,
                2.0 * std::f64::consts::PI,
            )?;
            Grid2D::cylindrical(r, theta, boundary)
        }
    };
    grid.map_err(Failure::from)
}
