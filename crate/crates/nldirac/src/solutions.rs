//! Catalog of closed-form stationary profiles, four rows deep, with exact
//! derivatives for oracle-grade residual checks.
//!
//! Each row fixes one separable member, a constants set, and mode parameters
//! (rows 1 and 2: zero mass and energy on the cylindrical component-wise
//! member at kappa = 0; rows 3 and 4: energy equal to the mass at zero
//! transverse wavenumber on the cartesian members). All four profiles are
//! real-valued on their validity domain.
//!
//! Row 3 is special: its two printed component formulas solve the system
//! only after being swapped. [`verify_row`] therefore measures both
//! assignments and reports which one closes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::model::{Couplings, EquationId, ModelSpec};
use crate::reduce::{reduce, ReducedProfile, ReducedSystem};

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CatalogRow {
    One,
    Two,
    Three,
    Four,
}

impl CatalogRow {
    pub const ALL: [CatalogRow; 4] =
        [CatalogRow::One, CatalogRow::Two, CatalogRow::Three, CatalogRow::Four];

    pub fn index(self) -> u8 {
        match self {
            CatalogRow::One => 1,
            CatalogRow::Two => 2,
            CatalogRow::Three => 3,
            CatalogRow::Four => 4,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(CatalogRow::One),
            2 => Ok(CatalogRow::Two),
            3 => Ok(CatalogRow::Three),
            4 => Ok(CatalogRow::Four),
            other => Err(Error::InvalidParameter(format!(
                "catalog rows are numbered 1 through 4, got {other}"
            ))),
        }
    }

    pub fn equation(self) -> EquationId {
        match self {
            CatalogRow::One | CatalogRow::Two => EquationId::Eq13,
            CatalogRow::Three => EquationId::Eq7,
            CatalogRow::Four => EquationId::Eq12,
        }
    }
}

/// Constants of one catalog row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RowConstants {
    /// Tangent-cotangent pair on the radial component-wise member.
    One { c: f64, beta_plus: f64, beta_minus: f64 },
    /// Logistic pair driven by one diagonal coupling.
    Two { c1: f64, c2: f64, alpha_minus: f64 },
    /// Inverse-power pair on the three-coupling member at epsilon = mass.
    Three { mass: f64, alpha_w: f64 },
    /// Rational pair on the cartesian component-wise member.
    Four { mass: f64, alpha_plus: f64 },
}

impl RowConstants {
    pub fn row(&self) -> CatalogRow {
        match self {
            RowConstants::One { .. } => CatalogRow::One,
            RowConstants::Two { .. } => CatalogRow::Two,
            RowConstants::Three { .. } => CatalogRow::Three,
            RowConstants::Four { .. } => CatalogRow::Four,
        }
    }

    pub fn defaults(row: CatalogRow) -> Self {
        match row {
            CatalogRow::One => RowConstants::One { c: 0.5, beta_plus: 1.0, beta_minus: 1.0 },
            CatalogRow::Two => RowConstants::Two { c1: 1.0, c2: 1.0, alpha_minus: 1.0 },
            CatalogRow::Three => RowConstants::Three { mass: 1.0, alpha_w: 1.0 },
            CatalogRow::Four => RowConstants::Four { mass: 1.0, alpha_plus: 1.0 },
        }
    }
}

/// How row 1 reads the argument of its periodic pair: the catalog form takes
/// tan/cot of `g sqrt(r)`; the linear reading `g r` is a deliberate
/// misreading kept behind this switch to prove the verifier would catch it.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum RadicalScope {
    #[default]
    SqrtRadius,
    LinearRadius,
}

/// Which catalog column feeds which spinor component.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComponentAssignment {
    Printed,
    Swapped,
}

impl ComponentAssignment {
    pub fn label(self) -> &'static str {
        match self {
            ComponentAssignment::Printed => "printed",
            ComponentAssignment::Swapped => "swapped",
        }
    }
}

/// The assignment under which each row's residual closes.
pub fn expected_assignment(row: CatalogRow) -> ComponentAssignment {
    match row {
        CatalogRow::Three => ComponentAssignment::Swapped,
        _ => ComponentAssignment::Printed,
    }
}

/// Profile values and exact derivatives at one point, in catalog (printed)
/// column order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileSample {
    pub plus: f64,
    pub minus: f64,
    pub d_plus: f64,
    pub d_minus: f64,
}

impl ProfileSample {
    /// Values and derivatives as spinor pairs under an assignment.
    pub fn assigned(&self, assignment: ComponentAssignment) -> ([Complex64; 2], [Complex64; 2]) {
        let (p, m, dp, dm) = match assignment {
            ComponentAssignment::Printed => (self.plus, self.minus, self.d_plus, self.d_minus),
            ComponentAssignment::Swapped => (self.minus, self.plus, self.d_minus, self.d_plus),
        };
        (
            [Complex64::from(p), Complex64::from(m)],
            [Complex64::from(dp), Complex64::from(dm)],
        )
    }
}

/// One catalog row bound to validated constants.
#[derive(Clone, Copy, Debug)]
pub struct ClosedFormSolution {
    constants: RowConstants,
    scope: RadicalScope,
}

impl ClosedFormSolution {
    pub fn new(constants: RowConstants) -> Result<Self> {
        Self::with_scope(constants, RadicalScope::default())
    }

    pub fn with_scope(constants: RowConstants, scope: RadicalScope) -> Result<Self> {
        let reject = |what: &str| {
            Err(Error::InvalidConstants { row: constants.row().index(), what: what.into() })
        };
        match constants {
            RowConstants::One { c, beta_plus, beta_minus } => {
                if !(c > 0.0 && c.is_finite()) {
                    return reject("the amplitude constant c must be positive");
                }
                if !(beta_plus > 0.0 && beta_minus > 0.0)
                    || !(beta_plus.is_finite() && beta_minus.is_finite())
                {
                    return reject("both mixing couplings must be positive");
                }
            }
            RowConstants::Two { c1, c2, alpha_minus } => {
                if !(c1 > 0.0 && c1.is_finite()) {
                    return reject("the amplitude constant c1 must be positive");
                }
                if !(c2 > 0.0 && c2.is_finite()) {
                    return reject("the integration constant c2 must be positive");
                }
                if !alpha_minus.is_finite() {
                    return reject("the diagonal coupling must be finite");
                }
            }
            RowConstants::Three { mass, alpha_w } => {
                if !(mass > 0.0 && mass.is_finite()) {
                    return reject("the mass must be positive");
                }
                if !(alpha_w > 0.0 && alpha_w.is_finite()) {
                    return reject("the tensor coupling must be positive");
                }
            }
            RowConstants::Four { mass, alpha_plus } => {
                if !(mass > 0.0 && mass.is_finite()) {
                    return reject("the mass must be positive");
                }
                if !(alpha_plus > 0.0 && alpha_plus.is_finite()) {
                    return reject("the diagonal coupling must be positive");
                }
            }
        }
        Ok(Self { constants, scope })
    }

    pub fn default_for(row: CatalogRow) -> Self {
        Self::new(RowConstants::defaults(row)).expect("default constants are valid")
    }

    pub fn row(&self) -> CatalogRow {
        self.constants.row()
    }

    pub fn constants(&self) -> &RowConstants {
        &self.constants
    }

    pub fn scope(&self) -> RadicalScope {
        self.scope
    }

    /// The member this row solves, with its constants planted in the right
    /// coupling slots.
    pub fn model(&self) -> ModelSpec {
        let (equation, mass, couplings) = match self.constants {
            RowConstants::One { beta_plus, beta_minus, .. } => (
                EquationId::Eq13,
                0.0,
                Couplings::ComponentWise {
                    alpha_plus: 0.0,
                    alpha_minus: 0.0,
                    beta_plus,
                    beta_minus,
                },
            ),
            RowConstants::Two { alpha_minus, .. } => (
                EquationId::Eq13,
                0.0,
                Couplings::ComponentWise {
                    alpha_plus: 0.0,
                    alpha_minus,
                    beta_plus: 0.0,
                    beta_minus: 0.0,
                },
            ),
            RowConstants::Three { mass, alpha_w } => (
                EquationId::Eq7,
                mass,
                Couplings::ThreeVector { alpha_s: 0.0, alpha_v: 0.0, alpha_w },
            ),
            RowConstants::Four { mass, alpha_plus } => (
                EquationId::Eq12,
                mass,
                Couplings::ComponentWise {
                    alpha_plus,
                    alpha_minus: 0.0,
                    beta_plus: 0.0,
                    beta_minus: 0.0,
                },
            ),
        };
        ModelSpec::new(equation, mass, couplings, Default::default())
            .expect("catalog couplings match their member")
    }

    /// Mode energy of the stationary phase.
    pub fn epsilon(&self) -> f64 {
        match self.constants {
            RowConstants::One { .. } | RowConstants::Two { .. } => 0.0,
            RowConstants::Three { mass, .. } | RowConstants::Four { mass, .. } => mass,
        }
    }

    /// Transverse wavenumber (k or kappa) of the stationary phase.
    pub fn wavenumber(&self) -> f64 {
        0.0
    }

    pub fn system(&self) -> ReducedSystem {
        reduce(&self.model(), self.epsilon(), self.wavenumber())
            .expect("catalog members are separable")
    }

    /// Argument of the row-1 periodic pair and its s-derivative.
    fn row1_argument(&self, s: f64) -> (f64, f64) {
        let RowConstants::One { c, beta_plus, beta_minus } = self.constants else {
            unreachable!("row-1 argument asked of another row")
        };
        let g = 2.0 * c * (beta_plus * beta_minus).sqrt();
        match self.scope {
            RadicalScope::SqrtRadius => (g * s.sqrt(), g / (2.0 * s.sqrt())),
            RadicalScope::LinearRadius => (g * s, g),
        }
    }

    /// Invert the row-1 argument map back to a coordinate value.
    fn row1_coordinate(&self, u: f64) -> f64 {
        let RowConstants::One { c, beta_plus, beta_minus } = self.constants else {
            unreachable!("row-1 coordinate asked of another row")
        };
        let g = 2.0 * c * (beta_plus * beta_minus).sqrt();
        match self.scope {
            RadicalScope::SqrtRadius => (u / g) * (u / g),
            RadicalScope::LinearRadius => u / g,
        }
    }

    /// Check that `s` lies in the row's validity domain, naming the nearest
    /// singular point otherwise.
    pub fn validate_point(&self, s: f64) -> Result<()> {
        let row = self.row().index();
        let fail = |nearest: f64| Err(Error::OutOfDomain { row, s, nearest });
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!("probe {s} is not finite")));
        }
        match self.constants {
            RowConstants::One { .. } => {
                if s <= 0.0 {
                    return fail(0.0);
                }
                // Valid branches: u mod pi in (0, pi/2), strictly between the
                // cot pole at j pi and the tan pole at j pi + pi/2.
                let (u, _) = self.row1_argument(s);
                let cell = (u / HALF_PI).floor();
                let offset = u - cell * HALF_PI;
                let guard = 1e-12 * u.max(1.0);
                if offset <= guard {
                    return fail(self.row1_coordinate(cell * HALF_PI));
                }
                if offset >= HALF_PI - guard {
                    return fail(self.row1_coordinate((cell + 1.0) * HALF_PI));
                }
                // Odd cells are the dead zones where a modulus flips sign
                // and the closed form stops solving the system.
                if (cell as i64).rem_euclid(2) == 1 {
                    let lo = self.row1_coordinate(cell * HALF_PI);
                    let hi = self.row1_coordinate((cell + 1.0) * HALF_PI);
                    let nearest = if (s - lo).abs() <= (hi - s).abs() { lo } else { hi };
                    return fail(nearest);
                }
                Ok(())
            }
            RowConstants::Two { .. } | RowConstants::Three { .. } => {
                if s <= 0.0 {
                    fail(0.0)
                } else {
                    Ok(())
                }
            }
            RowConstants::Four { mass, .. } => {
                if s <= 0.0 {
                    let pole = -1.0 / mass;
                    let nearest = if (s - pole).abs() < -s { pole } else { 0.0 };
                    fail(nearest)
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Profile values and exact derivatives at `s`, in printed column order.
    pub fn evaluate(&self, s: f64) -> Result<ProfileSample> {
        self.validate_point(s)?;
        Ok(match self.constants {
            RowConstants::One { c, beta_plus, beta_minus } => {
                let (u, du) = self.row1_argument(s);
                let a = c * (beta_minus / beta_plus).sqrt();
                let b = c * (beta_plus / beta_minus).sqrt();
                let (sin, cos) = u.sin_cos();
                let sec2 = 1.0 / (cos * cos);
                let csc2 = 1.0 / (sin * sin);
                ProfileSample {
                    plus: a * sin / cos,
                    minus: b * cos / sin,
                    d_plus: a * sec2 * du,
                    d_minus: -b * csc2 * du,
                }
            }
            RowConstants::Two { c1, c2, alpha_minus } => {
                let root_s = s.sqrt();
                let grow = (2.0 * c1 * alpha_minus * root_s).exp();
                let e = c2 * grow;
                let e_inv = grow.recip() / c2;
                // Written against both E and 1/E so that either extreme
                // saturates cleanly instead of producing inf/inf.
                let plus = c1 / (1.0 + e_inv);
                let minus = c1 / (1.0 + e);
                let slope = c1 * c1 * alpha_minus / (root_s * (1.0 + e) * (1.0 + e_inv));
                ProfileSample { plus, minus, d_plus: slope, d_minus: -slope }
            }
            RowConstants::Three { mass, alpha_w } => {
                let root_2m = (2.0 * mass).sqrt();
                let root_m2 = (mass / 2.0).sqrt();
                ProfileSample {
                    plus: -3.0 / (2.0 * root_2m * alpha_w * s.powf(1.5)),
                    minus: -3.0 * root_m2 / (2.0 * alpha_w * s.sqrt()),
                    d_plus: 9.0 / (4.0 * root_2m * alpha_w * s.powf(2.5)),
                    d_minus: 3.0 * root_m2 / (4.0 * alpha_w * s.powf(1.5)),
                }
            }
            RowConstants::Four { mass, alpha_plus } => {
                let mx3 = (mass * s).powi(3);
                let den = 1.0 + mx3;
                let den2 = den * den;
                ProfileSample {
                    plus: 3.0 * mass * mass * s / (alpha_plus * den),
                    minus: 3.0 * mass / (alpha_plus * den),
                    d_plus: 3.0 * mass * mass * (1.0 - 2.0 * mx3) / (alpha_plus * den2),
                    d_minus: -9.0 * mass.powi(4) * s * s / (alpha_plus * den2),
                }
            }
        })
    }

    /// Five probes spread over the row's default validity window, placed
    /// away from every singular point for the current constants.
    pub fn default_probes(&self) -> Vec<f64> {
        match self.constants {
            RowConstants::One { .. } => {
                // Equally spaced arguments inside the first branch.
                [0.1, 0.26, 0.42, 0.58, 0.74]
                    .iter()
                    .map(|&t| self.row1_coordinate(t * HALF_PI))
                    .collect()
            }
            RowConstants::Two { .. } => vec![0.25, 0.5, 1.0, 2.0, 4.0],
            RowConstants::Three { mass, .. } | RowConstants::Four { mass, .. } => {
                [0.5, 1.0, 2.0, 3.0, 5.0].iter().map(|&s| s / mass).collect()
            }
        }
    }

    /// Sample a grid into a reduced profile plus exact derivative slices,
    /// with the given component assignment applied.
    pub fn profile_on(
        &self,
        grid: Grid1D,
        assignment: ComponentAssignment,
    ) -> Result<SampledProfile> {
        let mut plus = Vec::with_capacity(grid.len());
        let mut minus = Vec::with_capacity(grid.len());
        let mut d_plus = Vec::with_capacity(grid.len());
        let mut d_minus = Vec::with_capacity(grid.len());
        for s in grid.points() {
            let (chi, dchi) = self.evaluate(s)?.assigned(assignment);
            plus.push(chi[0]);
            minus.push(chi[1]);
            d_plus.push(dchi[0]);
            d_minus.push(dchi[1]);
        }
        Ok(SampledProfile { profile: ReducedProfile::new(grid, plus, minus)?, d_plus, d_minus })
    }
}

/// A catalog row sampled on a grid, with its exact derivative slices.
#[derive(Clone, Debug)]
pub struct SampledProfile {
    pub profile: ReducedProfile,
    pub d_plus: Vec<Complex64>,
    pub d_minus: Vec<Complex64>,
}

/// Relative residual of one assignment at one probe: the componentwise
/// defect over `max(1, |chi_plus|, |chi_minus|)`.
fn relative_residual_at(
    solution: &ClosedFormSolution,
    system: &ReducedSystem,
    s: f64,
    assignment: ComponentAssignment,
) -> Result<f64> {
    let (chi, dchi) = solution.evaluate(s)?.assigned(assignment);
    let r = system.residual_at(s, chi, dchi)?;
    let scale = 1.0_f64.max(chi[0].norm()).max(chi[1].norm());
    Ok(r[0].norm().max(r[1].norm()) / scale)
}

/// Outcome of verifying one catalog row at a set of probes.
#[derive(Clone, Debug)]
pub struct RowVerification {
    pub row: CatalogRow,
    pub probes: Vec<f64>,
    pub tolerance: f64,
    /// Worst relative residual per probe under the chosen assignment.
    pub per_probe: Vec<f64>,
    pub printed_max: f64,
    pub swapped_max: f64,
    pub chosen: ComponentAssignment,
    pub max_relative_residual: f64,
    pub pass: bool,
}

/// Measure a row at the given probes under both component assignments.
///
/// With `assignment = None` the better assignment is chosen automatically;
/// passing one pins it (and, for the assignment that does not close, shows
/// the live defect).
pub fn verify_row(
    solution: &ClosedFormSolution,
    probes: &[f64],
    tolerance: f64,
    assignment: Option<ComponentAssignment>,
) -> Result<RowVerification> {
    if probes.is_empty() {
        return Err(Error::InvalidParameter("at least one probe is required".into()));
    }
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance {tolerance} must be positive")));
    }
    let system = solution.system();
    let mut printed = Vec::with_capacity(probes.len());
    let mut swapped = Vec::with_capacity(probes.len());
    for &s in probes {
        printed.push(relative_residual_at(solution, &system, s, ComponentAssignment::Printed)?);
        swapped.push(relative_residual_at(solution, &system, s, ComponentAssignment::Swapped)?);
    }
    let printed_max = printed.iter().copied().fold(0.0, f64::max);
    let swapped_max = swapped.iter().copied().fold(0.0, f64::max);
    let chosen = assignment.unwrap_or(if swapped_max < printed_max {
        ComponentAssignment::Swapped
    } else {
        ComponentAssignment::Printed
    });
    let (per_probe, max_relative_residual) = match chosen {
        ComponentAssignment::Printed => (printed, printed_max),
        ComponentAssignment::Swapped => (swapped, swapped_max),
    };
    Ok(RowVerification {
        row: solution.row(),
        probes: probes.to_vec(),
        tolerance,
        per_probe,
        printed_max,
        swapped_max,
        chosen,
        max_relative_residual,
        pass: max_relative_residual <= tolerance,
    })
}
