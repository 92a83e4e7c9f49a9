//! Two-component spinor fields sampled on a grid.
//!
//! [`SpinorState`] holds the laboratory-frame components (psi_plus,
//! psi_minus); [`PhiState`] holds the half-angle transformed pair
//! (phi_plus, phi_minus) that the cylindrical models evolve. The two share
//! their storage layout: one flat, second-index-fastest vector per component.
//!
//! Norms integrate the invariant density. For psi that measure carries the
//! cylindrical `r` weight; for phi the weight is already absorbed into the
//! field, which is the point of the transform.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, Grid1D, Grid2D, GridAxis};

/// A pair of per-point complex samples, one vector per spinor component.
///
/// Used for right-hand sides, residuals, and integrator stages, where the
/// values belong to the same grid as some state but carry no time of their
/// own.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldPair {
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl FieldPair {
    pub fn zeros(len: usize) -> Self {
        Self { plus: vec![Complex64::ZERO; len], minus: vec![Complex64::ZERO; len] }
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.plus
            .iter()
            .chain(self.minus.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.plus
            .iter()
            .chain(self.minus.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn validate_components(
    len: usize,
    plus: &[Complex64],
    minus: &[Complex64],
    time: f64,
) -> Result<()> {
    if plus.len() != len || minus.len() != len {
        return Err(Error::InvalidParameter(format!(
            "component lengths ({}, {}) do not match the grid ({len} points)",
            plus.len(),
            minus.len()
        )));
    }
    if !time.is_finite() {
        return Err(Error::InvalidParameter(format!("time {time} is not finite")));
    }
    let finite = plus
        .iter()
        .chain(minus.iter())
        .all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite {
        return Err(Error::InvalidParameter("field data contains non-finite samples".into()));
    }
    Ok(())
}

/// Per-point quadrature weights of the grid's measure. The radial factor
/// `r` is included iff `radial_measure` is set (laboratory-frame fields on
/// cylindrical grids carry it; transformed fields do not).
pub(crate) fn measure_weights(grid: &Grid, radial_measure: bool) -> Vec<f64> {
    match grid {
        Grid::One(g) => (0..g.len())
            .map(|j| {
                let mut w = if g.wraps() { g.spacing() } else { g.trapezoid_weight(j) };
                if radial_measure && g.axis().is_radial() {
                    w *= g.point(j);
                }
                w
            })
            .collect(),
        Grid::Two(g) => {
            let (n1, n2) = (g.first_axis().len(), g.second_axis().len());
            let w2: Vec<f64> = (0..n2).map(|j| g.axis_weight(GridAxis::Second, j)).collect();
            let mut w = Vec::with_capacity(g.len());
            for i in 0..n1 {
                let mut w1 = g.axis_weight(GridAxis::First, i);
                if radial_measure && g.is_cylindrical() {
                    w1 *= g.first_axis().point(i);
                }
                w.extend(w2.iter().map(|&wj| w1 * wj));
            }
            w
        }
    }
}

/// Integral of `weight * (|plus|^2 + |minus|^2)` over the grid.
fn density_integral(
    grid: &Grid,
    plus: &[Complex64],
    minus: &[Complex64],
    radial_measure: bool,
) -> f64 {
    measure_weights(grid, radial_measure)
        .iter()
        .zip(plus.iter().zip(minus))
        .map(|(w, (p, m))| w * (p.norm_sqr() + m.norm_sqr()))
        .sum()
}

/// Laboratory-frame spinor samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorState {
    grid: Grid,
    pub(crate) plus: Vec<Complex64>,
    pub(crate) minus: Vec<Complex64>,
    pub(crate) time: f64,
}

impl SpinorState {
    pub fn new(grid: Grid, plus: Vec<Complex64>, minus: Vec<Complex64>, time: f64) -> Result<Self> {
        validate_components(grid.len(), &plus, &minus, time)?;
        Ok(Self { grid, plus, minus, time })
    }

    /// Sample a pair of component functions of the 1D coordinate.
    pub fn from_fn_1d(
        grid: Grid1D,
        time: f64,
        f: impl Fn(f64) -> (Complex64, Complex64),
    ) -> Self {
        let (plus, minus) = grid.points().map(f).unzip();
        Self { grid: Grid::One(grid), plus, minus, time }
    }

    /// Sample a pair of component functions of the two grid coordinates.
    pub fn from_fn(
        grid: Grid2D,
        time: f64,
        f: impl Fn(f64, f64) -> (Complex64, Complex64),
    ) -> Self {
        let n2 = grid.second_axis().len();
        let mut plus = Vec::with_capacity(grid.len());
        let mut minus = Vec::with_capacity(grid.len());
        for i in 0..grid.first_axis().len() {
            let a = grid.first_axis().point(i);
            for j in 0..n2 {
                let (p, m) = f(a, grid.second_axis().point(j));
                plus.push(p);
                minus.push(m);
            }
        }
        Self { grid: Grid::Two(grid), plus, minus, time }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn plus(&self) -> &[Complex64] {
        &self.plus
    }

    pub fn minus(&self) -> &[Complex64] {
        &self.minus
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    /// Invariant density integral; includes the `r` measure on cylindrical
    /// grids.
    pub fn norm(&self) -> f64 {
        density_integral(&self.grid, &self.plus, &self.minus, true)
    }

    pub fn max_abs(&self) -> f64 {
        self.plus
            .iter()
            .chain(self.minus.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Half-angle transformed spinor samples on a cylindrical grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiState {
    grid: Grid,
    pub(crate) plus: Vec<Complex64>,
    pub(crate) minus: Vec<Complex64>,
    pub(crate) time: f64,
}

impl PhiState {
    pub fn new(
        grid: Grid2D,
        plus: Vec<Complex64>,
        minus: Vec<Complex64>,
        time: f64,
    ) -> Result<Self> {
        if !grid.is_cylindrical() {
            return Err(Error::InvalidGrid(
                "phi fields live on cylindrical grids; use SpinorState on cartesian ones".into(),
            ));
        }
        validate_components(grid.len(), &plus, &minus, time)?;
        Ok(Self { grid: Grid::Two(grid), plus, minus, time })
    }

    pub fn from_fn(
        grid: Grid2D,
        time: f64,
        f: impl Fn(f64, f64) -> (Complex64, Complex64),
    ) -> Result<Self> {
        if !grid.is_cylindrical() {
            return Err(Error::InvalidGrid(
                "phi fields live on cylindrical grids; use SpinorState on cartesian ones".into(),
            ));
        }
        let n2 = grid.second_axis().len();
        let mut plus = Vec::with_capacity(grid.len());
        let mut minus = Vec::with_capacity(grid.len());
        for i in 0..grid.first_axis().len() {
            let r = grid.first_axis().point(i);
            for j in 0..n2 {
                let (p, m) = f(r, grid.second_axis().point(j));
                plus.push(p);
                minus.push(m);
            }
        }
        Ok(Self { grid: Grid::Two(grid), plus, minus, time })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// The underlying cylindrical grid (always present by construction).
    pub fn grid2(&self) -> &Grid2D {
        self.grid.as_two().expect("phi state grid is 2D by construction")
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn plus(&self) -> &[Complex64] {
        &self.plus
    }

    pub fn minus(&self) -> &[Complex64] {
        &self.minus
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    /// Plain `dr dtheta` density integral. Equals the `r`-weighted norm of
    /// the spinor it was transformed from.
    pub fn norm(&self) -> f64 {
        density_integral(&self.grid, &self.plus, &self.minus, false)
    }

    pub fn max_abs(&self) -> f64 {
        self.plus
            .iter()
            .chain(self.minus.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AxisKind, Boundary};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gaussian_density_integrates_to_pi() {
        // |psi_plus|^2 = exp(-(x^2 + y^2)) integrates to pi over the plane,
        // and the tails are below machine epsilon outside [-8, 8]^2.
        let grid = Grid2D::periodic_box(64, -8.0, 8.0).unwrap();
        let state = SpinorState::from_fn(grid, 0.0, |x, y| {
            (c((-0.5 * (x * x + y * y)).exp(), 0.0), Complex64::ZERO)
        });
        assert!((state.norm() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn cylindrical_psi_norm_carries_the_r_weight() {
        // |psi|^2 = 1 over r in [r0, r1], theta in [0, 2 pi) integrates to
        // pi (r1^2 - r0^2); the trapezoid rule is exact for the linear
        // integrand r.
        let r = Grid1D::inclusive(AxisKind::RadialR, 32, 1.0, 3.0).unwrap();
        let theta =
            Grid1D::wrapped(AxisKind::AngularTheta, 16, 0.0, 2.0 * std::f64::consts::PI).unwrap();
        let grid = Grid2D::cylindrical(r, theta, Boundary::Periodic).unwrap();
        let psi = SpinorState::from_fn(grid, 0.0, |_, _| (c(1.0, 0.0), Complex64::ZERO));
        let expected = std::f64::consts::PI * (9.0 - 1.0);
        assert!((psi.norm() - expected).abs() < 1e-12 * expected);

        // The phi-side norm of the same samples drops the r factor.
        let phi = PhiState::new(grid, psi.plus().to_vec(), psi.minus().to_vec(), 0.0).unwrap();
        let expected_phi = 2.0 * std::f64::consts::PI * 2.0;
        assert!((phi.norm() - expected_phi).abs() < 1e-12 * expected_phi);
    }

    #[test]
    fn phi_state_rejects_cartesian_grids() {
        let grid = Grid2D::periodic_box(8, 0.0, 1.0).unwrap();
        let err = PhiState::new(grid, vec![Complex64::ZERO; 64], vec![Complex64::ZERO; 64], 0.0);
        assert!(err.is_err());
    }

    #[test]
    fn construction_validates_lengths_and_finiteness() {
        let grid = Grid1D::inclusive(AxisKind::CartesianX, 8, 0.0, 1.0).unwrap();
        let bad_len = SpinorState::new(
            Grid::One(grid),
            vec![Complex64::ZERO; 7],
            vec![Complex64::ZERO; 8],
            0.0,
        );
        assert!(bad_len.is_err());
        let bad_val = SpinorState::new(
            Grid::One(grid),
            vec![c(f64::NAN, 0.0); 8],
            vec![Complex64::ZERO; 8],
            0.0,
        );
        assert!(bad_val.is_err());
    }

    #[test]
    fn norm_is_invariant_under_a_global_phase() {
        let grid = Grid2D::periodic_box(16, -4.0, 4.0).unwrap();
        let base = SpinorState::from_fn(grid, 0.0, |x, y| {
            (c((-x * x - y * y).exp(), 0.0), c(0.3 * x, 0.1 * y))
        });
        let phase = Complex64::from_polar(1.0, 0.7345);
        let rotated = SpinorState::new(
            *base.grid(),
            base.plus().iter().map(|z| z * phase).collect(),
            base.minus().iter().map(|z| z * phase).collect(),
            0.0,
        )
        .unwrap();
        assert!((base.norm() - rotated.norm()).abs() <= 1e-14 * base.norm());
    }
}
