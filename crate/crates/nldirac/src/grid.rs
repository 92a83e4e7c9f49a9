//! Uniform 1D and 2D grids over the spatial domains, plus the quadrature
//! weights used by norms.
//!
//! A [`Grid1D`] is a closed, uniformly spaced set of sample points. Periodic
//! axes are built with [`Grid1D::wrapped`], which excludes the wrap point so
//! that `n * spacing` equals the period; the stored bounds still satisfy the
//! inclusive-endpoint invariant `spacing = (s_max - s_min) / (n - 1)`.
//!
//! Radial grids start strictly away from the coordinate singularity at the
//! origin. [`Grid2D::cylindrical_with_margin`] places the inner edge at ten
//! spacings, the margin evolution grids use.

use crate::error::{Error, Result};

/// Smallest admissible point count per axis; every stencil in the crate fits.
pub const MIN_POINTS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AxisKind {
    CartesianX,
    CartesianY,
    RadialR,
    AngularTheta,
}

impl AxisKind {
    pub fn is_radial(self) -> bool {
        matches!(self, AxisKind::RadialR)
    }

    pub fn is_angular(self) -> bool {
        matches!(self, AxisKind::AngularTheta)
    }
}

/// Boundary handling for the non-radial axes of a [`Grid2D`].
///
/// Radial axes are always treated as closed with one-sided stencils at both
/// edges, whatever the grid's boundary value says.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Boundary {
    Periodic,
    DirichletZero,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Grid1D {
    axis: AxisKind,
    n: usize,
    s_min: f64,
    s_max: f64,
    spacing: f64,
    wraps: bool,
}

impl Grid1D {
    /// Closed axis with both endpoints included.
    pub fn inclusive(axis: AxisKind, n: usize, s_min: f64, s_max: f64) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "axis needs at least {MIN_POINTS} points, got {n}"
            )));
        }
        if !(s_min.is_finite() && s_max.is_finite()) || s_max <= s_min {
            return Err(Error::InvalidGrid(format!(
                "bounds [{s_min}, {s_max}] are not an increasing finite interval"
            )));
        }
        if axis.is_radial() && s_min <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "radial axis must start at r > 0, got r_min = {s_min}"
            )));
        }
        let spacing = (s_max - s_min) / (n - 1) as f64;
        Ok(Self { axis, n, s_min, s_max, spacing, wraps: false })
    }

    /// Axis covering the period `[start, start + period)` with the wrap point
    /// excluded, so `n * spacing` equals the period exactly.
    pub fn wrapped(axis: AxisKind, n: usize, start: f64, period: f64) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "axis needs at least {MIN_POINTS} points, got {n}"
            )));
        }
        if !(start.is_finite() && period.is_finite()) || period <= 0.0 {
            return Err(Error::InvalidGrid(format!("period {period} must be finite and positive")));
        }
        if axis.is_radial() {
            return Err(Error::InvalidGrid("a radial axis cannot wrap".into()));
        }
        let spacing = period / n as f64;
        let s_max = start + (n - 1) as f64 * spacing;
        Ok(Self { axis, n, s_min: start, s_max, spacing, wraps: true })
    }

    pub fn axis(&self) -> AxisKind {
        self.axis
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Whether the axis was built as a period with the seam point excluded.
    /// Inside a [`Grid2D`] the grid's boundary value takes precedence.
    pub fn wraps(&self) -> bool {
        self.wraps
    }

    pub fn point(&self, j: usize) -> f64 {
        debug_assert!(j < self.n);
        self.s_min + j as f64 * self.spacing
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// Trapezoid weight of point `j` for integrals over the closed interval.
    pub fn trapezoid_weight(&self, j: usize) -> f64 {
        if j == 0 || j == self.n - 1 {
            0.5 * self.spacing
        } else {
            self.spacing
        }
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Grid2D {
    first: Grid1D,
    second: Grid1D,
    boundary: Boundary,
}

impl Grid2D {
    pub fn cartesian(x: Grid1D, y: Grid1D, boundary: Boundary) -> Result<Self> {
        if x.axis() != AxisKind::CartesianX || y.axis() != AxisKind::CartesianY {
            return Err(Error::InvalidGrid(
                "cartesian grid takes a (cartesian-x, cartesian-y) axis pair".into(),
            ));
        }
        Ok(Self { first: x, second: y, boundary })
    }

    pub fn cylindrical(r: Grid1D, theta: Grid1D, boundary: Boundary) -> Result<Self> {
        if r.axis() != AxisKind::RadialR || theta.axis() != AxisKind::AngularTheta {
            return Err(Error::InvalidGrid(
                "cylindrical grid takes a (radial-r, angular-theta) axis pair".into(),
            ));
        }
        Ok(Self { first: r, second: theta, boundary })
    }

    /// Square periodic box `[lo, hi)^2` with `n` points per axis.
    pub fn periodic_box(n: usize, lo: f64, hi: f64) -> Result<Self> {
        let x = Grid1D::wrapped(AxisKind::CartesianX, n, lo, hi - lo)?;
        let y = Grid1D::wrapped(AxisKind::CartesianY, n, lo, hi - lo)?;
        Self::cartesian(x, y, Boundary::Periodic)
    }

    /// Full annulus with the inner radius placed ten spacings out, far enough
    /// that `1/r` factors stay bounded on the grid.
    pub fn cylindrical_with_margin(n_r: usize, r_max: f64, n_theta: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidGrid(format!("r_max = {r_max} must be positive")));
        }
        // r_min = 10 h and r_max = r_min + (n-1) h together fix h.
        let h = r_max / (n_r as f64 + 9.0);
        let r = Grid1D::inclusive(AxisKind::RadialR, n_r, 10.0 * h, r_max)?;
        let theta =
            Grid1D::wrapped(AxisKind::AngularTheta, n_theta, 0.0, 2.0 * std::f64::consts::PI)?;
        Self::cylindrical(r, theta, Boundary::Periodic)
    }

    pub fn first_axis(&self) -> &Grid1D {
        &self.first
    }

    pub fn second_axis(&self) -> &Grid1D {
        &self.second
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_cylindrical(&self) -> bool {
        self.first.axis().is_radial()
    }

    pub fn len(&self) -> usize {
        self.first.n * self.second.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of `(i, j)`; the second (y or theta) index varies fastest.
    pub fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.first.n && j < self.second.n);
        i * self.second.n + j
    }

    pub fn position(&self, i: usize, j: usize) -> (f64, f64) {
        (self.first.point(i), self.second.point(j))
    }

    /// Quadrature weight of one axis point: uniform `h` on wrapped axes,
    /// trapezoid on closed ones.
    pub fn axis_weight(&self, axis: GridAxis, j: usize) -> f64 {
        let (g, wraps) = match axis {
            GridAxis::First => (&self.first, self.axis_wraps(GridAxis::First)),
            GridAxis::Second => (&self.second, self.axis_wraps(GridAxis::Second)),
        };
        if wraps {
            g.spacing()
        } else {
            g.trapezoid_weight(j)
        }
    }

    /// Whether stencils wrap around on the given axis.
    pub fn axis_wraps(&self, axis: GridAxis) -> bool {
        let g = match axis {
            GridAxis::First => &self.first,
            GridAxis::Second => &self.second,
        };
        !g.axis().is_radial() && self.boundary == Boundary::Periodic
    }

    /// Minimum mesh length entering the CFL bound. On cylindrical grids the
    /// angular direction contributes its shortest arc, `r_min * h_theta`.
    pub fn cfl_length(&self) -> f64 {
        let h1 = self.first.spacing();
        let h2 = if self.is_cylindrical() {
            self.first.s_min() * self.second.spacing()
        } else {
            self.second.spacing()
        };
        h1.min(h2)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GridAxis {
    First,
    Second,
}

/// Domain of a field: a single axis or a two-axis product.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Grid {
    One(Grid1D),
    Two(Grid2D),
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::One(g) => g.len(),
            Grid::Two(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_cylindrical(&self) -> bool {
        match self {
            Grid::One(g) => g.axis().is_radial(),
            Grid::Two(g) => g.is_cylindrical(),
        }
    }

    pub fn cfl_length(&self) -> f64 {
        match self {
            Grid::One(g) => g.spacing(),
            Grid::Two(g) => g.cfl_length(),
        }
    }

    pub fn as_two(&self) -> Option<&Grid2D> {
        match self {
            Grid::Two(g) => Some(g),
            Grid::One(_) => None,
        }
    }

    pub fn as_one(&self) -> Option<&Grid1D> {
        match self {
            Grid::One(g) => Some(g),
            Grid::Two(_) => None,
        }
    }
}
