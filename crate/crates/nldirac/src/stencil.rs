//! Central finite-difference first derivatives at order two or four, with
//! wrap-around on periodic axes and one-sided closures of matching order at
//! closed edges.

use num_complex::Complex64;

use crate::grid::{Grid2D, GridAxis};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum StencilOrder {
    Two,
    #[default]
    Four,
}

impl StencilOrder {
    pub fn value(self) -> usize {
        match self {
            StencilOrder::Two => 2,
            StencilOrder::Four => 4,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeRule {
    Wrap,
    OneSided,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct DerivativeOperator {
    pub order: StencilOrder,
}

impl DerivativeOperator {
    pub fn new(order: StencilOrder) -> Self {
        Self { order }
    }

    /// First derivative of `values` sampled with uniform spacing `h`.
    pub fn derivative_1d(
        &self,
        values: &[Complex64],
        h: f64,
        edge: EdgeRule,
        out: &mut [Complex64],
    ) {
        assert_eq!(values.len(), out.len(), "output length mismatch");
        derivative_lane(self.order, edge, values, 0, 1, values.len(), h, out, 0, 1);
    }

    /// Derivative along one axis of a flattened 2D field, lane by lane.
    /// The edge rule comes from the grid: wrap where the axis is periodic,
    /// one-sided closures elsewhere (always one-sided on the radial axis).
    pub fn derivative_axis(
        &self,
        grid: &Grid2D,
        values: &[Complex64],
        axis: GridAxis,
        out: &mut [Complex64],
    ) {
        assert_eq!(values.len(), grid.len(), "field length mismatch");
        assert_eq!(out.len(), grid.len(), "output length mismatch");
        let (n1, n2) = (grid.first_axis().len(), grid.second_axis().len());
        let edge = if grid.axis_wraps(axis) { EdgeRule::Wrap } else { EdgeRule::OneSided };
        match axis {
            GridAxis::First => {
                let h = grid.first_axis().spacing();
                for j in 0..n2 {
                    derivative_lane(self.order, edge, values, j, n2, n1, h, out, j, n2);
                }
            }
            GridAxis::Second => {
                let h = grid.second_axis().spacing();
                for i in 0..n1 {
                    let base = i * n2;
                    derivative_lane(self.order, edge, values, base, 1, n2, h, out, base, 1);
                }
            }
        }
    }
}

/// Phase velocity a discrete mode `exp(i q s)` actually propagates with:
/// the central stencil turns the exact factor `i q` into `i q_eff`.
pub fn effective_wavenumber(order: StencilOrder, q: f64, h: f64) -> f64 {
    match order {
        StencilOrder::Two => (q * h).sin() / h,
        StencilOrder::Four => (8.0 * (q * h).sin() - (2.0 * q * h).sin()) / (6.0 * h),
    }
}

#[allow(clippy::too_many_arguments)]
fn derivative_lane(
    order: StencilOrder,
    edge: EdgeRule,
    values: &[Complex64],
    base: usize,
    stride: usize,
    n: usize,
    h: f64,
    out: &mut [Complex64],
    out_base: usize,
    out_stride: usize,
) {
    debug_assert!(n >= 8, "stencil closures need at least 8 points");
    let v = |k: usize| values[base + k * stride];
    match (order, edge) {
        (StencilOrder::Two, EdgeRule::Wrap) => {
            let inv = 1.0 / (2.0 * h);
            for k in 0..n {
                let prev = v((k + n - 1) % n);
                let next = v((k + 1) % n);
                out[out_base + k * out_stride] = (next - prev) * inv;
            }
        }
        (StencilOrder::Two, EdgeRule::OneSided) => {
            let inv = 1.0 / (2.0 * h);
            out[out_base] = (v(0) * -3.0 + v(1) * 4.0 - v(2)) * inv;
            for k in 1..n - 1 {
                out[out_base + k * out_stride] = (v(k + 1) - v(k - 1)) * inv;
            }
            out[out_base + (n - 1) * out_stride] =
                (v(n - 1) * 3.0 - v(n - 2) * 4.0 + v(n - 3)) * inv;
        }
        (StencilOrder::Four, EdgeRule::Wrap) => {
            let inv = 1.0 / (12.0 * h);
            for k in 0..n {
                let m2 = v((k + n - 2) % n);
                let m1 = v((k + n - 1) % n);
                let p1 = v((k + 1) % n);
                let p2 = v((k + 2) % n);
                out[out_base + k * out_stride] = (m2 - m1 * 8.0 + p1 * 8.0 - p2) * inv;
            }
        }
        (StencilOrder::Four, EdgeRule::OneSided) => {
            let inv = 1.0 / (12.0 * h);
            out[out_base] =
                (v(0) * -25.0 + v(1) * 48.0 - v(2) * 36.0 + v(3) * 16.0 - v(4) * 3.0) * inv;
            out[out_base + out_stride] =
                (v(0) * -3.0 - v(1) * 10.0 + v(2) * 18.0 - v(3) * 6.0 + v(4)) * inv;
            for k in 2..n - 2 {
                out[out_base + k * out_stride] =
                    (v(k - 2) - v(k - 1) * 8.0 + v(k + 1) * 8.0 - v(k + 2)) * inv;
            }
            out[out_base + (n - 2) * out_stride] = (v(n - 1) * 3.0 + v(n - 2) * 10.0
                - v(n - 3) * 18.0
                + v(n - 4) * 6.0
                - v(n - 5))
                * inv;
            out[out_base + (n - 1) * out_stride] = (v(n - 1) * 25.0 - v(n - 2) * 48.0
                + v(n - 3) * 36.0
                - v(n - 4) * 16.0
                + v(n - 5) * 3.0)
                * inv;
        }
    }
}
