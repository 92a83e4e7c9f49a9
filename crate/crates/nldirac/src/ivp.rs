//! Adaptive integration of two-component profile systems along one
//! coordinate, with dense output at requested sample points.
//!
//! The driver wraps the shared Dormand-Prince 5(4) tableau. Blow-ups are
//! first-class outcomes here: several catalog profiles run into poles at
//! finite radius, so crossing the pole threshold or driving the step size
//! to underflow ends the march cleanly with a [`HaltReason`] instead of an
//! error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rk;

/// One point of a two-component profile.
pub type Pair = [Complex64; 2];

#[derive(Clone, Copy, Debug)]
pub struct IvpOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Total step budget, accepted and rejected together.
    pub max_steps: usize,
    /// Component magnitude past which the profile counts as having hit a pole.
    pub pole_threshold: f64,
    /// Magnitude of the first trial step; estimated from the data if absent.
    pub initial_step: Option<f64>,
}

impl Default for IvpOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_steps: 200_000,
            pole_threshold: 1e8,
            initial_step: None,
        }
    }
}

/// Why the march stopped. Only reaching the far end is a full traversal;
/// the other two are honest reports about the profile itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HaltReason {
    ReachedEnd,
    PoleDetected { s: f64 },
    StepUnderflow { s: f64 },
}

impl HaltReason {
    pub fn reached_end(&self) -> bool {
        matches!(self, HaltReason::ReachedEnd)
    }

    pub fn label(&self) -> &'static str {
        match self {
            HaltReason::ReachedEnd => "reached-end",
            HaltReason::PoleDetected { .. } => "pole-detected",
            HaltReason::StepUnderflow { .. } => "step-underflow",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IvpSolution {
    pub halt: HaltReason,
    /// Where the march ended; equals the far end of the span on full traversal.
    pub s_end: f64,
    pub y_end: Pair,
    /// Dense-output values at the requested points reached before the halt.
    pub samples: Vec<(f64, Pair)>,
    pub accepted: usize,
    pub rejected: usize,
}

fn is_finite(p: &Pair) -> bool {
    p[0].is_finite() && p[1].is_finite()
}

/// `y + h * sum(row[j] * k[j])` over however many stages the row covers.
fn stage_state(y: &Pair, h: f64, row: &[f64], stages: &[Pair]) -> Pair {
    let mut out = *y;
    for (k, &a) in stages.iter().zip(row) {
        if a != 0.0 {
            out[0] += h * a * k[0];
            out[1] += h * a * k[1];
        }
    }
    out
}

fn weighted_combination(h: f64, weights: &[f64; 7], stages: &[Pair; 7]) -> Pair {
    let mut out = [Complex64::ZERO; 2];
    for (k, &w) in stages.iter().zip(weights) {
        if w != 0.0 {
            out[0] += h * w * k[0];
            out[1] += h * w * k[1];
        }
    }
    out
}

/// Integrate `dy/ds = f(s, y)` across `span`, sampling at `sample_at`.
///
/// `sample_at` must be sorted in the direction of the march and lie within
/// the span. Backward spans (`s1 < s0`) are allowed. Errors from `f`
/// propagate; non-finite stage values merely reject the step and halve it.
pub fn integrate<F>(
    mut f: F,
    span: (f64, f64),
    y0: Pair,
    sample_at: &[f64],
    opts: &IvpOptions,
) -> Result<IvpSolution>
where
    F: FnMut(f64, Pair) -> Result<Pair>,
{
    let (s0, s1) = span;
    if !s0.is_finite() || !s1.is_finite() || s0 == s1 {
        return Err(Error::InvalidParameter(format!(
            "integration span ({s0}, {s1}) must be finite with distinct ends"
        )));
    }
    if !(opts.abs_tol > 0.0 && opts.rel_tol > 0.0) {
        return Err(Error::InvalidParameter("tolerances must be positive".into()));
    }
    if !(opts.pole_threshold > 0.0) || opts.max_steps == 0 {
        return Err(Error::InvalidParameter(
            "pole threshold must be positive and the step budget nonzero".into(),
        ));
    }
    let dir = (s1 - s0).signum();
    let mut prev = s0;
    for &p in sample_at {
        if !p.is_finite() || (p - prev) * dir < 0.0 || (s1 - p) * dir < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sample point {p} is outside the span or out of march order"
            )));
        }
        prev = p;
    }
    if !is_finite(&y0) {
        return Err(Error::NonFinite { what: "initial profile data", time: s0, step: 0 });
    }

    let span_len = (s1 - s0).abs();
    let sc = |a: &Pair, b: &Pair, c: usize| {
        opts.abs_tol + opts.rel_tol * a[c].norm().max(b[c].norm())
    };

    let mut s = s0;
    let mut y = y0;
    let mut samples = Vec::with_capacity(sample_at.len());
    let mut next_sample = 0;
    while next_sample < sample_at.len() && (sample_at[next_sample] - s0) * dir <= 0.0 {
        samples.push((sample_at[next_sample], y));
        next_sample += 1;
    }

    let finish = |halt, s, y: Pair, samples, accepted, rejected| {
        Ok(IvpSolution { halt, s_end: s, y_end: y, samples, accepted, rejected })
    };

    if y[0].norm() > opts.pole_threshold || y[1].norm() > opts.pole_threshold {
        return finish(HaltReason::PoleDetected { s }, s, y, samples, 0, 0);
    }

    let mut k1 = f(s, y)?;
    if !is_finite(&k1) {
        return Err(Error::NonFinite { what: "profile derivative", time: s, step: 0 });
    }

    // First trial step: a weighted ratio of data to slope, kept well inside
    // the span; the controller corrects it within a step or two anyway.
    let mut h = match opts.initial_step {
        Some(h0) if h0.abs() > 0.0 && h0.is_finite() => h0.abs().min(span_len),
        Some(h0) => {
            return Err(Error::InvalidParameter(format!("initial step {h0} is unusable")));
        }
        None => {
            let d0 = (y[0].norm() / sc(&y, &y, 0)).hypot(y[1].norm() / sc(&y, &y, 1));
            let d1 = (k1[0].norm() / sc(&y, &y, 0)).hypot(k1[1].norm() / sc(&y, &y, 1));
            let guess = if d0 > 1e-10 && d1 > 1e-10 { 0.01 * d0 / d1 } else { span_len / 100.0 };
            guess.clamp(span_len * 1e-8, span_len / 10.0)
        }
    };

    let mut stages = [[Complex64::ZERO; 2]; 7];
    let mut accepted = 0usize;
    let mut rejected = 0usize;

    loop {
        if accepted + rejected >= opts.max_steps {
            return Err(Error::StepBudget { time: s, max_steps: opts.max_steps });
        }
        if h < 4.0 * f64::EPSILON * s.abs().max(1.0) {
            return finish(HaltReason::StepUnderflow { s }, s, y, samples, accepted, rejected);
        }

        let remaining = (s1 - s) * dir;
        let last = h >= remaining;
        let h_mag = if last { remaining } else { h };
        let hs = dir * h_mag;

        stages[0] = k1;
        let mut bad_stage = false;
        for i in 1..7 {
            let yi = stage_state(&y, hs, &rk::A[i - 1][..i], &stages[..i]);
            let ki = f(s + rk::C[i - 1] * hs, yi)?;
            if !is_finite(&ki) {
                bad_stage = true;
                break;
            }
            stages[i] = ki;
        }
        if bad_stage {
            rejected += 1;
            h = h_mag * 0.5;
            continue;
        }

        // FSAL: the seventh stage state is the fifth-order candidate.
        let y_next = stage_state(&y, hs, &rk::A[5], &stages[..6]);
        let err = weighted_combination(hs, &rk::E, &stages);
        let e0 = err[0].norm() / sc(&y, &y_next, 0);
        let e1 = err[1].norm() / sc(&y, &y_next, 1);
        let err_norm = ((e0 * e0 + e1 * e1) / 2.0).sqrt();
        if !err_norm.is_finite() || !is_finite(&y_next) {
            rejected += 1;
            h = h_mag * 0.5;
            continue;
        }

        if err_norm > 1.0 {
            rejected += 1;
            h = h_mag * rk::next_step_factor(err_norm).min(1.0);
            continue;
        }

        accepted += 1;
        let s_next = if last { s1 } else { s + hs };

        if next_sample < sample_at.len() && (sample_at[next_sample] - s_next) * dir <= 0.0 {
            // Quartic dense interpolant of this accepted interval.
            let delta = [y_next[0] - y[0], y_next[1] - y[1]];
            let r3 = [hs * stages[0][0] - delta[0], hs * stages[0][1] - delta[1]];
            let r4 = [
                delta[0] - hs * stages[6][0] - r3[0],
                delta[1] - hs * stages[6][1] - r3[1],
            ];
            let r5 = weighted_combination(hs, &rk::D, &stages);
            while next_sample < sample_at.len()
                && (sample_at[next_sample] - s_next) * dir <= 0.0
            {
                let p = sample_at[next_sample];
                let theta = ((p - s) / hs).clamp(0.0, 1.0);
                let omt = 1.0 - theta;
                let mut value = [Complex64::ZERO; 2];
                for c in 0..2 {
                    value[c] =
                        y[c] + theta * (delta[c] + omt * (r3[c] + theta * (r4[c] + omt * r5[c])));
                }
                samples.push((p, value));
                next_sample += 1;
            }
        }

        y = y_next;
        s = s_next;
        k1 = stages[6];

        if y[0].norm() > opts.pole_threshold || y[1].norm() > opts.pole_threshold {
            return finish(HaltReason::PoleDetected { s }, s, y, samples, accepted, rejected);
        }
        if last {
            return finish(HaltReason::ReachedEnd, s, y, samples, accepted, rejected);
        }
        h = h_mag * rk::next_step_factor(err_norm);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{CatalogRow, ClosedFormSolution, ComponentAssignment};

    fn rotator(s: f64, y: Pair) -> Result<Pair> {
        let _ = s;
        Ok([Complex64::I * y[0], Complex64::I * y[1]])
    }

    #[test]
    fn reproduces_a_complex_exponential() {
        let y0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let sample_at = [0.0, 1.3, 2.6, 4.0];
        let sol =
            integrate(rotator, (0.0, 4.0), y0, &sample_at, &IvpOptions::default()).unwrap();
        assert_eq!(sol.halt, HaltReason::ReachedEnd);
        assert_eq!(sol.samples.len(), 4);
        for &(s, v) in &sol.samples {
            let phase = Complex64::new(0.0, s).exp();
            assert!((v[0] - phase * y0[0]).norm() < 1e-7, "at s = {s}");
            assert!((v[1] - phase * y0[1]).norm() < 1e-7, "at s = {s}");
        }
        assert!((sol.y_end[0].norm() - 1.0).abs() < 1e-8);
        assert!(sol.accepted > 4);
    }

    #[test]
    fn marches_a_catalog_profile_to_its_closed_form() {
        let cat = ClosedFormSolution::default_for(CatalogRow::Four);
        let system = cat.system();
        let (chi0, _) = cat.evaluate(0.5).unwrap().assigned(ComponentAssignment::Printed);
        let sample_at = [1.0, 2.0, 3.0, 5.0];
        let sol = system
            .integrate((0.5, 5.0), chi0, &sample_at, &IvpOptions::default())
            .unwrap();
        assert_eq!(sol.halt, HaltReason::ReachedEnd);
        for &(s, v) in &sol.samples {
            let exact = cat.evaluate(s).unwrap();
            assert!((v[0].re - exact.plus).abs() < 1e-6, "plus at s = {s}");
            assert!((v[1].re - exact.minus).abs() < 1e-6, "minus at s = {s}");
            assert!(v[0].im.abs() < 1e-8);
        }
    }

    #[test]
    fn backward_march_matches_too() {
        let cat = ClosedFormSolution::default_for(CatalogRow::Four);
        let system = cat.system();
        let (chi0, _) = cat.evaluate(2.0).unwrap().assigned(ComponentAssignment::Printed);
        let sol = system
            .integrate((2.0, 0.5), chi0, &[1.5, 1.0, 0.5], &IvpOptions::default())
            .unwrap();
        assert_eq!(sol.halt, HaltReason::ReachedEnd);
        for &(s, v) in &sol.samples {
            let exact = cat.evaluate(s).unwrap();
            assert!((v[0].re - exact.plus).abs() < 1e-7, "plus at s = {s}");
        }
    }

    #[test]
    fn halts_cleanly_at_a_tangent_pole() {
        // Row 1 with default constants has its first pole at r = (pi/2)^2.
        let cat = ClosedFormSolution::default_for(CatalogRow::One);
        let system = cat.system();
        let pole_r = std::f64::consts::FRAC_PI_2.powi(2);
        let (chi0, _) = cat.evaluate(0.5).unwrap().assigned(ComponentAssignment::Printed);
        let opts = IvpOptions { pole_threshold: 1e6, ..Default::default() };
        let sample_at = [1.0, 1.5, 2.0, 3.0, 3.5];
        let sol = system.integrate((0.5, 3.5), chi0, &sample_at, &opts).unwrap();
        match sol.halt {
            HaltReason::PoleDetected { s } => {
                assert!((s - pole_r).abs() < 0.05, "pole flagged at {s}, expected ~{pole_r}");
            }
            other => panic!("expected a pole halt, got {other:?}"),
        }
        // Samples before the pole made it out and still match the closed form.
        assert_eq!(sol.samples.len(), 3);
        for &(s, v) in &sol.samples {
            let exact = cat.evaluate(s).unwrap();
            let scale = 1.0_f64.max(exact.plus.abs()).max(exact.minus.abs());
            assert!((v[0].re - exact.plus).abs() < 1e-5 * scale, "plus at s = {s}");
        }
    }

    #[test]
    fn underflows_cleanly_on_a_derivative_singularity() {
        // dy/ds = 1/(1 - s) has an integrable blow-up at s = 1; the
        // controller shrinks the step to nothing before reaching it.
        let f = |s: f64, _y: Pair| -> Result<Pair> {
            Ok([Complex64::from(1.0 / (1.0 - s)), Complex64::ZERO])
        };
        let sol = integrate(
            f,
            (0.0, 2.0),
            [Complex64::ZERO; 2],
            &[],
            &IvpOptions { max_steps: 1_000_000, ..Default::default() },
        )
        .unwrap();
        match sol.halt {
            HaltReason::StepUnderflow { s } => assert!((s - 1.0).abs() < 1e-3, "stalled at {s}"),
            other => panic!("expected an underflow halt, got {other:?}"),
        }
    }

    #[test]
    fn exhausting_the_step_budget_is_an_error() {
        let err = integrate(
            rotator,
            (0.0, 1000.0),
            [Complex64::ONE, Complex64::ONE],
            &[],
            &IvpOptions { max_steps: 10, ..Default::default() },
        )
        .unwrap_err();
        assert!(matches!(err, Error::StepBudget { max_steps: 10, .. }));
    }

    #[test]
    fn rejects_disordered_sample_points() {
        let err = integrate(
            rotator,
            (0.0, 1.0),
            [Complex64::ONE, Complex64::ZERO],
            &[0.8, 0.2],
            &IvpOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }
}
