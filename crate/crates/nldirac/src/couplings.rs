//! Pointwise nonlinear coupling values built from spinor bilinears.
//!
//! Four real combinations enter the interaction matrices:
//!
//! * `s_tilde`: root of `|psi_plus|^2 - |psi_minus|^2`
//! * `v_tilde`: root of `|psi_plus|^2 + |psi_minus|^2` (never negative)
//! * `u_tilde`: root of `i (conj(p) m - p conj(m)) = -2 Im(conj(p) m)`
//! * `w_tilde`: root of `conj(p) m + p conj(m) = 2 Re(conj(p) m)`
//!
//! Three of the radicands can go negative; [`RadicandPolicy`] picks the root
//! branch. The default signed root `sgn(x) sqrt(|x|)` keeps every coupling
//! odd in its radicand, which is what the scaling checks assume.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum RadicandPolicy {
    /// `sgn(x) sqrt(|x|)`.
    #[default]
    SignedSqrt,
    /// Negative radicands contribute zero.
    ClampToZero,
    /// Negative radicands abort with the offending index and value.
    ErrorOnNegative,
}

/// The four coupling values at one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointCouplings {
    pub s_tilde: f64,
    pub v_tilde: f64,
    pub u_tilde: f64,
    pub w_tilde: f64,
}

/// Raised inside a pointwise kernel; the grid pass attaches the flat index.
#[derive(Clone, Copy, Debug)]
pub(crate) struct NegativeRadicand {
    pub coupling: &'static str,
    pub radicand: f64,
}

impl NegativeRadicand {
    pub(crate) fn at(self, index: usize) -> Error {
        Error::NegativeRadicand {
            coupling: self.coupling,
            index,
            radicand: self.radicand,
        }
    }
}

fn apply_root(
    name: &'static str,
    radicand: f64,
    policy: RadicandPolicy,
) -> std::result::Result<f64, NegativeRadicand> {
    if radicand >= 0.0 {
        return Ok(radicand.sqrt());
    }
    match policy {
        RadicandPolicy::SignedSqrt => Ok(-(-radicand).sqrt()),
        RadicandPolicy::ClampToZero => Ok(0.0),
        RadicandPolicy::ErrorOnNegative => Err(NegativeRadicand { coupling: name, radicand }),
    }
}

/// Radicands of the four couplings, before any root is taken.
///
/// The off-diagonal pair is computed through the complex bilinears; both are
/// real by construction and the assertion guards that identity.
pub fn radicands(p: Complex64, m: Complex64) -> (f64, f64, f64, f64) {
    let pp = p.norm_sqr();
    let mm = m.norm_sqr();
    let cross = p.conj() * m;
    let u = Complex64::I * (cross - cross.conj());
    let w = cross + cross.conj();
    let mag = cross.norm();
    assert!(
        u.im.abs() <= 1e-12 * mag.max(f64::MIN_POSITIVE),
        "u radicand picked up an imaginary part: {:e}",
        u.im
    );
    assert!(
        w.im.abs() <= 1e-12 * mag.max(f64::MIN_POSITIVE),
        "w radicand picked up an imaginary part: {:e}",
        w.im
    );
    (pp - mm, pp + mm, u.re, w.re)
}

/// All four couplings at one point under the given root policy.
pub(crate) fn couplings_at(
    p: Complex64,
    m: Complex64,
    policy: RadicandPolicy,
) -> std::result::Result<PointCouplings, NegativeRadicand> {
    let (s_rad, v_rad, u_rad, w_rad) = radicands(p, m);
    Ok(PointCouplings {
        s_tilde: apply_root("scalar", s_rad, policy)?,
        v_tilde: v_rad.sqrt(),
        u_tilde: apply_root("pseudo-vector", u_rad, policy)?,
        w_tilde: apply_root("tensor", w_rad, policy)?,
    })
}

/// Coupling fields over a whole component pair.
pub fn coupling_fields(
    plus: &[Complex64],
    minus: &[Complex64],
    policy: RadicandPolicy,
) -> Result<Vec<PointCouplings>> {
    assert_eq!(plus.len(), minus.len(), "component lengths differ");
    plus.iter()
        .zip(minus)
        .enumerate()
        .map(|(j, (&p, &m))| couplings_at(p, m, policy).map_err(|e| e.at(j)))
        .collect()
}
