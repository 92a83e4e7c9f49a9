//! The model registry: ten first-order spinor equations written as
//! `i d/dt psi = H(psi) psi`, differing in coordinate frame and in which
//! nonlinear couplings enter the interaction matrix.
//!
//! Every matrix splits into the free part (mass on the diagonal plus the
//! first-derivative off-diagonal entries assembled in `rhs`) and an algebraic
//! nonlinear part built here from the local field values. The cylindrical
//! members divide their nonlinear entries by `sqrt(r)`, which is exactly the
//! factor that keeps the conformal weight of each term equal to one.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::couplings::{couplings_at, NegativeRadicand, RadicandPolicy};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EquationId {
    Eq5,
    Eq7,
    Eq8a,
    Eq8b,
    Eq9,
    Eq10,
    Eq11a,
    Eq11b,
    Eq12,
    Eq13,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoordSystem {
    Cartesian,
    Cylindrical,
}

impl EquationId {
    pub const ALL: [EquationId; 10] = [
        EquationId::Eq5,
        EquationId::Eq7,
        EquationId::Eq8a,
        EquationId::Eq8b,
        EquationId::Eq9,
        EquationId::Eq10,
        EquationId::Eq11a,
        EquationId::Eq11b,
        EquationId::Eq12,
        EquationId::Eq13,
    ];

    pub fn coords(self) -> CoordSystem {
        match self {
            EquationId::Eq5
            | EquationId::Eq7
            | EquationId::Eq8a
            | EquationId::Eq8b
            | EquationId::Eq9
            | EquationId::Eq12 => CoordSystem::Cartesian,
            EquationId::Eq10 | EquationId::Eq11a | EquationId::Eq11b | EquationId::Eq13 => {
                CoordSystem::Cylindrical
            }
        }
    }

    /// Name of the coupling family this equation is parameterized by.
    pub fn family(self) -> &'static str {
        match self {
            EquationId::Eq5 => "four-vector",
            EquationId::Eq7 | EquationId::Eq10 => "three-vector",
            EquationId::Eq9 => "quadratic",
            _ => "component-wise",
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            EquationId::Eq5 => "eq5",
            EquationId::Eq7 => "eq7",
            EquationId::Eq8a => "eq8a",
            EquationId::Eq8b => "eq8b",
            EquationId::Eq9 => "eq9",
            EquationId::Eq10 => "eq10",
            EquationId::Eq11a => "eq11a",
            EquationId::Eq11b => "eq11b",
            EquationId::Eq12 => "eq12",
            EquationId::Eq13 => "eq13",
        }
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EquationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EquationId::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown model '{s}'; expected one of eq5, eq7, eq8a, eq8b, eq9, eq10, \
                     eq11a, eq11b, eq12, eq13"
                ))
            })
    }
}

/// Coupling constants, one variant per family.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Couplings {
    /// Scalar, vector, pseudo-vector, and tensor couplings (eq5).
    FourVector {
        alpha_s: f64,
        alpha_v: f64,
        alpha_u: f64,
        alpha_w: f64,
    },
    /// eq5 with the pseudo-vector coupling gauged away (eq7, eq10).
    ThreeVector {
        alpha_s: f64,
        alpha_v: f64,
        alpha_w: f64,
    },
    /// Per-component moduli on the diagonal, component mixes off it
    /// (eq8a, eq8b, eq11a, eq11b, eq12, eq13).
    ComponentWise {
        alpha_plus: f64,
        alpha_minus: f64,
        beta_plus: f64,
        beta_minus: f64,
    },
    /// Squared moduli on the diagonal, the plain tensor radicand off it
    /// (eq9). Degree two in the amplitude, hence not conformal.
    Quadratic {
        alpha_plus: f64,
        alpha_minus: f64,
        alpha_w: f64,
    },
}

impl Couplings {
    pub fn family(&self) -> &'static str {
        match self {
            Couplings::FourVector { .. } => "four-vector",
            Couplings::ThreeVector { .. } => "three-vector",
            Couplings::ComponentWise { .. } => "component-wise",
            Couplings::Quadratic { .. } => "quadratic",
        }
    }

    pub fn zeros_for(equation: EquationId) -> Self {
        match equation.family() {
            "four-vector" => Couplings::FourVector {
                alpha_s: 0.0,
                alpha_v: 0.0,
                alpha_u: 0.0,
                alpha_w: 0.0,
            },
            "three-vector" => Couplings::ThreeVector { alpha_s: 0.0, alpha_v: 0.0, alpha_w: 0.0 },
            "quadratic" => Couplings::Quadratic { alpha_plus: 0.0, alpha_minus: 0.0, alpha_w: 0.0 },
            _ => Couplings::ComponentWise {
                alpha_plus: 0.0,
                alpha_minus: 0.0,
                beta_plus: 0.0,
                beta_minus: 0.0,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Couplings::FourVector { alpha_s, alpha_v, alpha_u, alpha_w } => {
                alpha_s == 0.0 && alpha_v == 0.0 && alpha_u == 0.0 && alpha_w == 0.0
            }
            Couplings::ThreeVector { alpha_s, alpha_v, alpha_w } => {
                alpha_s == 0.0 && alpha_v == 0.0 && alpha_w == 0.0
            }
            Couplings::ComponentWise { alpha_plus, alpha_minus, beta_plus, beta_minus } => {
                alpha_plus == 0.0 && alpha_minus == 0.0 && beta_plus == 0.0 && beta_minus == 0.0
            }
            Couplings::Quadratic { alpha_plus, alpha_minus, alpha_w } => {
                alpha_plus == 0.0 && alpha_minus == 0.0 && alpha_w == 0.0
            }
        }
    }
}

/// One member of the family: equation, mass, coupling constants, and the
/// root-branch policy for sign-indefinite radicands.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ModelSpec {
    pub equation: EquationId,
    pub mass: f64,
    pub couplings: Couplings,
    pub policy: RadicandPolicy,
}

impl ModelSpec {
    pub fn new(
        equation: EquationId,
        mass: f64,
        couplings: Couplings,
        policy: RadicandPolicy,
    ) -> Result<Self> {
        if equation.family() != couplings.family() {
            return Err(Error::CouplingMismatch {
                equation,
                expected: equation.family(),
                found: couplings.family(),
            });
        }
        if !mass.is_finite() {
            return Err(Error::InvalidParameter(format!("mass {mass} is not finite")));
        }
        Ok(Self { equation, mass, couplings, policy })
    }

    /// The linear member with the same equation and mass.
    pub fn linear(equation: EquationId, mass: f64) -> Self {
        Self {
            equation,
            mass,
            couplings: Couplings::zeros_for(equation),
            policy: RadicandPolicy::SignedSqrt,
        }
    }

    pub fn coords(&self) -> CoordSystem {
        self.equation.coords()
    }

    /// Whether the interaction matrix is Hermitian for every field value.
    ///
    /// The two conjugation-asymmetric members mix the components through a
    /// bare `beta_plus psi_plus + beta_minus psi_minus` in both off-diagonal
    /// slots; every other member pairs each entry with its conjugate.
    pub fn is_hermitian(&self) -> bool {
        !matches!(self.equation, EquationId::Eq8a | EquationId::Eq11a)
    }
}

/// Algebraic (derivative-free) part of the interaction matrix at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraicMatrix {
    pub e11: Complex64,
    pub e12: Complex64,
    pub e21: Complex64,
    pub e22: Complex64,
}

impl AlgebraicMatrix {
    pub fn apply(&self, p: Complex64, m: Complex64) -> (Complex64, Complex64) {
        (self.e11 * p + self.e12 * m, self.e21 * p + self.e22 * m)
    }

    /// Largest entrywise deviation from `A = conj(transpose(A))`.
    pub fn hermitian_defect(&self) -> f64 {
        let d11 = (self.e11 - self.e11.conj()).norm();
        let d22 = (self.e22 - self.e22.conj()).norm();
        let d12 = (self.e12 - self.e21.conj()).norm();
        d11.max(d22).max(d12)
    }
}

/// `radial` carries `r` at the evaluation point for cylindrical members and
/// must be `None` for cartesian ones; the caller owns that contract.
pub(crate) fn algebraic_entries_inner(
    spec: &ModelSpec,
    p: Complex64,
    m: Complex64,
    radial: Option<f64>,
    include_mass: bool,
) -> std::result::Result<AlgebraicMatrix, NegativeRadicand> {
    let scale = match (spec.coords(), radial) {
        (CoordSystem::Cartesian, None) => 1.0,
        (CoordSystem::Cylindrical, Some(r)) => {
            assert!(r > 0.0, "cylindrical entries need r > 0, got {r}");
            1.0 / r.sqrt()
        }
        (CoordSystem::Cartesian, Some(_)) => {
            panic!("{} is cartesian; no radial coordinate applies", spec.equation)
        }
        (CoordSystem::Cylindrical, None) => {
            panic!("{} is cylindrical; the radial coordinate is required", spec.equation)
        }
    };
    let mass = if include_mass { spec.mass } else { 0.0 };

    let re = Complex64::from;
    let (mut e11, mut e22, e12, e21);
    match spec.couplings {
        Couplings::FourVector { alpha_s, alpha_v, alpha_u, alpha_w } => {
            let pc = couplings_at(p, m, spec.policy)?;
            let diag_s = scale * alpha_s * pc.s_tilde;
            let diag_v = scale * alpha_v * pc.v_tilde;
            e11 = re(diag_s + diag_v);
            e22 = re(-diag_s + diag_v);
            let off = Complex64::new(
                scale * alpha_w * pc.w_tilde,
                scale * alpha_u * pc.u_tilde,
            );
            e12 = off;
            e21 = off.conj();
        }
        Couplings::ThreeVector { alpha_s, alpha_v, alpha_w } => {
            let pc = couplings_at(p, m, spec.policy)?;
            let diag_s = scale * alpha_s * pc.s_tilde;
            let diag_v = scale * alpha_v * pc.v_tilde;
            e11 = re(diag_s + diag_v);
            e22 = re(-diag_s + diag_v);
            e12 = re(scale * alpha_w * pc.w_tilde);
            e21 = e12;
        }
        Couplings::ComponentWise { alpha_plus, alpha_minus, beta_plus, beta_minus } => {
            let ap = p.norm();
            let am = m.norm();
            e11 = re(scale * (alpha_plus * ap + alpha_minus * am));
            e22 = re(scale * (alpha_plus * am + alpha_minus * ap));
            match spec.equation {
                EquationId::Eq8a | EquationId::Eq11a => {
                    let mix = (beta_plus * p + beta_minus * m) * scale;
                    e12 = mix;
                    e21 = mix;
                }
                EquationId::Eq8b | EquationId::Eq11b => {
                    let mix = (beta_plus * p + beta_minus * m) * scale;
                    e12 = mix.conj();
                    e21 = mix;
                }
                EquationId::Eq12 | EquationId::Eq13 => {
                    let mix = re(scale * (beta_plus * ap + beta_minus * am));
                    e12 = mix;
                    e21 = mix;
                }
                other => unreachable!("{other} does not take component-wise couplings"),
            }
        }
        Couplings::Quadratic { alpha_plus, alpha_minus, alpha_w } => {
            let pp = p.norm_sqr();
            let mm = m.norm_sqr();
            e11 = re(alpha_plus * pp + alpha_minus * mm);
            e22 = re(alpha_plus * mm + alpha_minus * pp);
            // The tensor radicand enters unrooted here.
            let cross = p.conj() * m;
            e12 = re(alpha_w * (cross + cross.conj()).re);
            e21 = e12;
        }
    }
    e11 += mass;
    e22 -= mass;
    Ok(AlgebraicMatrix { e11, e12, e21, e22 })
}

/// Full algebraic matrix (mass plus nonlinear couplings) at one point.
pub fn algebraic_entries(
    spec: &ModelSpec,
    p: Complex64,
    m: Complex64,
    radial: Option<f64>,
) -> Result<AlgebraicMatrix> {
    algebraic_entries_inner(spec, p, m, radial, true).map_err(|e| e.at(0))
}

/// Nonlinear part alone, with the mass diagonal removed.
pub fn nonlinear_entries(
    spec: &ModelSpec,
    p: Complex64,
    m: Complex64,
    radial: Option<f64>,
) -> Result<AlgebraicMatrix> {
    algebraic_entries_inner(spec, p, m, radial, false).map_err(|e| e.at(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(equation: EquationId, mass: f64, couplings: Couplings) -> ModelSpec {
        ModelSpec::new(equation, mass, couplings, RadicandPolicy::SignedSqrt).unwrap()
    }

    fn radial_for(e: EquationId, r: f64) -> Option<f64> {
        match e.coords() {
            CoordSystem::Cartesian => None,
            CoordSystem::Cylindrical => Some(r),
        }
    }

    fn generic_spec(e: EquationId) -> ModelSpec {
        let couplings = match e.family() {
            "four-vector" => Couplings::FourVector {
                alpha_s: 0.3,
                alpha_v: -0.2,
                alpha_u: 0.7,
                alpha_w: 0.4,
            },
            "three-vector" => Couplings::ThreeVector { alpha_s: 0.3, alpha_v: -0.2, alpha_w: 0.4 },
            "quadratic" => Couplings::Quadratic { alpha_plus: 0.6, alpha_minus: -0.3, alpha_w: 0.5 },
            _ => Couplings::ComponentWise {
                alpha_plus: 0.6,
                alpha_minus: -0.3,
                beta_plus: 0.8,
                beta_minus: 0.5,
            },
        };
        spec(e, 0.75, couplings)
    }

    #[test]
    fn family_mismatch_is_rejected() {
        let err = ModelSpec::new(
            EquationId::Eq7,
            1.0,
            Couplings::FourVector { alpha_s: 0.0, alpha_v: 0.0, alpha_u: 0.0, alpha_w: 0.0 },
            RadicandPolicy::SignedSqrt,
        );
        assert!(matches!(err, Err(Error::CouplingMismatch { .. })));
    }

    #[test]
    fn hermiticity_table() {
        use EquationId::*;
        for e in EquationId::ALL {
            let expect = !matches!(e, Eq8a | Eq11a);
            assert_eq!(generic_spec(e).is_hermitian(), expect, "{e}");
        }
    }

    #[test]
    fn entries_match_the_hermiticity_claim_pointwise() {
        // Some probe values with nonzero phases; beta_plus = beta_minus = 1
        // so the conjugation-asymmetric members show a real defect.
        let probes = [
            (c(0.9, -0.4), c(-0.3, 0.8)),
            (c(1.0, 0.0), c(0.0, 1.0)),
            (c(0.2, 0.1), c(0.5, -0.7)),
        ];
        for e in EquationId::ALL {
            let s = generic_spec(e);
            for &(p, m) in &probes {
                let a = algebraic_entries(&s, p, m, radial_for(e, 2.0)).unwrap();
                let defect = a.hermitian_defect();
                if s.is_hermitian() {
                    assert!(defect <= 1e-14, "{e}: defect {defect:e}");
                } else {
                    assert!(defect > 1e-3, "{e}: defect {defect:e} unexpectedly small");
                }
            }
        }
    }

    #[test]
    fn conjugation_asymmetric_defect_value() {
        // For the cartesian member with both off-diagonal slots equal to
        // beta_plus p + beta_minus m, the defect |e12 - conj(e21)| equals
        // |mix - conj(mix)| = 2 |Im(mix)|.
        let s = spec(
            EquationId::Eq8a,
            0.0,
            Couplings::ComponentWise {
                alpha_plus: 0.0,
                alpha_minus: 0.0,
                beta_plus: 1.0,
                beta_minus: 1.0,
            },
        );
        let (p, m) = (c(1.0, 0.0), c(0.0, 1.0));
        let a = algebraic_entries(&s, p, m, None).unwrap();
        let mix = p + m;
        assert!((a.hermitian_defect() - 2.0 * mix.im.abs()).abs() < 1e-14);
    }

    #[test]
    fn cylindrical_entries_scale_like_inverse_sqrt_r() {
        let s = generic_spec(EquationId::Eq13);
        let (p, m) = (c(0.9, -0.4), c(-0.3, 0.8));
        let a1 = nonlinear_entries(&s, p, m, Some(1.0)).unwrap();
        let a4 = nonlinear_entries(&s, p, m, Some(4.0)).unwrap();
        assert!((a1.e12 - a4.e12 * 2.0).norm() < 1e-14);
        assert!((a1.e11 - a4.e11 * 2.0).norm() < 1e-14);
    }

    #[test]
    fn mass_sits_on_the_diagonal_unscaled() {
        let s = ModelSpec::linear(EquationId::Eq13, 1.5);
        let a = algebraic_entries(&s, c(0.4, 0.2), c(-0.1, 0.3), Some(9.0)).unwrap();
        assert_eq!(a.e11, c(1.5, 0.0));
        assert_eq!(a.e22, c(-1.5, 0.0));
        assert_eq!(a.e12, Complex64::ZERO);
        assert_eq!(a.e21, Complex64::ZERO);
    }

    #[test]
    fn quadratic_member_uses_the_unrooted_radicand() {
        let s = spec(
            EquationId::Eq9,
            0.0,
            Couplings::Quadratic { alpha_plus: 0.0, alpha_minus: 0.0, alpha_w: 1.0 },
        );
        let (p, m) = (c(1.0, 0.0), c(0.6, -0.3));
        let a = algebraic_entries(&s, p, m, None).unwrap();
        let w_rad = 2.0 * (p.conj() * m).re;
        assert!((a.e12 - c(w_rad, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn model_names_round_trip() {
        for e in EquationId::ALL {
            let back: EquationId = e.to_string().parse().unwrap();
            assert_eq!(back, e);
        }
        assert!("eq6".parse::<EquationId>().is_err());
    }
}
