//! Initial-state families shared by the first pair of observers.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::linalg::{ComplexMatrix4, DensityMatrix, C64};
use crate::{Error, Result};

/// Tolerance on p1 + p2 + p3 = 1 for the mixed family.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum FamilySpec {
    /// |ψ⁺⟩ = (|01⟩ + |10⟩)/√2.
    Maximal,
    /// √α|01⟩ + √(1−α)|10⟩, α ∈ (0, ½].
    #[serde(rename = "pure")]
    PureAlpha { alpha: f64 },
    /// p1|ψ_α⟩⟨ψ_α| + p2|01⟩⟨01| + p3|10⟩⟨10|.
    #[serde(rename = "mixed")]
    MixedClass { p1: f64, p2: f64, p3: f64, alpha: f64 },
    /// ¼[I − cosθ ZZ + α sinθ (XX + YY)], θ ∈ (0, π/4], tan(θ/2)/2 < α ≤ 1.
    Weak { theta: f64, alpha: f64 },
}

/// Correlators of the initial state that drive the witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCorrelators {
    /// ⟨σ_z⊗σ_z⟩
    pub zz: f64,
    /// ⟨σ_x⊗σ_x⟩ + ⟨σ_y⊗σ_y⟩
    pub xx_plus_yy: f64,
    /// 1 + zz, evaluated without cancellation.
    pub zz_gap: f64,
}

/// Smallest admissible α for the weak family is strictly above this value.
/// Equals (1 − cosθ)/(2 sinθ), written as tan(θ/2)/2.
pub fn weak_alpha_boundary(theta: f64) -> f64 {
    0.5 * (0.5 * theta).tan()
}

fn check_alpha_pure(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::InvalidFamilyParams(format!("alpha = {alpha} must lie in (0, 1/2]")));
    }
    Ok(())
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Maximal => "maximal",
            FamilySpec::PureAlpha { .. } => "pure",
            FamilySpec::MixedClass { .. } => "mixed",
            FamilySpec::Weak { .. } => "weak",
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilySpec::Maximal => FamilyKind::Maximal,
            FamilySpec::PureAlpha { .. } => FamilyKind::Pure,
            FamilySpec::MixedClass { .. } => FamilyKind::Mixed,
            FamilySpec::Weak { .. } => FamilyKind::Weak,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilySpec::Maximal => Ok(()),
            FamilySpec::PureAlpha { alpha } => check_alpha_pure(alpha),
            FamilySpec::MixedClass { p1, p2, p3, alpha } => {
                if !(p1 > 0.0) {
                    return Err(Error::InvalidFamilyParams(format!("p1 = {p1} must be > 0")));
                }
                if !(p2 >= 0.0) || !(p3 >= 0.0) {
                    return Err(Error::InvalidFamilyParams(format!(
                        "p2 = {p2} and p3 = {p3} must be >= 0"
                    )));
                }
                let sum = p1 + p2 + p3;
                if !((sum - 1.0).abs() <= PROBABILITY_SUM_TOL) {
                    return Err(Error::InvalidFamilyParams(format!(
                        "p1 + p2 + p3 = {sum} must equal 1"
                    )));
                }
                check_alpha_pure(alpha)
            }
            FamilySpec::Weak { theta, alpha } => {
                if !(theta > 0.0 && theta <= FRAC_PI_4) {
                    return Err(Error::InvalidFamilyParams(format!(
                        "theta = {theta} must lie in (0, pi/4]"
                    )));
                }
                if !(alpha <= 1.0) {
                    return Err(Error::InvalidFamilyParams(format!("alpha = {alpha} must be <= 1")));
                }
                let bound = weak_alpha_boundary(theta);
                if !(alpha > bound) {
                    return Err(Error::InvalidFamilyParams(format!(
                        "alpha = {alpha} must exceed (1 - cos theta)/(2 sin theta) = {bound}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Family names as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Maximal,
    Pure,
    Mixed,
    Weak,
}

impl std::str::FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "maximal" => Ok(FamilyKind::Maximal),
            "pure" => Ok(FamilyKind::Pure),
            "mixed" => Ok(FamilyKind::Mixed),
            "weak" => Ok(FamilyKind::Weak),
            other => Err(format!("unknown family `{other}` (expected maximal, pure, mixed or weak)")),
        }
    }
}

/// Loose family parameters as they arrive from flags or a config file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FamilyParams {
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p3: Option<f64>,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Maximal => "maximal",
            FamilyKind::Pure => "pure",
            FamilyKind::Mixed => "mixed",
            FamilyKind::Weak => "weak",
        }
    }

    /// Builds and validates a spec; parameters the family does not use are ignored.
    pub fn build(self, params: &FamilyParams) -> Result<FamilySpec> {
        let need = |v: Option<f64>, param: &'static str| {
            v.ok_or(Error::MissingParameter { family: self.name(), param })
        };
        let spec = match self {
            FamilyKind::Maximal => FamilySpec::Maximal,
            FamilyKind::Pure => FamilySpec::PureAlpha { alpha: need(params.alpha, "alpha")? },
            FamilyKind::Mixed => FamilySpec::MixedClass {
                p1: need(params.p1, "p1")?,
                p2: need(params.p2, "p2")?,
                p3: need(params.p3, "p3")?,
                alpha: need(params.alpha, "alpha")?,
            },
            FamilyKind::Weak => FamilySpec::Weak {
                theta: need(params.theta, "theta")?,
                alpha: need(params.alpha, "alpha")?,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn pure_alpha_ket(alpha: f64) -> [C64; 4] {
    let z = C64::new(0.0, 0.0);
    [z, C64::new(alpha.sqrt(), 0.0), C64::new((1.0 - alpha).sqrt(), 0.0), z]
}

/// The initial state ρ_{AB_1} of a family.
pub fn make_state(spec: &FamilySpec) -> Result<DensityMatrix> {
    spec.validate()?;
    match *spec {
        FamilySpec::Maximal => DensityMatrix::from_pure(pure_alpha_ket(0.5)),
        FamilySpec::PureAlpha { alpha } => DensityMatrix::from_pure(pure_alpha_ket(alpha)),
        FamilySpec::MixedClass { p1, p2, p3, alpha } => {
            let ket = pure_alpha_ket(alpha);
            let m = ComplexMatrix4::outer(&ket, &ket).scale(p1)
                + ComplexMatrix4::diagonal([0.0, p2, p3, 0.0]);
            DensityMatrix::new(m)
        }
        FamilySpec::Weak { theta, alpha } => {
            let (s, c) = theta.sin_cos();
            let gap = 2.0 * (0.5 * theta).sin().powi(2);
            let mut e =
                *ComplexMatrix4::diagonal([0.25 * gap, 0.25 * (1.0 + c), 0.25 * (1.0 + c), 0.25 * gap])
                    .entries();
            e[1][2] = C64::new(0.5 * alpha * s, 0.0);
            e[2][1] = e[1][2];
            DensityMatrix::new(ComplexMatrix4::new(e)?)
        }
    }
}

/// ⟨σ_z⊗σ_z⟩ and ⟨σ_x⊗σ_x⟩ + ⟨σ_y⊗σ_y⟩ of the initial state, in closed form.
pub fn initial_correlators(spec: &FamilySpec) -> Result<InitialCorrelators> {
    spec.validate()?;
    Ok(match *spec {
        FamilySpec::Maximal => InitialCorrelators { zz: -1.0, xx_plus_yy: 2.0, zz_gap: 0.0 },
        FamilySpec::PureAlpha { alpha } => InitialCorrelators {
            zz: -1.0,
            xx_plus_yy: 4.0 * (alpha * (1.0 - alpha)).sqrt(),
            zz_gap: 0.0,
        },
        FamilySpec::MixedClass { p1, alpha, .. } => InitialCorrelators {
            zz: -1.0,
            xx_plus_yy: 4.0 * p1 * (alpha * (1.0 - alpha)).sqrt(),
            zz_gap: 0.0,
        },
        FamilySpec::Weak { theta, alpha } => InitialCorrelators {
            zz: -theta.cos(),
            xx_plus_yy: 2.0 * alpha * theta.sin(),
            zz_gap: 2.0 * (0.5 * theta).sin().powi(2),
        },
    })
}
