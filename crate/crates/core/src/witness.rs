//! The sharpness-parameterised witness W(λ) = ¼[I + ZZ − λ²XX − λ²YY] and
//! the closed-form correlator engine.
//!
//! After k−1 rounds with sharpnesses λ_1..λ_{k−1} the correlators obey
//!
//! ```text
//! ⟨ZZ⟩_k = ⟨ZZ⟩_1 · Π (1+2Λ_l)²/9
//! ⟨XX⟩_k = ⟨XX⟩_1 · Π (1+Λ_l)²/9,      Λ_l = √(1 − λ_l²)
//! ```
//!
//! The first product tends to 1 when the sharpnesses are small, so the engine
//! tracks its deficit D = 1 − Π directly: D ← D + (1 − D)·g with
//! g = 4(1−Λ)(2+Λ)/9 and 1 − Λ = λ²/(1+Λ). Nothing here ever forms 1 − Π
//! by subtraction.

use serde::{Deserialize, Serialize};

use crate::linalg::{pauli_tensor, trace_product, Axis, ComplexMatrix4, DensityMatrix};
use crate::states::{initial_correlators, FamilySpec, InitialCorrelators};
use crate::{Error, Result};

fn check_sharpness(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidSharpness(lambda));
    }
    Ok(())
}

pub fn witness_operator(lambda: f64) -> Result<ComplexMatrix4> {
    check_sharpness(lambda)?;
    let l2 = lambda * lambda;
    Ok(witness_operator_sq(l2))
}

fn witness_operator_sq(lambda_sq: f64) -> ComplexMatrix4 {
    (ComplexMatrix4::identity() + pauli_tensor(Axis::Z, Axis::Z)
        - pauli_tensor(Axis::X, Axis::X).scale(lambda_sq)
        - pauli_tensor(Axis::Y, Axis::Y).scale(lambda_sq))
    .scale(0.25)
}

/// Tr[W(λ)ρ]. Strictly negative values certify entanglement.
pub fn witness_value(rho: &DensityMatrix, lambda: f64) -> Result<f64> {
    check_sharpness(lambda)?;
    Ok(trace_product(&witness_operator_sq(lambda * lambda), rho.matrix()))
}

/// [`witness_value`] parameterised by λ² so tiny sharpnesses survive intact.
pub fn witness_value_sq(rho: &DensityMatrix, lambda_sq: f64) -> Result<f64> {
    check_sharpness(lambda_sq)?;
    Ok(trace_product(&witness_operator_sq(lambda_sq), rho.matrix()))
}

/// g(λ²) = 1 − ((1+2Λ)/3)², evaluated without cancellation.
pub fn z_deficit_increment(lambda_sq: f64) -> f64 {
    let big = (1.0 - lambda_sq).max(0.0).sqrt();
    let one_minus = lambda_sq / (1.0 + big);
    4.0 * one_minus * (2.0 + big) / 9.0
}

/// Closed-form state of the witness-relevant correlators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationState {
    zz1: f64,
    zz1_gap: f64,
    xy1: f64,
    z_deficit: f64,
    x_factor: f64,
    rounds_applied: usize,
}

impl CorrelationState {
    /// Starts from initial correlators; 1 + zz1 is formed by plain addition.
    pub fn new(zz1: f64, xy1: f64) -> Self {
        Self::with_gap(zz1, 1.0 + zz1, xy1)
    }

    pub fn with_gap(zz1: f64, zz1_gap: f64, xy1: f64) -> Self {
        CorrelationState { zz1, zz1_gap, xy1, z_deficit: 0.0, x_factor: 1.0, rounds_applied: 0 }
    }

    pub fn from_correlators(c: &InitialCorrelators) -> Self {
        Self::with_gap(c.zz, c.zz_gap, c.xx_plus_yy)
    }

    pub fn for_family(spec: &FamilySpec) -> Result<Self> {
        Ok(Self::from_correlators(&initial_correlators(spec)?))
    }

    pub fn zz1(&self) -> f64 {
        self.zz1
    }

    pub fn xy1(&self) -> f64 {
        self.xy1
    }

    /// D_k = 1 − Π_{l<k} (1+2Λ_l)²/9.
    pub fn z_deficit(&self) -> f64 {
        self.z_deficit
    }

    /// X_k = Π_{l<k} (1+Λ_l)²/9.
    pub fn x_factor(&self) -> f64 {
        self.x_factor
    }

    pub fn rounds_applied(&self) -> usize {
        self.rounds_applied
    }

    /// Current ⟨ZZ⟩.
    pub fn zz(&self) -> f64 {
        self.zz1 * (1.0 - self.z_deficit)
    }

    /// Current ⟨XX⟩ + ⟨YY⟩.
    pub fn xy(&self) -> f64 {
        self.xy1 * self.x_factor
    }

    /// One pair round with x/y sharpness `lambda`.
    pub fn advance(&self, lambda: f64) -> Result<Self> {
        check_sharpness(lambda)?;
        Ok(self.advance_sq_unchecked(lambda * lambda))
    }

    pub fn advance_sq(&self, lambda_sq: f64) -> Result<Self> {
        check_sharpness(lambda_sq)?;
        Ok(self.advance_sq_unchecked(lambda_sq))
    }

    fn advance_sq_unchecked(&self, lambda_sq: f64) -> Self {
        let big = (1.0 - lambda_sq).max(0.0).sqrt();
        let g = z_deficit_increment(lambda_sq);
        let xf = (1.0 + big) / 3.0;
        CorrelationState {
            z_deficit: self.z_deficit + (1.0 - self.z_deficit) * g,
            x_factor: self.x_factor * xf * xf,
            rounds_applied: self.rounds_applied + 1,
            ..*self
        }
    }

    /// ¼[(1 + zz1) − zz1·D − λ²·xy1·X].
    pub fn witness_value(&self, lambda: f64) -> Result<f64> {
        check_sharpness(lambda)?;
        Ok(self.witness_value_sq_unchecked(lambda * lambda))
    }

    pub fn witness_value_sq(&self, lambda_sq: f64) -> Result<f64> {
        check_sharpness(lambda_sq)?;
        Ok(self.witness_value_sq_unchecked(lambda_sq))
    }

    fn witness_value_sq_unchecked(&self, lambda_sq: f64) -> f64 {
        0.25 * (self.threshold_numerator() - lambda_sq * self.xy1 * self.x_factor)
    }

    fn threshold_numerator(&self) -> f64 {
        self.zz1_gap - self.zz1 * self.z_deficit
    }

    /// Smallest λ² at which the current pair's witness turns negative.
    pub fn detection_threshold(&self) -> Result<f64> {
        if !(self.xy1 > 0.0) {
            return Err(Error::DegenerateFamily(self.xy1));
        }
        Ok(self.threshold_numerator() / (self.xy1 * self.x_factor))
    }
}

/// Free-function form of [`CorrelationState::advance`].
pub fn advance(c: &CorrelationState, lambda: f64) -> Result<CorrelationState> {
    c.advance(lambda)
}

/// Free-function form of [`CorrelationState::witness_value`].
pub fn closed_form_witness_value(c: &CorrelationState, lambda: f64) -> Result<f64> {
    c.witness_value(lambda)
}

/// Free-function form of [`CorrelationState::detection_threshold`].
pub fn detection_threshold(c: &CorrelationState) -> Result<f64> {
    c.detection_threshold()
}
