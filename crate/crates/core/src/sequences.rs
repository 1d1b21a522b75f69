//! Greedy sharpness sequences, the γ bounding sequence and feasibility planners.
//!
//! A greedy sequence gives every pair (1 + ε) times the smallest λ² that still
//! lets it detect entanglement, given what earlier pairs did to the state.
//! Once that value would reach 1 the chain stops: no later pair can detect.

use serde::{Deserialize, Serialize};

use crate::states::FamilySpec;
use crate::witness::CorrelationState;
use crate::{Error, Result};

pub const DEFAULT_HORIZON_CAP: usize = 64;

/// Lower end of the λ₁² search range.
pub const LAMBDA1_FLOOR: f64 = 1e-300;

/// Resolution of the λ₁² bisection, in decades.
pub const PLAN_LOG10_RESOLUTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "lowercase")]
pub enum Truncation {
    /// Generation stopped because the requested length was reached.
    Completed,
    /// The next greedy value would have been ≥ 1.
    Saturated { next_value: f64 },
}

impl Truncation {
    pub fn is_saturated(&self) -> bool {
        matches!(self, Truncation::Saturated { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencePlan {
    pub family: FamilySpec,
    pub epsilon: f64,
    pub lambda1_sq: f64,
    /// λ²_k for k = 1..=feasible_horizon, all in (0, 1).
    pub values: Vec<f64>,
    pub feasible_horizon: usize,
    pub truncation: Truncation,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    Ok(())
}

/// λ² needed by the first pair: 0 for families with ⟨ZZ⟩ = −1,
/// (1 − cosθ)/(2α sinθ) for the weak family.
pub fn first_pair_threshold(family: &FamilySpec) -> Result<f64> {
    CorrelationState::for_family(family)?.detection_threshold()
}

/// Greedy sequence of length at most `n`, starting from `lambda1_sq`.
pub fn greedy_sequence(family: &FamilySpec, epsilon: f64, lambda1_sq: f64, n: usize) -> Result<SequencePlan> {
    family.validate()?;
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if !(lambda1_sq > 0.0 && lambda1_sq < 1.0) {
        return Err(Error::Lambda1OutOfRange { value: lambda1_sq });
    }
    let mut state = CorrelationState::for_family(family)?;
    let threshold = state.detection_threshold()?;
    if !(lambda1_sq > threshold) {
        return Err(Error::Lambda1BelowThreshold { value: lambda1_sq, threshold });
    }

    let mut values = Vec::with_capacity(n);
    values.push(lambda1_sq);
    let mut truncation = Truncation::Completed;
    while values.len() < n {
        let prev = *values.last().expect("non-empty");
        state = state.advance_sq(prev)?;
        let next = (1.0 + epsilon) * state.detection_threshold()?;
        if !next.is_finite() || next <= 0.0 {
            return Err(Error::NumericRange { k: values.len() + 1, value: next });
        }
        if next >= 1.0 {
            truncation = Truncation::Saturated { next_value: next };
            break;
        }
        values.push(next);
    }
    Ok(SequencePlan {
        family: *family,
        epsilon,
        lambda1_sq,
        feasible_horizon: values.len(),
        values,
        truncation,
    })
}

/// The γ² sequence bounding the weak-family greedy sequence from above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaBound {
    pub theta: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub values: Vec<f64>,
    pub truncation: Truncation,
}

/// γ²_1 = (1+ε)θ/(2α); for k ≥ 2
/// γ²_k = (1+ε)[1 − (1−θ²/2) Π_{l<k} (1 − 2γ²_l/3)²] / [θ Π_{l<k} ((2 − γ²_l)/3)²].
pub fn gamma_bound_sequence(theta: f64, alpha: f64, epsilon: f64, n: usize) -> Result<GammaBound> {
    FamilySpec::Weak { theta, alpha }.validate()?;
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let first = (1.0 + epsilon) * theta / (2.0 * alpha);
    let mut values = Vec::with_capacity(n);
    let mut truncation = Truncation::Completed;
    if first >= 1.0 {
        truncation = Truncation::Saturated { next_value: first };
    } else {
        values.push(first);
    }
    let cos_bound = 1.0 - 0.5 * theta * theta;
    let mut z_product = 1.0;
    let mut x_product = 1.0;
    while !truncation.is_saturated() && values.len() < n {
        let g = *values.last().expect("non-empty");
        let z = 1.0 - 2.0 * g / 3.0;
        let x = (2.0 - g) / 3.0;
        z_product *= z * z;
        x_product *= x * x;
        let next = (1.0 + epsilon) * (1.0 - cos_bound * z_product) / (theta * x_product);
        if next >= 1.0 {
            truncation = Truncation::Saturated { next_value: next };
            break;
        }
        values.push(next);
    }
    Ok(GammaBound { theta, alpha, epsilon, values, truncation })
}

/// True iff λ²_{k+1} > λ²_k for every stored k ≥ 2.
pub fn check_monotone(plan: &SequencePlan) -> Result<bool> {
    is_increasing_after_first(&plan.values)
}

pub fn is_increasing_after_first(values: &[f64]) -> Result<bool> {
    if values.len() < 3 {
        return Err(Error::TooShort(values.len()));
    }
    Ok(values[1..].windows(2).all(|w| w[1] / w[0] > 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Lambda1Plan {
    Feasible { lambda1_sq: f64 },
    Infeasible,
}

impl Lambda1Plan {
    pub fn lambda1_sq(&self) -> Option<f64> {
        match self {
            Lambda1Plan::Feasible { lambda1_sq } => Some(*lambda1_sq),
            Lambda1Plan::Infeasible => None,
        }
    }
}

fn search_floor(family: &FamilySpec) -> Result<f64> {
    let threshold = first_pair_threshold(family)?;
    Ok((threshold * (1.0 + 1e-9)).max(LAMBDA1_FLOOR))
}

fn reaches(family: &FamilySpec, epsilon: f64, lambda1_sq: f64, n: usize) -> bool {
    match greedy_sequence(family, epsilon, lambda1_sq, n) {
        Ok(plan) => plan.feasible_horizon >= n,
        Err(_) => false,
    }
}

/// Largest λ₁² (to [`PLAN_LOG10_RESOLUTION`] decades) whose greedy sequence
/// gives `n` detecting pairs.
pub fn plan_lambda1(family: &FamilySpec, epsilon: f64, n: usize) -> Result<Lambda1Plan> {
    family.validate()?;
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let floor = search_floor(family)?;
    if floor >= 1.0 || !reaches(family, epsilon, floor, n) {
        return Ok(Lambda1Plan::Infeasible);
    }
    let mut lo = floor.log10();
    let mut hi = 0.0f64;
    while hi - lo > PLAN_LOG10_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if reaches(family, epsilon, 10f64.powf(mid), n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let candidate = 10f64.powf(lo);
    // powf may round the floor itself just below the threshold
    let lambda1_sq = if reaches(family, epsilon, candidate, n) { candidate } else { floor };
    Ok(Lambda1Plan::Feasible { lambda1_sq })
}

/// Largest n ≤ `cap` for which [`plan_lambda1`] succeeds.
///
/// Smaller λ₁² never shortens a chain, so this is the horizon reached from the
/// bottom of the search range.
pub fn max_horizon(family: &FamilySpec, epsilon: f64, cap: usize) -> Result<usize> {
    family.validate()?;
    check_epsilon(epsilon)?;
    if cap == 0 {
        return Err(Error::EmptySequence);
    }
    let floor = search_floor(family)?;
    if floor >= 1.0 {
        return Ok(0);
    }
    match greedy_sequence(family, epsilon, floor, cap) {
        Ok(plan) => Ok(plan.feasible_horizon),
        Err(Error::NumericRange { k, .. }) => Ok(k - 1),
        Err(e) => Err(e),
    }
}
