//! Independent entanglement oracles and whole-run verification.

use serde::{Deserialize, Serialize};

use crate::channels::{pair_round, RoundPolicy};
use crate::linalg::{hermitian_eigenvalues, hs_decompose, partial_transpose, symmetric_eigenvalues3, DensityMatrix, Side};
use crate::sequences::{SequencePlan, Truncation};
use crate::states::{make_state, FamilySpec};
use crate::witness::{witness_value_sq, CorrelationState};
use crate::{Error, Result};

/// Partial-transpose eigenvalues below this count as entanglement.
pub const PPT_TOL: f64 = -1e-10;
/// Largest tolerated gap between the two witness engines in a run.
pub const ENGINE_MISMATCH_TOL: f64 = 1e-9;
/// Smallest λ₁² for which the brute-force engine is run.
pub const SIM_MIN_LAMBDA1_SQ: f64 = 1e-8;

fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(&partial_transpose(rho, Side::B))
        .map_err(|e| Error::InvalidState(e.to_string()))?;
    Ok(ev[0])
}

/// max(0, −λ_min(ρ^{T_B})). A two-qubit partial transpose has at most one
/// negative eigenvalue, so this is the usual negativity.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    Ok((-min_pt_eigenvalue(rho)?).max(0.0))
}

pub fn is_entangled_ppt(rho: &DensityMatrix) -> Result<bool> {
    Ok(min_pt_eigenvalue(rho)? < PPT_TOL)
}

/// Horodecki M(ρ): sum of the two largest eigenvalues of TᵀT. The CHSH
/// inequality can be violated iff M > 1; the best CHSH value is 2√M.
pub fn horodecki_m(rho: &DensityMatrix) -> Result<f64> {
    let t = hs_decompose(rho).t;
    let mut tt = [[0.0; 3]; 3];
    for (i, row) in tt.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|m| t[m][i] * t[m][j]).sum();
        }
    }
    let ev = symmetric_eigenvalues3(&tt).map_err(|e| Error::InvalidState(e.to_string()))?;
    Ok((ev[1] + ev[2]).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engines {
    Closed,
    Sim,
    Both,
}

impl Engines {
    pub fn runs_sim(self) -> bool {
        matches!(self, Engines::Sim | Engines::Both)
    }
}

impl std::str::FromStr for Engines {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "closed" => Ok(Engines::Closed),
            "sim" => Ok(Engines::Sim),
            "both" => Ok(Engines::Both),
            other => Err(format!("unknown engine `{other}` (expected closed, sim or both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub k: usize,
    pub lambda_sq: f64,
    pub witness_closed: f64,
    pub witness_sim: Option<f64>,
    pub negativity: Option<f64>,
    pub chsh_m: Option<f64>,
    pub ppt_entangled: Option<bool>,
    pub detected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: FamilySpec,
    pub epsilon: f64,
    pub lambda1_sq: f64,
    pub engines_requested: Engines,
    /// `Closed` when the simulation was requested but λ₁² is below [`SIM_MIN_LAMBDA1_SQ`].
    pub engines_used: Engines,
    pub truncation: Truncation,
    pub rows: Vec<ReportRow>,
}

impl VerificationReport {
    pub fn all_detected(&self) -> bool {
        self.rows.iter().all(|r| r.detected)
    }

    /// Largest increase of negativity from one pair to the next (≤ 0 when monotone).
    pub fn max_negativity_increase(&self) -> Option<f64> {
        let neg: Vec<f64> = self.rows.iter().filter_map(|r| r.negativity).collect();
        neg.windows(2).map(|w| w[1] - w[0]).reduce(f64::max)
    }
}

/// Runs the plan pair by pair. Each row records the witness value(s) seen by
/// pair k before its own measurements, then both engines advance.
pub fn verify_sequence(family: &FamilySpec, plan: &SequencePlan, engines: Engines) -> Result<VerificationReport> {
    family.validate()?;
    if plan.family != *family {
        return Err(Error::PlanFamilyMismatch);
    }
    let engines_used = if engines.runs_sim() && plan.lambda1_sq < SIM_MIN_LAMBDA1_SQ {
        Engines::Closed
    } else {
        engines
    };
    let sim = engines_used.runs_sim();

    let mut closed = CorrelationState::for_family(family)?;
    let mut rho = if sim { Some(make_state(family)?) } else { None };
    let mut rows = Vec::with_capacity(plan.values.len());
    for (idx, &lambda_sq) in plan.values.iter().enumerate() {
        let k = idx + 1;
        let witness_closed = closed.witness_value_sq(lambda_sq)?;
        let mut row = ReportRow {
            k,
            lambda_sq,
            witness_closed,
            witness_sim: None,
            negativity: None,
            chsh_m: None,
            ppt_entangled: None,
            detected: witness_closed < 0.0,
        };
        if let Some(state) = rho.as_ref() {
            let w = witness_value_sq(state, lambda_sq)?;
            if (w - witness_closed).abs() > ENGINE_MISMATCH_TOL {
                return Err(Error::EngineMismatch { k, closed: witness_closed, sim: w });
            }
            row.witness_sim = Some(w);
            row.negativity = Some(negativity(state)?);
            row.chsh_m = Some(horodecki_m(state)?);
            row.ppt_entangled = Some(is_entangled_ppt(state)?);
        }
        rows.push(row);

        closed = closed.advance_sq(lambda_sq)?;
        if let Some(state) = rho.as_mut() {
            *state = pair_round(state, &RoundPolicy::from_lambda_sq(lambda_sq)?)?;
        }
    }

    Ok(VerificationReport {
        family: *family,
        epsilon: plan.epsilon,
        lambda1_sq: plan.lambda1_sq,
        engines_requested: engines,
        engines_used,
        truncation: plan.truncation,
        rows,
    })
}
