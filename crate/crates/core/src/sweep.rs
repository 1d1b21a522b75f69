//! Parameter sweeps of the feasible horizon.

use rayon::prelude::*;

use crate::analysis::negativity;
use crate::sequences::{max_horizon, plan_lambda1};
use crate::states::{make_state, FamilyKind, FamilyParams, FamilySpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepGrid {
    pub alpha: Vec<f64>,
    pub theta: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub p3: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: FamilySpec,
    pub max_horizon: usize,
    /// Planner choice for `max_horizon` pairs.
    pub lambda1_sq: Option<f64>,
    /// Negativity of the initial state.
    pub negativity: f64,
}

fn axis_values(values: &[f64], kind: FamilyKind, name: &str) -> Result<Vec<Option<f64>>> {
    if values.is_empty() {
        return Err(Error::EmptyGrid(format!("family `{}` needs at least one `{name}` value", kind.name())));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v.into_iter().map(Some).collect())
}

/// Cartesian product of the grid values the family uses, in ascending
/// lexicographic order of (alpha, theta, p1, p2, p3). Every point is validated.
pub fn expand_grid(kind: FamilyKind, grid: &SweepGrid) -> Result<Vec<FamilySpec>> {
    let unused = vec![None];
    let (alpha, theta, p1, p2, p3) = match kind {
        FamilyKind::Maximal => (unused.clone(), unused.clone(), unused.clone(), unused.clone(), unused),
        FamilyKind::Pure => (axis_values(&grid.alpha, kind, "alpha")?, unused.clone(), unused.clone(), unused.clone(), unused),
        FamilyKind::Weak => (
            axis_values(&grid.alpha, kind, "alpha")?,
            axis_values(&grid.theta, kind, "theta")?,
            unused.clone(),
            unused.clone(),
            unused,
        ),
        FamilyKind::Mixed => (
            axis_values(&grid.alpha, kind, "alpha")?,
            unused,
            axis_values(&grid.p1, kind, "p1")?,
            axis_values(&grid.p2, kind, "p2")?,
            axis_values(&grid.p3, kind, "p3")?,
        ),
    };
    let mut points = Vec::new();
    for &a in &alpha {
        for &t in &theta {
            for &q1 in &p1 {
                for &q2 in &p2 {
                    for &q3 in &p3 {
                        let params = FamilyParams { alpha: a, theta: t, p1: q1, p2: q2, p3: q3 };
                        points.push(kind.build(&params)?);
                    }
                }
            }
        }
    }
    Ok(points)
}

fn sweep_point(family: &FamilySpec, epsilon: f64, cap: usize) -> Result<SweepRow> {
    let horizon = max_horizon(family, epsilon, cap)?;
    let lambda1_sq = if horizon > 0 { plan_lambda1(family, epsilon, horizon)?.lambda1_sq() } else { None };
    Ok(SweepRow {
        family: *family,
        max_horizon: horizon,
        lambda1_sq,
        negativity: negativity(&make_state(family)?)?,
    })
}

/// Evaluates every point; points run in parallel, rows come back in input order.
pub fn run_sweep(points: &[FamilySpec], epsilon: f64, cap: usize) -> Result<Vec<SweepRow>> {
    if points.is_empty() {
        return Err(Error::EmptyGrid("no points".into()));
    }
    points.par_iter().map(|f| sweep_point(f, epsilon, cap)).collect()
}
