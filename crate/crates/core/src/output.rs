//! CSV and JSON serialisation of run reports and sweeps.
//!
//! Reals are written in the shortest form that parses back to the same bits;
//! absent values are empty fields and booleans are `true`/`false`.

use serde::Serialize;

use crate::analysis::{Engines, VerificationReport};
use crate::sequences::Truncation;
use crate::states::FamilySpec;
use crate::sweep::SweepRow;

pub const REPORT_HEADER: &str = "k,lambda_sq,witness_closed,witness_sim,negativity,chsh_m,ppt_entangled,detected";
pub const SWEEP_HEADER: &str = "family,alpha,theta,p1,p2,p3,max_horizon,lambda1_sq,negativity";

/// Shortest round-trip representation of `x`, choosing between positional and
/// exponent notation.
pub fn format_real(x: f64) -> String {
    let plain = format!("{x}");
    let sci = format!("{x:e}");
    if sci.len() < plain.len() {
        sci
    } else {
        plain
    }
}

fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

pub fn report_csv(report: &VerificationReport) -> String {
    let mut out = String::with_capacity(64 * (report.rows.len() + 1));
    out.push_str(REPORT_HEADER);
    out.push('\n');
    for r in &report.rows {
        let fields = [
            r.k.to_string(),
            format_real(r.lambda_sq),
            format_real(r.witness_closed),
            opt_real(r.witness_sim),
            opt_real(r.negativity),
            opt_real(r.chsh_m),
            opt_bool(r.ppt_entangled),
            r.detected.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub family: FamilySpec,
    pub epsilon: f64,
    pub lambda1_sq: f64,
    pub pairs_requested: usize,
    pub pairs_detected: usize,
    pub feasible_horizon: usize,
    pub truncation: Truncation,
    pub engines_requested: Engines,
    pub engines_used: Engines,
    pub all_detected: bool,
    pub full_horizon: bool,
}

impl RunSummary {
    pub fn new(report: &VerificationReport, pairs_requested: usize) -> Self {
        let feasible_horizon = report.rows.len();
        let all_detected = report.all_detected();
        RunSummary {
            family: report.family,
            epsilon: report.epsilon,
            lambda1_sq: report.lambda1_sq,
            pairs_requested,
            pairs_detected: report.rows.iter().filter(|r| r.detected).count(),
            feasible_horizon,
            truncation: report.truncation,
            engines_requested: report.engines_requested,
            engines_used: report.engines_used,
            all_detected,
            full_horizon: all_detected && feasible_horizon >= pairs_requested,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialises")
    }
}

fn family_params(f: &FamilySpec) -> [Option<f64>; 5] {
    match *f {
        FamilySpec::Maximal => [None; 5],
        FamilySpec::PureAlpha { alpha } => [Some(alpha), None, None, None, None],
        FamilySpec::MixedClass { p1, p2, p3, alpha } => [Some(alpha), None, Some(p1), Some(p2), Some(p3)],
        FamilySpec::Weak { theta, alpha } => [Some(alpha), Some(theta), None, None, None],
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let mut fields = vec![r.family.name().to_string()];
        fields.extend(family_params(&r.family).into_iter().map(opt_real));
        fields.push(r.max_horizon.to_string());
        fields.push(opt_real(r.lambda1_sq));
        fields.push(format_real(r.negativity));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::verify_sequence;
    use crate::sequences::greedy_sequence;

    #[test]
    fn real_formatting_is_short() {
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(1e-13), "1e-13");
        assert_eq!(format_real(-0.25), "-0.25");
        assert_eq!(format_real(2.0), "2");
        assert_eq!(format_real(1.5e300), "1.5e300");
        assert_eq!(format_real(0.20710678118654752), "0.20710678118654752");
    }

    #[test]
    fn report_csv_layout() {
        let plan = greedy_sequence(&FamilySpec::Maximal, 0.01, 1e-4, 2).unwrap();
        let report = verify_sequence(&FamilySpec::Maximal, &plan, crate::analysis::Engines::Closed).unwrap();
        let csv = report_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], REPORT_HEADER);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "1,1e-4,-5e-5,,,,,true");
        assert_eq!(lines[2].split(',').count(), 8);
    }

    #[test]
    fn summary_json_fields() {
        let plan = greedy_sequence(&FamilySpec::Maximal, 0.01, 1e-4, 3).unwrap();
        let report = verify_sequence(&FamilySpec::Maximal, &plan, crate::analysis::Engines::Both).unwrap();
        let json: serde_json::Value = serde_json::from_str(&RunSummary::new(&report, 5).to_json()).unwrap();
        assert_eq!(json["family"]["name"], "maximal");
        assert_eq!(json["pairs_requested"], 5);
        assert_eq!(json["feasible_horizon"], 3);
        assert_eq!(json["full_horizon"], false);
        assert_eq!(json["truncation"]["reason"], "completed");
        assert_eq!(json["engines_used"], "both");
    }
}
