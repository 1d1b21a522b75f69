use proptest::prelude::*;
use seqwit::analysis::{verify_sequence, Engines};
use seqwit::output::{format_real, report_csv, REPORT_HEADER};
use seqwit::sequences::greedy_sequence;
use seqwit::states::FamilySpec;

proptest! {
    #[test]
    fn reals_round_trip_bit_exactly(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = format_real(x);
        prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        let plain = x.to_string();
        prop_assert!(s.len() <= plain.len());
    }
}

#[test]
fn csv_fields_parse_back() {
    let plan = greedy_sequence(&FamilySpec::Maximal, 0.01, 1e-4, 6).unwrap();
    let report = verify_sequence(&FamilySpec::Maximal, &plan, Engines::Both).unwrap();
    let csv = report_csv(&report);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(REPORT_HEADER));
    for (line, row) in lines.zip(&report.rows) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 8);
        assert_eq!(f[1].parse::<f64>().unwrap().to_bits(), row.lambda_sq.to_bits());
        assert_eq!(f[2].parse::<f64>().unwrap().to_bits(), row.witness_closed.to_bits());
        assert_eq!(f[3].parse::<f64>().unwrap().to_bits(), row.witness_sim.unwrap().to_bits());
        assert_eq!(f[6], "true");
        assert_eq!(f[7], "true");
    }
}

#[test]
fn identical_inputs_give_identical_csv() {
    let run = || {
        let plan = greedy_sequence(&FamilySpec::Weak { theta: 0.4, alpha: 0.9 }, 0.01, 0.2, 4).unwrap();
        report_csv(&verify_sequence(&plan.family, &plan, Engines::Both).unwrap())
    };
    assert_eq!(run(), run());
}
