use std::f64::consts::FRAC_PI_4;

use proptest::prelude::*;
use seqwit::analysis::{verify_sequence, Engines};
use seqwit::sequences::{check_monotone, first_pair_threshold, greedy_sequence, Truncation};
use seqwit::states::{make_state, FamilySpec};
use seqwit::witness::{witness_value_sq, CorrelationState};

fn mixed() -> impl Strategy<Value = FamilySpec> {
    (0.05f64..1.0, 0.0f64..1.0, 1e-3f64..0.5).prop_map(|(p1, split, alpha)| {
        let rest = 1.0 - p1;
        FamilySpec::MixedClass { p1, p2: rest * split, p3: rest - rest * split, alpha }
    })
}

fn any_family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        Just(FamilySpec::Maximal),
        (1e-3f64..=0.5).prop_map(|alpha| FamilySpec::PureAlpha { alpha }),
        mixed(),
        (0.05f64..=FRAC_PI_4, 0.6f64..=1.0).prop_map(|(theta, alpha)| FamilySpec::Weak { theta, alpha }),
    ]
}

proptest! {
    #[test]
    fn every_emitted_value_detects(family in any_family(), log_l1 in -12.0f64..-0.5, eps in 0.005f64..0.2) {
        let thr = first_pair_threshold(&family).unwrap();
        let l1 = 10f64.powf(log_l1).max(thr * (1.0 + eps));
        prop_assume!(l1 < 1.0);
        let plan = greedy_sequence(&family, eps, l1, 12).unwrap();
        let mut c = CorrelationState::for_family(&family).unwrap();
        for (k, &l2) in plan.values.iter().enumerate() {
            prop_assert!(l2 > 0.0 && l2 < 1.0);
            prop_assert!(c.witness_value_sq(l2).unwrap() < 0.0, "pair {}", k + 1);
            c = c.advance_sq(l2).unwrap();
        }
        if plan.values.len() >= 3 && !matches!(family, FamilySpec::Weak { .. }) {
            prop_assert!(check_monotone(&plan).unwrap());
        }
    }

    #[test]
    fn brute_force_agrees_on_sign(family in any_family(), log_l1 in -6.0f64..-0.5, n in 1usize..=8) {
        let thr = first_pair_threshold(&family).unwrap();
        let l1 = 10f64.powf(log_l1).max(thr * 1.01);
        prop_assume!(l1 < 1.0);
        let plan = greedy_sequence(&family, 0.01, l1, n).unwrap();
        let report = verify_sequence(&family, &plan, Engines::Both).unwrap();
        prop_assert_eq!(report.engines_used, Engines::Both);
        for row in &report.rows {
            prop_assert!(row.witness_sim.unwrap() < 0.0);
        }
    }

    #[test]
    fn halving_lambda1_shrinks_later_terms(log_l1 in -12.0f64..-1.0) {
        let l1 = 10f64.powf(log_l1);
        let a = greedy_sequence(&FamilySpec::Maximal, 0.01, l1, 8).unwrap();
        let b = greedy_sequence(&FamilySpec::Maximal, 0.01, 0.5 * l1, 8).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!(y <= x);
        }
    }
}

#[test]
fn saturation_point_is_a_true_minimum() {
    let mut saturated = 0;
    for theta in [0.05, 0.1, 0.2, 0.4, FRAC_PI_4] {
        for alpha in [0.6, 0.9, 1.0] {
            for eps in [0.01, 0.1] {
                let family = FamilySpec::Weak { theta, alpha };
                let l1 = (1.0 + eps) * first_pair_threshold(&family).unwrap();
                let plan = greedy_sequence(&family, eps, l1, 16).unwrap();
                let Truncation::Saturated { next_value } = plan.truncation else { continue };
                saturated += 1;
                let thr = next_value / (1.0 + eps);
                // drive the brute-force state to the saturation point
                let mut rho = make_state(&family).unwrap();
                for &l2 in &plan.values {
                    rho = seqwit::channels::pair_round(&rho, &seqwit::channels::RoundPolicy::from_lambda_sq(l2).unwrap())
                        .unwrap();
                }
                for i in 1..100 {
                    let l2 = i as f64 / 100.0;
                    if l2 < thr * (1.0 - 1e-9) {
                        assert!(witness_value_sq(&rho, l2).unwrap() >= -1e-12, "theta {theta}, alpha {alpha}, l2 {l2}");
                    }
                }
            }
        }
    }
    assert!(saturated > 0);
}
