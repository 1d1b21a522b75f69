mod common;

use proptest::prelude::*;
use seqwit::channels::{pair_round, RoundPolicy};
use seqwit::linalg::{expectation, pauli_tensor, Axis, DensityMatrix, Matrix2, C64};
use seqwit::states::{make_state, FamilySpec};
use seqwit::witness::{witness_value, CorrelationState};

const GRID: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

fn basis_qubit(bit: usize) -> Matrix2 {
    let mut m = Matrix2([[C64::new(0.0, 0.0); 2]; 2]);
    m.0[bit][bit] = C64::new(1.0, 0.0);
    m
}

#[test]
fn witness_is_zero_on_antialigned_products() {
    // |01> and |10> sit exactly on the separable boundary of the witness
    for (a, b) in [(0, 1), (1, 0)] {
        let rho = DensityMatrix::product(&basis_qubit(a), &basis_qubit(b)).unwrap();
        for lambda in GRID {
            assert!(witness_value(&rho, lambda).unwrap().abs() < 1e-15);
        }
    }
}

proptest! {
    #[test]
    fn witness_nonnegative_on_separable_states(seed in any::<u64>()) {
        let rho = common::separable(seed);
        for lambda in GRID {
            prop_assert!(witness_value(&rho, lambda).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn xx_equals_yy_through_rounds(
        theta in 0.01f64..=std::f64::consts::FRAC_PI_4,
        lambdas in proptest::collection::vec(0.05f64..=1.0, 1..=6),
    ) {
        let xx = pauli_tensor(Axis::X, Axis::X);
        let yy = pauli_tensor(Axis::Y, Axis::Y);
        let mut rho = make_state(&FamilySpec::Weak { theta, alpha: 1.0 }).unwrap();
        for lambda in lambdas {
            rho = pair_round(&rho, &RoundPolicy::new(lambda).unwrap()).unwrap();
            let d = expectation(&rho, &xx).unwrap() - expectation(&rho, &yy).unwrap();
            prop_assert!(d.abs() <= 1e-14);
        }
    }

    #[test]
    fn threshold_rises_with_every_round(
        seed in any::<u64>(),
        lambdas in proptest::collection::vec(0.05f64..=1.0, 1..=8),
    ) {
        let rho = common::state(seed);
        let zz = expectation(&rho, &pauli_tensor(Axis::Z, Axis::Z)).unwrap();
        let xy = expectation(&rho, &pauli_tensor(Axis::X, Axis::X)).unwrap()
            + expectation(&rho, &pauli_tensor(Axis::Y, Axis::Y)).unwrap();
        prop_assume!(xy > 1e-3);
        let mut c = CorrelationState::new(zz, xy);
        let mut thr = c.detection_threshold().unwrap();
        for lambda in lambdas {
            c = c.advance(lambda).unwrap();
            let next = c.detection_threshold().unwrap();
            prop_assert!(next > thr, "{next} <= {thr}");
            thr = next;
        }
    }
}

#[test]
fn degenerate_correlator_has_no_threshold() {
    assert!(CorrelationState::new(-1.0, 0.0).detection_threshold().is_err());
    assert!(CorrelationState::new(-1.0, -0.5).detection_threshold().is_err());
}
