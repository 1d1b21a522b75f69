mod common;

use std::f64::consts::FRAC_PI_4;

use proptest::prelude::*;
use seqwit::analysis::{horodecki_m, is_entangled_ppt, negativity, verify_sequence, Engines, PPT_TOL};
use seqwit::linalg::{pauli, ComplexMatrix4, DensityMatrix, Matrix2, Side, C64};
use seqwit::sequences::{first_pair_threshold, greedy_sequence};
use seqwit::states::{make_state, weak_alpha_boundary, FamilySpec};

/// Exchanges the two qubits.
fn swap_sides(rho: &DensityMatrix) -> DensityMatrix {
    let perm = [0, 2, 1, 3];
    let e = rho.matrix().entries();
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[perm[r]][perm[c]] = e[r][c];
        }
    }
    DensityMatrix::new(ComplexMatrix4::new(out).unwrap()).unwrap()
}

fn rotate(rho: &DensityMatrix, u: &Matrix2, side: Side) -> DensityMatrix {
    DensityMatrix::new(ComplexMatrix4::local(u, side).sandwich(rho.matrix())).unwrap()
}

proptest! {
    #[test]
    fn negativity_and_ppt_verdict_agree(seed in any::<u64>()) {
        let rho = common::state(seed);
        let n = negativity(&rho).unwrap();
        prop_assert!(n >= 0.0);
        prop_assert_eq!(n > -PPT_TOL, is_entangled_ppt(&rho).unwrap());
    }

    #[test]
    fn horodecki_m_is_locally_invariant(seed in any::<u64>()) {
        let rho = common::state(seed);
        let m = horodecki_m(&rho).unwrap();
        prop_assert!((horodecki_m(&swap_sides(&rho)).unwrap() - m).abs() <= 1e-12);
        // conjugation by a Pauli flips the sign of two rows (or columns) of T
        for side in [Side::A, Side::B] {
            for axis in seqwit::linalg::Axis::ALL {
                let flipped = rotate(&rho, &pauli(axis), side);
                prop_assert!((horodecki_m(&flipped).unwrap() - m).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn separable_states_are_ppt(seed in any::<u64>()) {
        let rho = common::separable(seed);
        prop_assert!(!is_entangled_ppt(&rho).unwrap());
        prop_assert!(horodecki_m(&rho).unwrap() <= 1.0 + 1e-12);
    }
}

#[test]
fn weak_family_ppt_boundary() {
    for theta in [0.01, 0.05, 0.1, 0.2, 0.4, 0.6, FRAC_PI_4] {
        let bound = weak_alpha_boundary(theta);
        for factor in [1.001, 1.01, 1.1, 1.5] {
            let alpha = bound * factor;
            if alpha > 1.0 {
                continue;
            }
            let rho = make_state(&FamilySpec::Weak { theta, alpha }).unwrap();
            assert!(is_entangled_ppt(&rho).unwrap(), "theta {theta}, alpha {alpha}");
        }
        // at and below the boundary the construction is rejected; the matrix itself is PPT there
        for factor in [0.5, 0.9, 0.999, 1.0] {
            let alpha = bound * factor;
            assert!(make_state(&FamilySpec::Weak { theta, alpha }).is_err());
            let (s, c) = theta.sin_cos();
            let gap = 1.0 - c;
            let mut e = *ComplexMatrix4::diagonal([0.25 * gap, 0.25 * (1.0 + c), 0.25 * (1.0 + c), 0.25 * gap]).entries();
            e[1][2] = C64::new(0.5 * alpha * s, 0.0);
            e[2][1] = e[1][2];
            let rho = DensityMatrix::new(ComplexMatrix4::new(e).unwrap()).unwrap();
            assert!(!is_entangled_ppt(&rho).unwrap(), "theta {theta}, alpha {alpha}");
        }
    }
}

#[test]
fn detection_implies_entanglement_and_decay() {
    let families = [
        FamilySpec::Maximal,
        FamilySpec::PureAlpha { alpha: 0.1 },
        FamilySpec::MixedClass { p1: 0.7, p2: 0.2, p3: 0.1, alpha: 0.4 },
        FamilySpec::Weak { theta: 0.3, alpha: 0.8 },
    ];
    for family in families {
        let l1 = (first_pair_threshold(&family).unwrap() * 1.01).max(1e-3);
        let plan = greedy_sequence(&family, 0.01, l1, 8).unwrap();
        let report = verify_sequence(&family, &plan, Engines::Both).unwrap();
        for row in &report.rows {
            if row.detected {
                assert_eq!(row.ppt_entangled, Some(true));
                assert!(row.negativity.unwrap() > 0.0);
            }
        }
        assert!(report.max_negativity_increase().unwrap_or(0.0) <= 1e-12);
    }
}
