mod common;

use proptest::prelude::*;
use seqwit::linalg::{
    hermitian_eigen, hs_compose, hs_decompose, partial_transpose, ComplexMatrix4, Side, C64,
};

#[test]
fn hs_round_trip_on_a_thousand_states() {
    for seed in 0..1000 {
        let rho = common::state(seed);
        let back = hs_compose(&hs_decompose(&rho)).unwrap();
        let d = back.matrix().max_abs_diff(rho.matrix());
        assert!(d <= 1e-12, "seed {seed}: {d:e}");
    }
}

fn reconstruct(m: &ComplexMatrix4) -> f64 {
    let eig = hermitian_eigen(m).unwrap();
    let mut e = [[C64::new(0.0, 0.0); 4]; 4];
    for (r, row) in e.iter_mut().enumerate() {
        for (c, z) in row.iter_mut().enumerate() {
            *z = (0..4).map(|k| eig.vectors[r][k] * eig.values[k] * eig.vectors[c][k].conj()).sum();
        }
    }
    ComplexMatrix4::new(e).unwrap().max_abs_diff(m)
}

proptest! {
    #[test]
    fn eigen_reconstruction(seed in any::<u64>(), scale in 1e-3f64..1e3) {
        let m = common::hermitian(seed, scale);
        let err = reconstruct(&m);
        prop_assert!(err <= 1e-10 * scale.max(1.0), "reconstruction error {err:e}");
        let eig = hermitian_eigen(&m).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = eig.values.iter().sum();
        prop_assert!((trace - m.trace().re).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn partial_transpose_keeps_trace_and_hermiticity(seed in any::<u64>()) {
        let rho = common::state(seed);
        for side in [Side::A, Side::B] {
            let pt = partial_transpose(&rho, side);
            prop_assert_eq!(pt.trace(), rho.matrix().trace());
            prop_assert_eq!(pt.hermiticity_error(), rho.matrix().hermiticity_error());
            // a second transpose undoes the first
            prop_assert_eq!(seqwit::linalg::partial_transpose_matrix(&pt, side), *rho.matrix());
        }
    }
}
