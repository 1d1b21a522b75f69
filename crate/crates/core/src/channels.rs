//! Unsharp measurements, Lüders updates and the per-pair channel.
//!
//! This is the brute-force engine: every update is carried out on the full
//! 4×4 density matrix. The closed-form engine in [`crate::witness`] is
//! checked against it.

use serde::{Deserialize, Serialize};

use crate::linalg::{pauli, Axis, ComplexMatrix4, DensityMatrix, Matrix2, Side};
use crate::{Error, Result};

fn check_sharpness(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidSharpness(lambda));
    }
    Ok(())
}

/// Λ = √(1 − λ²), the coherence retained by one unsharp measurement.
pub fn retained_coherence(lambda: f64) -> f64 {
    (1.0 - lambda * lambda).max(0.0).sqrt()
}

/// A two-outcome unsharp measurement of one Pauli observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnsharpSetting {
    axis: Axis,
    sharpness: f64,
}

impl UnsharpSetting {
    pub fn new(axis: Axis, sharpness: f64) -> Result<Self> {
        check_sharpness(sharpness)?;
        Ok(UnsharpSetting { axis, sharpness })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn sharpness(&self) -> f64 {
        self.sharpness
    }
}

/// The measurement policy of one pair: sharpness λ on x and y, 1 on z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundPolicy {
    lambda: f64,
}

impl RoundPolicy {
    pub fn new(lambda: f64) -> Result<Self> {
        check_sharpness(lambda)?;
        Ok(RoundPolicy { lambda })
    }

    pub fn from_lambda_sq(lambda_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda_sq) {
            return Err(Error::InvalidSharpness(lambda_sq));
        }
        Ok(RoundPolicy { lambda: lambda_sq.sqrt() })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sharpness(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X | Axis::Y => self.lambda,
            Axis::Z => 1.0,
        }
    }

    pub fn settings(&self) -> [UnsharpSetting; 3] {
        Axis::ALL.map(|axis| UnsharpSetting { axis, sharpness: self.sharpness(axis) })
    }
}

/// E₀ = (I + λP)/2, E₁ = (I − λP)/2.
pub fn unsharp_effects(s: &UnsharpSetting) -> (Matrix2, Matrix2) {
    let id = Matrix2::identity();
    let p = pauli(s.axis).scale(s.sharpness);
    ((id + p).scale(0.5), (id - p).scale(0.5))
}

/// (√E₀, √E₁), built from the spectral projectors (I ± P)/2 of the observable
/// with eigenvalues (1 ± λ)/2.
pub fn sqrt_effects(s: &UnsharpSetting) -> (Matrix2, Matrix2) {
    let id = Matrix2::identity();
    let p = pauli(s.axis);
    let plus = (id + p).scale(0.5);
    let minus = (id - p).scale(0.5);
    let hi = (0.5 * (1.0 + s.sharpness)).sqrt();
    let lo = (0.5 * (1.0 - s.sharpness)).sqrt();
    (plus.scale(hi) + minus.scale(lo), plus.scale(lo) + minus.scale(hi))
}

/// Unselective Lüders update ρ → Σ_a √E_a ρ √E_a on one side.
pub fn luders_single(rho: &DensityMatrix, side: Side, s: &UnsharpSetting) -> Result<DensityMatrix> {
    check_sharpness(s.sharpness)?;
    let (k0, k1) = sqrt_effects(s);
    let k0 = ComplexMatrix4::local(&k0, side);
    let k1 = ComplexMatrix4::local(&k1, side);
    DensityMatrix::new(k0.sandwich(rho.matrix()) + k1.sandwich(rho.matrix()))
}

/// The same update as [`luders_single`] written as a dephasing channel:
/// ρ → ((1+Λ)/2) ρ + ((1−Λ)/2) PρP.
pub fn luders_single_dephasing(rho: &DensityMatrix, side: Side, s: &UnsharpSetting) -> Result<DensityMatrix> {
    check_sharpness(s.sharpness)?;
    let big_lambda = retained_coherence(s.sharpness);
    let p = ComplexMatrix4::local(&pauli(s.axis), side);
    let m = rho.matrix().scale(0.5 * (1.0 + big_lambda)) + p.sandwich(rho.matrix()).scale(0.5 * (1.0 - big_lambda));
    DensityMatrix::new(m)
}

/// Uniform mixture over the three settings of `policy`, applied on one side.
pub fn side_averaged_channel(rho: &DensityMatrix, side: Side, policy: &RoundPolicy) -> Result<DensityMatrix> {
    let mut acc = ComplexMatrix4::zero();
    for s in policy.settings() {
        acc = acc + *luders_single(rho, side, &s)?.matrix();
    }
    DensityMatrix::new(acc.scale(1.0 / 3.0))
}

/// Multipliers the side channel applies to Pauli components: (x/y, z).
pub fn pauli_transfer_factors(lambda: f64) -> (f64, f64) {
    let big_lambda = retained_coherence(lambda);
    ((1.0 + big_lambda) / 3.0, (1.0 + 2.0 * big_lambda) / 3.0)
}

/// One pair's round: both observers pick one of three settings uniformly and
/// independently, outcomes are not recorded. Evaluated as the literal sum over
/// 9 setting pairs and 4 outcome pairs.
pub fn pair_round(rho: &DensityMatrix, policy: &RoundPolicy) -> Result<DensityMatrix> {
    let settings = policy.settings();
    let kraus: Vec<[Matrix2; 2]> = settings
        .iter()
        .map(|s| {
            let (k0, k1) = sqrt_effects(s);
            [k0, k1]
        })
        .collect();
    let mut acc = ComplexMatrix4::zero();
    for ka in &kraus {
        for kb in &kraus {
            for a in ka {
                for b in kb {
                    acc = acc + ComplexMatrix4::kron(a, b).sandwich(rho.matrix());
                }
            }
        }
    }
    DensityMatrix::new(acc.scale(1.0 / 9.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expectation, hermitian_eigenvalues, hs_decompose, pauli_tensor, C64};
    use crate::states::{make_state, FamilySpec};

    fn psi_plus() -> DensityMatrix {
        make_state(&FamilySpec::Maximal).unwrap()
    }

    #[test]
    fn sharp_z_effects_are_projectors() {
        let (e0, e1) = unsharp_effects(&UnsharpSetting::new(Axis::Z, 1.0).unwrap());
        assert_eq!(e0.0[0][0].re, 1.0);
        assert_eq!(e0.0[1][1].re, 0.0);
        assert_eq!(e1.0[1][1].re, 1.0);
        assert_eq!(e1.0[0][0].re, 0.0);
    }

    #[test]
    fn trivial_effects_are_half_identity() {
        let (e0, e1) = unsharp_effects(&UnsharpSetting::new(Axis::X, 0.0).unwrap());
        let half = Matrix2::identity().scale(0.5);
        assert_eq!(e0, half);
        assert_eq!(e1, half);
    }

    #[test]
    fn effect_spectrum_and_sums() {
        for axis in Axis::ALL {
            let s = UnsharpSetting::new(axis, 0.6).unwrap();
            let (e0, e1) = unsharp_effects(&s);
            let ev = e0.hermitian_eigenvalues();
            assert!((ev[0] - 0.2).abs() < 1e-15 && (ev[1] - 0.8).abs() < 1e-15);
            assert_eq!((e0 + e1).max_abs_diff(&Matrix2::identity()), 0.0);
            assert!((e0 - e1).max_abs_diff(&pauli(axis).scale(0.6)) < 1e-15);
            let (r0, r1) = sqrt_effects(&s);
            assert!((r0 * r0).max_abs_diff(&e0) < 1e-15);
            assert!((r1 * r1).max_abs_diff(&e1) < 1e-15);
        }
    }

    #[test]
    fn invalid_sharpness_rejected() {
        assert_eq!(UnsharpSetting::new(Axis::X, 1.5), Err(Error::InvalidSharpness(1.5)));
        assert!(UnsharpSetting::new(Axis::X, -0.1).is_err());
        assert!(RoundPolicy::new(f64::NAN).is_err());
        assert!(RoundPolicy::from_lambda_sq(2.0).is_err());
    }

    #[test]
    fn sharp_z_on_psi_plus_dephases() {
        let out = luders_single(&psi_plus(), Side::A, &UnsharpSetting::new(Axis::Z, 1.0).unwrap()).unwrap();
        let expected = ComplexMatrix4::diagonal([0.0, 0.5, 0.5, 0.0]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn zero_sharpness_leaves_state_unchanged() {
        let rho = make_state(&FamilySpec::MixedClass { p1: 0.6, p2: 0.3, p3: 0.1, alpha: 0.2 }).unwrap();
        for axis in Axis::ALL {
            for side in [Side::A, Side::B] {
                let out = luders_single(&rho, side, &UnsharpSetting::new(axis, 0.0).unwrap()).unwrap();
                assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
            }
        }
    }

    #[test]
    fn side_channel_on_psi_plus_sharp() {
        let out = side_averaged_channel(&psi_plus(), Side::A, &RoundPolicy::new(1.0).unwrap()).unwrap();
        let f = hs_decompose(&out);
        let expected = [1.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0];
        for i in 0..3 {
            assert!((f.t[i][i] - expected[i]).abs() < 1e-15);
        }
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn side_channel_trivial_scales_x_by_two_thirds() {
        let rho = psi_plus();
        let out = side_averaged_channel(&rho, Side::B, &RoundPolicy::new(0.0).unwrap()).unwrap();
        let (fin, fout) = (hs_decompose(&rho), hs_decompose(&out));
        assert!((fout.t[2][2] - fin.t[2][2]).abs() < 1e-15);
        assert!((fout.t[0][0] - 2.0 / 3.0 * fin.t[0][0]).abs() < 1e-15);
    }

    #[test]
    fn pair_round_from_psi_plus_sharp() {
        let out = pair_round(&psi_plus(), &RoundPolicy::new(1.0).unwrap()).unwrap();
        let zz = expectation(&out, &pauli_tensor(Axis::Z, Axis::Z)).unwrap();
        let xx = expectation(&out, &pauli_tensor(Axis::X, Axis::X)).unwrap();
        assert!((zz + 1.0 / 9.0).abs() < 1e-15);
        assert!((xx - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn pair_round_trivial_sharpness() {
        let rho = make_state(&FamilySpec::Weak { theta: 0.5, alpha: 0.9 }).unwrap();
        let out = pair_round(&rho, &RoundPolicy::new(0.0).unwrap()).unwrap();
        let zz_in = expectation(&rho, &pauli_tensor(Axis::Z, Axis::Z)).unwrap();
        let zz_out = expectation(&out, &pauli_tensor(Axis::Z, Axis::Z)).unwrap();
        let xx_in = expectation(&rho, &pauli_tensor(Axis::X, Axis::X)).unwrap();
        let xx_out = expectation(&out, &pauli_tensor(Axis::X, Axis::X)).unwrap();
        assert!((zz_out - zz_in).abs() < 1e-15);
        assert!((xx_out - 4.0 / 9.0 * xx_in).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_is_fixed_point() {
        let mixed = DensityMatrix::maximally_mixed();
        for lambda in [0.0, 0.3, 0.77, 1.0] {
            let out = pair_round(&mixed, &RoundPolicy::new(lambda).unwrap()).unwrap();
            assert!(out.matrix().max_abs_diff(mixed.matrix()) < 1e-16);
        }
    }

    #[test]
    fn pair_round_output_is_positive() {
        let rho = DensityMatrix::from_pure([
            C64::new(0.3, 0.1),
            C64::new(-0.5, 0.2),
            C64::new(0.1, -0.6),
            C64::new(0.2, 0.3),
        ])
        .unwrap();
        let mut cur = rho;
        for lambda in [0.9, 0.4, 1.0, 0.05] {
            cur = pair_round(&cur, &RoundPolicy::new(lambda).unwrap()).unwrap();
            assert!(hermitian_eigenvalues(cur.matrix()).unwrap()[0] >= -1e-12);
            assert!((cur.matrix().trace().re - 1.0).abs() < 1e-14);
        }
    }
}
