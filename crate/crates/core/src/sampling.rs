//! Random states for property checks and the acceptance suite.

use rand::Rng;

use crate::linalg::{ComplexMatrix4, DensityMatrix, Matrix2, C64};
use crate::Result;

fn uniform_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// ρ = GG†/Tr(GG†) with G a 4×r matrix of uniform complex entries, r ∈ 1..=4.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> Result<DensityMatrix> {
    let rank = rng.gen_range(1..=4);
    let mut g = [[C64::new(0.0, 0.0); 4]; 4];
    for row in g.iter_mut() {
        for z in row.iter_mut().take(rank) {
            *z = uniform_c64(rng);
        }
    }
    let g = ComplexMatrix4::new(g)?;
    let m = g * g.adjoint();
    let tr = m.trace().re;
    let mut m = m.scale(1.0 / tr);
    // exact Hermitian symmetry
    let mut e = *m.entries();
    for r in 0..4 {
        e[r][r] = C64::new(e[r][r].re, 0.0);
        for c in (r + 1)..4 {
            e[c][r] = e[r][c].conj();
        }
    }
    m = ComplexMatrix4::new(e)?;
    DensityMatrix::new(m)
}

/// A single-qubit state (I + r·σ)/2 with r uniform in the Bloch ball.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> Matrix2 {
    let r = loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            break v;
        }
    };
    Matrix2([
        [C64::new(0.5 * (1.0 + r[2]), 0.0), C64::new(0.5 * r[0], -0.5 * r[1])],
        [C64::new(0.5 * r[0], 0.5 * r[1]), C64::new(0.5 * (1.0 - r[2]), 0.0)],
    ])
}

/// A mixture of 1 to 4 random product states.
pub fn random_separable<R: Rng + ?Sized>(rng: &mut R) -> Result<DensityMatrix> {
    let terms = rng.gen_range(1..=4);
    let mut weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.0..1.0) + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut parts = Vec::with_capacity(terms);
    for w in weights {
        let a = random_qubit(rng);
        let b = random_qubit(rng);
        parts.push((w, DensityMatrix::product(&a, &b)?));
    }
    DensityMatrix::mixture(&parts)
}

/// Between 1 and `max_len` sharpnesses drawn uniformly from [lo, 1].
pub fn random_sharpnesses<R: Rng + ?Sized>(rng: &mut R, max_len: usize, lo: f64) -> Vec<f64> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(lo..=1.0)).collect()
}
