#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqwit::linalg::{ComplexMatrix4, DensityMatrix, C64};
use seqwit::sampling::{random_separable, random_state};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn state(seed: u64) -> DensityMatrix {
    random_state(&mut rng(seed)).unwrap()
}

pub fn separable(seed: u64) -> DensityMatrix {
    random_separable(&mut rng(seed)).unwrap()
}

/// Random Hermitian matrix with entries of magnitude up to `scale`.
pub fn hermitian(seed: u64, scale: f64) -> ComplexMatrix4 {
    let mut r = rng(seed);
    let mut e = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        e[i][i] = C64::new(r.gen_range(-scale..scale), 0.0);
        for j in (i + 1)..4 {
            e[i][j] = C64::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale));
            e[j][i] = e[i][j].conj();
        }
    }
    ComplexMatrix4::new(e).unwrap()
}
