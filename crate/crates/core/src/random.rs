//! Seeded generators for test matrices.
//!
//! The stream is ChaCha8 seeded with `seed_from_u64`; every entry is drawn as
//! `Uniform(-1, 1)` in row-major order (real part before imaginary part).

use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numcore::{CMatrix, RMatrix};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut Rng) -> f64 {
    Uniform::new_inclusive(-1.0, 1.0).sample(rng)
}

pub fn uniform_matrix(rng: &mut Rng, rows: usize, cols: usize) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| uniform(rng))
}

pub fn uniform_cmatrix(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re = uniform(rng);
        let im = uniform(rng);
        Complex64::new(re, im)
    })
}

pub fn uniform_vec(rng: &mut Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| uniform(rng)).collect()
}
