//! Random generators shared by unit tests.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, CMatrix};
use crate::qcore::{PureState, QubitLabel, Unitary};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(r: &mut impl Rng) -> f64 {
    // Box–Muller.
    let u1: f64 = r.gen_range(f64::EPSILON..1.0);
    let u2: f64 = r.gen();
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}

pub fn random_amplitudes(r: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(gaussian(r), gaussian(r))).collect();
    let n = linalg::norm(&v);
    linalg::scale_vec(&v, Complex64::new(1.0 / n, 0.0))
}

pub fn random_state(r: &mut impl Rng, labels: &[QubitLabel]) -> PureState {
    PureState::new(labels, random_amplitudes(r, 1 << labels.len())).unwrap()
}

pub fn random_hermitian(r: &mut impl Rng, dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = Complex64::new(gaussian(r), gaussian(r));
        }
    }
    m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0))
}

pub fn random_unitary(r: &mut impl Rng, labels: &[QubitLabel]) -> Unitary {
    let dim = 1 << labels.len();
    let cols: Vec<Vec<Complex64>> = (0..dim).map(|_| random_amplitudes(r, dim)).collect();
    let basis = linalg::gram_schmidt(&cols, 1e-8);
    let mut m = CMatrix::zeros(dim);
    for (j, col) in basis.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = col[i];
        }
    }
    Unitary::new(labels, m).unwrap()
}
