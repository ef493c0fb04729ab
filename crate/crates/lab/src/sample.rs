//! Seeded random inputs for the self-test battery and the acceptance suite.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ussd_core::linalg::CMatrix;
use ussd_core::qcore::{PureState, QubitLabel, Unitary};
use ussd_core::teleport::TeleportInstance;
use ussd_core::ussd::{make_instance, polar, UssdInstance};
use ussd_core::Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(r: &mut impl Rng) -> f64 {
    let u: f64 = r.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = r.gen_range(0.0..TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

/// Haar-random pure state.
pub fn random_state(r: &mut impl Rng, labels: &[QubitLabel]) -> PureState {
    let amps = (0..1usize << labels.len()).map(|_| Complex64::new(gaussian(r), gaussian(r))).collect();
    PureState::normalized(labels, amps).expect("nonzero gaussian vector")
}

/// Random single-qubit unitary.
pub fn random_local_unitary(r: &mut impl Rng, q: QubitLabel) -> Unitary {
    let (g, a, b) = (r.gen_range(0.0..TAU), r.gen_range(0.0..TAU), r.gen_range(0.0..TAU));
    let t: f64 = r.gen_range(0.0..FRAC_PI_2);
    let ph = Complex64::from_polar(1.0, g);
    let m = CMatrix::from_rows(vec![
        ph * Complex64::from_polar(t.cos(), a),
        ph * Complex64::from_polar(t.sin(), b),
        -ph * Complex64::from_polar(t.sin(), -b),
        ph * Complex64::from_polar(t.cos(), -a),
    ]);
    Unitary::new(&[q], m).expect("unitary by construction")
}

/// Instance with uniformly drawn magnitudes and phases. Both optimal cases
/// occur with appreciable frequency.
pub fn random_instance(r: &mut impl Rng) -> UssdInstance {
    make_instance(
        r.gen_range(0.02..0.98),
        polar(r.gen_range(0.0..0.97), r.gen_range(-PI..PI)),
        polar(r.gen_range(0.0..0.99), r.gen_range(-PI..PI)),
    )
    .expect("parameters drawn inside the domain")
}

pub fn random_teleport(r: &mut impl Rng) -> TeleportInstance {
    TeleportInstance::new(r.gen_range(0.0..0.78), r.gen_range(0.0..PI), r.gen_range(0.0..TAU))
        .expect("parameters drawn inside the domain")
}
