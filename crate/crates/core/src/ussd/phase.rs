use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{build_chi, wrap_pi, Embedding, UssdInstance};
use crate::qcore::PureState;
use crate::{Error, Result};

/// Overlap magnitudes below this leave the loop phase undefined.
const OVERLAP_FLOOR: f64 = 1e-12;

/// The three states of the loop: `chi1 = |xi_bar>|phi_bar>` (the `p+ -> 0`
/// end), `chi2 = |chi>`, and `chi3 = |xi>|phi>` (the `p+ -> 1` end).
pub fn loop_states(inst: &UssdInstance, emb: &Embedding) -> Result<[PureState; 3]> {
    if inst.p_plus <= 0.0 || inst.p_plus >= 1.0 {
        return Err(Error::UndefinedPhase("p_plus must lie strictly between 0 and 1"));
    }
    let chi1 = emb.xi_bar.tensor(&emb.phi_bar)?;
    let chi3 = emb.xi.tensor(&emb.phi)?;
    let chi2 = build_chi(inst, emb)?;
    Ok([chi1, chi2, chi3])
}

/// Gauge-invariant phase of the loop `chi1 -> chi2 -> chi3 -> chi1`.
///
/// `chi2` is expanded as `c1 chi1 + c3 chi3`, and the phase is
/// `arg(c1* c3 <chi1|chi3>)`. Each state may carry an arbitrary phase
/// factor without changing the result.
pub fn loop_phase(states: &[PureState; 3]) -> Result<f64> {
    let [x1, x2, x3] = states;
    let g13 = x1.inner(x3)?;
    if g13.norm() < OVERLAP_FLOOR {
        return Err(Error::UndefinedPhase("endpoint states are orthogonal"));
    }
    let (g11, g33) = (x1.inner(x1)?, x3.inner(x3)?);
    let (b1, b3) = (x1.inner(x2)?, x3.inner(x2)?);
    let det = g11 * g33 - g13 * g13.conj();
    if det.norm() < OVERLAP_FLOOR {
        return Err(Error::UndefinedPhase("endpoint states coincide"));
    }
    let c1 = (g33 * b1 - g13 * b3) / det;
    let c3 = (g11 * b3 - g13.conj() * b1) / det;
    let z: Complex64 = c1.conj() * c3 * g13;
    if z.norm() < OVERLAP_FLOOR {
        return Err(Error::UndefinedPhase("loop does not close"));
    }
    Ok(wrap_pi(z.arg()))
}

/// Berry phase of the instance using the canonical embedding.
pub fn bargmann_phase(inst: &UssdInstance) -> Result<f64> {
    loop_phase(&loop_states(inst, &Embedding::canonical(inst))?)
}

/// Literal sum `arg<chi1|chi2> + arg<chi2|chi3> + arg<chi3|chi1>`, wrapped.
/// It agrees with [`bargmann_phase`] only in special configurations, such as
/// real overlaps.
pub fn three_overlap_phase(states: &[PureState; 3]) -> Result<f64> {
    let [x1, x2, x3] = states;
    let z = x1.inner(x2)? * x2.inner(x3)? * x3.inner(x1)?;
    if z.norm() < OVERLAP_FLOOR {
        return Err(Error::UndefinedPhase("vanishing overlap in the loop"));
    }
    Ok(wrap_pi(z.arg()))
}
