use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::register::Register;
use super::{PureState, QubitLabel};
use crate::linalg::{self, CMatrix};
use crate::{Error, Result, Tolerances};

/// One branch of a projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    /// Index into the measurement basis.
    pub outcome: usize,
    pub probability: f64,
    /// Collapsed state on the full register (target replaced by the basis
    /// vector); `None` for zero-probability outcomes.
    pub post_state: Option<PureState>,
}

/// Von Neumann measurement of `target` in the orthonormal `basis`.
pub fn projective_measure(
    psi: &PureState,
    target: QubitLabel,
    basis: &[PureState; 2],
) -> Result<Vec<MeasurementOutcome>> {
    let tol = Tolerances::DEFAULT;
    let vecs: Vec<Vec<_>> = basis.iter().map(|b| b.amplitudes().to_vec()).collect();
    if basis.iter().any(|b| b.register().len() != 1) {
        return Err(Error::ShapeError("basis states must be single-qubit"));
    }
    let defect = linalg::gram(&vecs).max_abs_diff(&CMatrix::identity(2));
    if defect > tol.basis {
        return Err(Error::BasisError(defect));
    }
    psi.register().position(target)?;

    let mut out = Vec::with_capacity(2);
    for (k, b) in basis.iter().enumerate() {
        let projector = CMatrix::outer(b.amplitudes(), b.amplitudes());
        let full = super::Unitary::embed_matrix(&projector, psi.labels(), &[target])?;
        let projected = full.mul_vec(psi.amplitudes());
        let p = linalg::norm_sqr(&projected);
        let post_state = if p > 1e-300 {
            let s = num_complex::Complex64::new(1.0 / p.sqrt(), 0.0);
            Some(PureState::from_register(Register::new(psi.labels())?, linalg::scale_vec(&projected, s), &tol)?)
        } else {
            None
        };
        out.push(MeasurementOutcome { outcome: k, probability: p, post_state });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates;
    use crate::testutil::{random_state, rng};
    use num_complex::Complex64;
    use QubitLabel::*;

    fn z_basis(q: QubitLabel) -> [PureState; 2] {
        [PureState::basis(q, 0), PureState::basis(q, 1)]
    }

    #[test]
    fn plus_state_splits_evenly() {
        let plus = PureState::basis(S, 0).apply(&gates::hadamard(S), &[S]).unwrap();
        let res = projective_measure(&plus, S, &z_basis(S)).unwrap();
        assert!(res.iter().all(|o| (o.probability - 0.5).abs() < 1e-15));
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::qubit(S, Complex64::new(h, 0.0), Complex64::new(h, 0.0)).unwrap();
        let e = projective_measure(&PureState::basis(S, 0), S, &[PureState::basis(S, 0), plus]);
        assert!(matches!(e, Err(Error::BasisError(_))));
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut r = rng(21);
        for _ in 0..500 {
            let psi = random_state(&mut r, &[S, A, C]);
            let b = random_state(&mut r, &[A]);
            let perp = PureState::qubit(A, -b.amplitudes()[1].conj(), b.amplitudes()[0].conj()).unwrap();
            let res = projective_measure(&psi, A, &[b, perp]).unwrap();
            let total: f64 = res.iter().map(|o| o.probability).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for o in &res {
                assert!((o.post_state.as_ref().unwrap().norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }
}
