use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{OptimalCase, UssdInstance};
use crate::qcore::{PureState, QubitLabel};
use crate::{Error, Result};

/// Parameters of the joint unitary on `S` and `A`.
///
/// `U_SA` sends `|xi>|k>` to `|zeta+> = a+|00> + alpha+ |eta>|1>` and
/// `|xi_bar>|k>` to `|zeta-> = a-|10> + alpha- |eta>|1>`, where
/// `a± = sqrt(1 - |alpha±|^2)` and `|eta> = cos beta |0> + sin beta e^{i delta} |1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct UssdStrategy {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub beta: f64,
    pub delta: f64,
    /// Initial ancilla state `|k>`.
    pub ancilla_init: PureState,
}

const PRODUCT_TOL: f64 = 1e-12;

impl UssdStrategy {
    pub fn new(
        inst: &UssdInstance,
        alpha_plus: Complex64,
        alpha_minus: Complex64,
        beta: f64,
        delta: f64,
    ) -> Result<Self> {
        for (name, a) in [("alpha_plus", alpha_plus), ("alpha_minus", alpha_minus)] {
            if !(a.norm() <= 1.0 + PRODUCT_TOL) {
                return Err(Error::RangeError { name, value: a.norm() });
            }
        }
        let defect = (alpha_plus * alpha_minus.conj() - inst.alpha).norm();
        if !(defect <= PRODUCT_TOL) {
            return Err(Error::RangeError { name: "alpha_plus * conj(alpha_minus) - alpha", value: defect });
        }
        let s = UssdStrategy {
            alpha_plus,
            alpha_minus,
            beta: 0.0,
            delta: 0.0,
            ancilla_init: PureState::basis(QubitLabel::A, 0),
        };
        s.with_eta(beta, delta)
    }

    /// Same amplitudes with a new failure state `|eta>`.
    pub fn with_eta(&self, beta: f64, delta: f64) -> Result<Self> {
        if !(-1e-12..=FRAC_PI_2 + 1e-12).contains(&beta) {
            return Err(Error::RangeError { name: "beta", value: beta });
        }
        if !delta.is_finite() {
            return Err(Error::RangeError { name: "delta", value: delta });
        }
        Ok(UssdStrategy { beta: beta.clamp(0.0, FRAC_PI_2), delta: delta.rem_euclid(TAU), ..self.clone() })
    }

    /// Same strategy with a different initial ancilla state.
    pub fn with_ancilla(&self, k: PureState) -> Result<Self> {
        if k.labels() != [QubitLabel::A] {
            return Err(Error::InvalidRegister("ancilla state must live on A"));
        }
        Ok(UssdStrategy { ancilla_init: k, ..self.clone() })
    }

    /// `|eta>` on `S`.
    pub fn eta(&self) -> PureState {
        PureState::bloch(QubitLabel::S, 2.0 * self.beta, self.delta)
    }

    /// `sqrt(1 - |alpha+|^2)`.
    pub fn alpha_plus_bar(&self) -> f64 {
        (1.0 - self.alpha_plus.norm_sqr()).max(0.0).sqrt()
    }

    /// `sqrt(1 - |alpha-|^2)`.
    pub fn alpha_minus_bar(&self) -> f64 {
        (1.0 - self.alpha_minus.norm_sqr()).max(0.0).sqrt()
    }
}

/// Optimal amplitudes with `arg alpha+ = gamma_s`, `arg alpha- = 0` and
/// `|eta> = |0>`.
pub fn optimal_strategy(inst: &UssdInstance) -> UssdStrategy {
    let a = inst.alpha.norm();
    let (m_plus, m_minus) = match inst.case() {
        OptimalCase::Balanced if a == 0.0 => (0.0, 0.0),
        OptimalCase::Balanced => {
            let m = (a / inst.tilde_alpha).sqrt();
            (m, a / m)
        }
        OptimalCase::IgnorePlus => (1.0, a),
    };
    UssdStrategy {
        alpha_plus: Complex64::from_polar(m_plus, inst.gamma_s()),
        alpha_minus: Complex64::new(m_minus, 0.0),
        beta: 0.0,
        delta: 0.0,
        ancilla_init: PureState::basis(QubitLabel::A, 0),
    }
}

/// `r+ (1 - |alpha+|^2) + r- (1 - |alpha-|^2)`.
pub fn success_probability(inst: &UssdInstance, strat: &UssdStrategy) -> f64 {
    inst.r_plus * (1.0 - strat.alpha_plus.norm_sqr()) + inst.r_minus * (1.0 - strat.alpha_minus.norm_sqr())
}

/// Closed-form optimum of [`success_probability`].
pub fn p_suc_max(inst: &UssdInstance) -> f64 {
    let a = inst.alpha.norm();
    match inst.case() {
        OptimalCase::Balanced => inst.r_plus + inst.r_minus - 2.0 * (inst.r_plus * inst.r_minus).sqrt() * a,
        OptimalCase::IgnorePlus => inst.r_minus * (1.0 - a * a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ussd::{make_instance, polar};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn balanced_case_amplitudes() {
        let i = make_instance(0.2, c(0.4), c(0.0)).unwrap();
        let s = optimal_strategy(&i);
        assert!((s.alpha_plus.norm() - 0.8f64.sqrt()).abs() < 1e-15);
        assert!((s.alpha_plus * s.alpha_minus.conj() - i.alpha).norm() < 1e-15);
        assert!((p_suc_max(&i) - 0.68).abs() < 1e-15);
        assert!((success_probability(&i, &s) - 0.68).abs() < 1e-15);
    }

    #[test]
    fn ignore_case_amplitudes() {
        let i = make_instance(0.4, c(0.9), c(0.0)).unwrap();
        assert_eq!(i.case(), OptimalCase::IgnorePlus);
        let s = optimal_strategy(&i);
        assert_eq!(s.alpha_plus.norm(), 1.0);
        assert!((p_suc_max(&i) - 0.114).abs() < 1e-15);
        assert!((success_probability(&i, &s) - 0.114).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_states_are_perfectly_distinguished() {
        let i = make_instance(0.3, c(0.0), polar(0.5, 1.0)).unwrap();
        let s = optimal_strategy(&i);
        assert_eq!(s.alpha_plus.norm(), 0.0);
        assert!((success_probability(&i, &s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn near_identical_states_fail() {
        let i = make_instance(0.3, c(1.0 - 1e-9), c(0.0)).unwrap();
        assert!(p_suc_max(&i) < 1e-8);
    }

    #[test]
    fn phase_split_reproduces_overlap() {
        let i = make_instance(0.35, polar(0.45, 2.1), polar(0.3, -0.4)).unwrap();
        let s = optimal_strategy(&i);
        assert!((s.alpha_plus * s.alpha_minus.conj() - i.alpha).norm() < 1e-15);
        assert!(UssdStrategy::new(&i, s.alpha_plus, s.alpha_minus, 0.3, 7.0).is_ok());
        assert!(UssdStrategy::new(&i, s.alpha_plus, c(0.1), 0.3, 0.0).is_err());
        assert!(s.with_eta(2.0, 0.0).is_err());
        assert!((s.with_eta(0.1, -1.0).unwrap().delta - (TAU - 1.0)).abs() < 1e-15);
    }
}
