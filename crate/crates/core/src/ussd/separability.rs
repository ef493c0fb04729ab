use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{success_probability, UssdInstance, UssdStrategy};
use crate::coherence::amplitude_concurrence;
use crate::Result;

/// Below this failure probability the `zeta` decomposition falls back to
/// the environment basis directly.
const FAILURE_FLOOR: f64 = 1e-14;
/// `q±` below this are treated as zero when fixing `delta*`.
const Q_FLOOR: f64 = 1e-14;

/// One subnormalized component `|zeta_j> = q+ |zeta+> + q- e^{i gamma} |zeta->`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaComponent {
    pub q_plus: f64,
    pub q_minus: f64,
    pub gamma: f64,
}

impl ZetaComponent {
    /// Amplitudes over `(S, A)` for the given strategy.
    pub fn vector(&self, strat: &UssdStrategy) -> [Complex64; 4] {
        let (zp, zm) = zeta_pair(strat);
        let b = Complex64::from_polar(self.q_minus, self.gamma);
        core::array::from_fn(|k| zp[k] * self.q_plus + zm[k] * b)
    }

    /// `2 |q+ alpha+ + q- alpha- e^{i g}| |q+ a+ sin b e^{i d} - q- a- cos b e^{i g}|`.
    pub fn concurrence_closed_form(&self, strat: &UssdStrategy) -> f64 {
        let g = Complex64::from_polar(1.0, self.gamma);
        let first = strat.alpha_plus * self.q_plus + strat.alpha_minus * g * self.q_minus;
        let second = Complex64::from_polar(strat.alpha_plus_bar() * strat.beta.sin() * self.q_plus, strat.delta)
            - g * (strat.alpha_minus_bar() * strat.beta.cos() * self.q_minus);
        2.0 * first.norm() * second.norm()
    }

    /// `2 |det|` of the amplitude matrix, without normalization.
    pub fn concurrence(&self, strat: &UssdStrategy) -> f64 {
        amplitude_concurrence(self.vector(strat))
    }
}

/// `|zeta+>` and `|zeta->` over `(S, A)`.
pub fn zeta_pair(strat: &UssdStrategy) -> ([Complex64; 4], [Complex64; 4]) {
    let (c, s) = (strat.beta.cos(), Complex64::from_polar(strat.beta.sin(), strat.delta));
    let zero = Complex64::new(0.0, 0.0);
    let zp = [Complex64::new(strat.alpha_plus_bar(), 0.0), strat.alpha_plus * c, zero, strat.alpha_plus * s];
    let zm = [zero, strat.alpha_minus * c, Complex64::new(strat.alpha_minus_bar(), 0.0), strat.alpha_minus * s];
    (zp, zm)
}

/// Angles of `|eta>` that make `rho_SA` separable, with the two-term
/// decomposition that witnesses it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityParams {
    pub q_plus: f64,
    pub q_minus: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub beta_star: f64,
    pub delta_star: f64,
    pub zeta1: ZetaComponent,
    pub zeta2: ZetaComponent,
}

/// Computes `beta*`, `delta*` and the decomposition
/// `rho_SA = |zeta1><zeta1| + |zeta2><zeta2|`.
///
/// With `sqrt(q±) e^{i w±} = sqrt(r±) alpha± + sqrt(r∓) alpha∓ |alpha_c| e^{∓i gamma_c}`:
/// `q1± = sqrt(r± q± / F)`, `gamma1 = w+ - w-`,
/// `q2± = |alpha∓| sqrt(1-|alpha_c|^2) sqrt(r+ r- / F)`, `gamma2 = gamma_s - pi`,
/// where `F` is the failure probability. The `q2` terms assume the phase split
/// `arg alpha- = 0`. When a `q±` vanishes the matching angle takes its limit
/// and `delta* = 0`.
pub fn separability_params(inst: &UssdInstance, strat: &UssdStrategy) -> SeparabilityParams {
    let (rp, rm) = (inst.r_plus, inst.r_minus);
    let (srp, srm) = (rp.sqrt(), rm.sqrt());
    let ac = inst.alpha_c.norm();
    let gc = inst.gamma_c();
    let (ap, am) = (strat.alpha_plus, strat.alpha_minus);
    let zp = ap * srp + am * Complex64::from_polar(srm * ac, -gc);
    let zm = am * srm + ap * Complex64::from_polar(srp * ac, gc);
    let (q_plus, q_minus) = (zp.norm_sqr(), zm.norm_sqr());
    let (omega_plus, omega_minus) = (zp.arg(), zm.arg());

    let beta_star = f64::atan2(
        (rm * q_minus * (1.0 - am.norm_sqr()).max(0.0)).sqrt(),
        (rp * q_plus * (1.0 - ap.norm_sqr()).max(0.0)).sqrt(),
    );
    let delta_star =
        if q_plus < Q_FLOOR || q_minus < Q_FLOOR { 0.0 } else { (omega_plus - omega_minus).rem_euclid(TAU) };

    let failure = 1.0 - success_probability(inst, strat);
    let acb = inst.alpha_c_bar();
    let (zeta1, zeta2) = if failure > FAILURE_FLOOR {
        let z1 = ZetaComponent {
            q_plus: (rp * q_plus / failure).sqrt(),
            q_minus: (rm * q_minus / failure).sqrt(),
            gamma: omega_plus - omega_minus,
        };
        let k = acb * (rp * rm / failure).sqrt();
        let z2 = ZetaComponent { q_plus: am.norm() * k, q_minus: ap.norm() * k, gamma: inst.gamma_s() - PI };
        (z1, z2)
    } else {
        // Both failure amplitudes vanish; split the environment along |phi>.
        let z1 = ZetaComponent { q_plus: srp, q_minus: srm * ac, gamma: -gc };
        let z2 = ZetaComponent { q_plus: 0.0, q_minus: srm * acb, gamma: 0.0 };
        (z1, z2)
    };

    SeparabilityParams { q_plus, q_minus, omega_plus, omega_minus, beta_star, delta_star, zeta1, zeta2 }
}

impl SeparabilityParams {
    /// Residuals of `q1±^2 + q2±^2 = r±` and of the cross constraint
    /// `q1+ q1- e^{i g1} + q2+ q2- e^{i g2} = sqrt(r+ r-) alpha_c*`.
    pub fn constraint_residuals(&self, inst: &UssdInstance) -> [f64; 3] {
        let (z1, z2) = (&self.zeta1, &self.zeta2);
        let plus = z1.q_plus * z1.q_plus + z2.q_plus * z2.q_plus - inst.r_plus;
        let minus = z1.q_minus * z1.q_minus + z2.q_minus * z2.q_minus - inst.r_minus;
        let cross = Complex64::from_polar(z1.q_plus * z1.q_minus, z1.gamma)
            + Complex64::from_polar(z2.q_plus * z2.q_minus, z2.gamma)
            - inst.alpha_c.conj() * (inst.r_plus * inst.r_minus).sqrt();
        [plus.abs(), minus.abs(), cross.norm()]
    }

    /// The strategy with `|eta>` set to the separating angles.
    pub fn install(&self, strat: &UssdStrategy) -> Result<UssdStrategy> {
        strat.with_eta(self.beta_star, self.delta_star)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ussd::{make_instance, optimal_strategy, polar};
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn constraints_hold_for_random_instances() {
        let cases = [
            (0.3, polar(0.5, 0.7), polar(0.6, 0.4)),
            (0.2, polar(0.4, 0.0), polar(0.0, 0.0)),
            (0.45, polar(0.2, -2.0), polar(0.95, 3.0)),
            (0.1, polar(0.8, 1.0), polar(0.3, -1.0)),
        ];
        for (p, a, ac) in cases {
            let i = make_instance(p, a, ac).unwrap();
            let s = optimal_strategy(&i);
            let sp = separability_params(&i, &s);
            for r in sp.constraint_residuals(&i) {
                assert!(r < 1e-12, "{r}");
            }
        }
    }

    #[test]
    fn separating_angles_zero_both_components() {
        let i = make_instance(0.3, polar(0.5, 0.7), polar(0.6, 0.4)).unwrap();
        let sp = separability_params(&i, &optimal_strategy(&i));
        let s = sp.install(&optimal_strategy(&i)).unwrap();
        for z in [sp.zeta1, sp.zeta2] {
            assert!(z.concurrence(&s) < 1e-12);
            assert!((z.concurrence(&s) - z.concurrence_closed_form(&s)).abs() < 1e-12);
        }
    }

    #[test]
    fn ignore_case_separates_at_right_angle() {
        let i = make_instance(0.4, polar(0.9, 0.3), polar(0.5, 0.1)).unwrap();
        let sp = separability_params(&i, &optimal_strategy(&i));
        assert!((sp.beta_star - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_case_uses_environment_split() {
        let i = make_instance(0.3, polar(0.0, 0.0), polar(0.6, 0.4)).unwrap();
        let sp = separability_params(&i, &optimal_strategy(&i));
        assert_eq!(sp.delta_star, 0.0);
        for r in sp.constraint_residuals(&i) {
            assert!(r < 1e-12);
        }
    }
}
