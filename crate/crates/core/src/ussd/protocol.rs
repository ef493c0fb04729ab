use alloc::vec::Vec;

use num_complex::Complex64;

use super::separability::zeta_pair;
use super::{build_chi, Embedding, UssdInstance, UssdStrategy};
use crate::coherence::tangle;
use crate::qcore::{complete_unitary, PureState, QubitLabel, Unitary};
use crate::Result;

use QubitLabel::{A, C, S};

/// Result of reading the ancilla in `{|0>, |1>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaOutcome {
    /// 0 identifies the state, 1 is inconclusive.
    pub outcome: usize,
    pub probability: f64,
    /// Conditional state over `(S, C)`; `None` if the outcome cannot occur.
    pub state: Option<PureState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRun {
    /// `U_SA (|chi> ⊗ |k>)` over `(S, A, C)`.
    pub gamma: PureState,
    pub unitary: Unitary,
    pub outcomes: Vec<AncillaOutcome>,
}

impl ProtocolRun {
    pub fn success_probability(&self) -> f64 {
        self.outcomes[0].probability
    }
}

/// `U_SA` for the canonical embedding.
pub fn build_unitary(inst: &UssdInstance, strat: &UssdStrategy) -> Result<Unitary> {
    build_unitary_with(inst, strat, &Embedding::canonical(inst))
}

/// `U_SA` realizing `|xi>|k> -> |zeta+>` and `|xi_bar>|k> -> |zeta->`.
pub fn build_unitary_with(inst: &UssdInstance, strat: &UssdStrategy, emb: &Embedding) -> Result<Unitary> {
    emb.validate(inst, &crate::Tolerances::DEFAULT)?;
    let (zp, zm) = zeta_pair(strat);
    let k = &strat.ancilla_init;
    let constraints = [
        (emb.xi.tensor(k)?, PureState::new(&[S, A], zp.to_vec())?),
        (emb.xi_bar.tensor(k)?, PureState::new(&[S, A], zm.to_vec())?),
    ];
    complete_unitary(&constraints)
}

/// Runs the protocol with the canonical embedding.
pub fn run_protocol(inst: &UssdInstance, strat: &UssdStrategy) -> Result<ProtocolRun> {
    run_protocol_with(inst, strat, &Embedding::canonical(inst))
}

pub fn run_protocol_with(inst: &UssdInstance, strat: &UssdStrategy, emb: &Embedding) -> Result<ProtocolRun> {
    let unitary = build_unitary_with(inst, strat, emb)?;
    let chi = build_chi(inst, emb)?;
    let gamma = chi.tensor(&strat.ancilla_init)?.apply(&unitary, &[S, A])?.permute(&[S, A, C])?;
    let outcomes = (0..2)
        .map(|bit| {
            let hit = gamma.condition(A, &PureState::basis(A, bit))?;
            Ok(match hit {
                Some((probability, state)) => AncillaOutcome { outcome: bit, probability, state: Some(state) },
                None => AncillaOutcome { outcome: bit, probability: 0.0, state: None },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProtocolRun { gamma, unitary, outcomes })
}

/// `sqrt(r+) |zeta+>|phi> + sqrt(r-) |zeta->|phi_bar>` over `(S, A, C)`,
/// assembled directly.
pub fn expected_gamma(inst: &UssdInstance, strat: &UssdStrategy, emb: &Embedding) -> Result<PureState> {
    let (zp, zm) = zeta_pair(strat);
    let plus = PureState::new(&[S, A], zp.to_vec())?.tensor(&emb.phi)?;
    let minus = PureState::new(&[S, A], zm.to_vec())?.tensor(&emb.phi_bar)?;
    let (a, b) = (Complex64::new(inst.r_plus.sqrt(), 0.0), Complex64::new(inst.r_minus.sqrt(), 0.0));
    let amps = plus.amplitudes().iter().zip(minus.amplitudes()).map(|(x, y)| x * a + y * b).collect();
    PureState::normalized(&[S, A, C], amps)
}

/// Tangle across `S:C` before and `C:SA` after the unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationReport {
    pub initial: f64,
    pub after: f64,
}

impl ConservationReport {
    pub fn deviation(&self) -> f64 {
        (self.initial - self.after).abs()
    }
}

pub fn total_coherence_conservation(inst: &UssdInstance, strat: &UssdStrategy) -> Result<ConservationReport> {
    let emb = Embedding::canonical(inst);
    let chi = build_chi(inst, &emb)?;
    let run = run_protocol_with(inst, strat, &emb)?;
    Ok(ConservationReport { initial: tangle(&chi, &[S])?, after: tangle(&run.gamma, &[C])? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::{ledger, wootters_concurrence};
    use crate::linalg;
    use crate::qcore::DensityMatrix;
    use crate::testutil::{random_unitary, rng};
    use crate::ussd::{make_instance, optimal_strategy, p_suc_max, polar, separability_params, success_probability};
    use core::f64::consts::PI;
    use rand::Rng;

    fn random_instance(r: &mut impl Rng) -> UssdInstance {
        make_instance(
            r.gen_range(0.0..1.0),
            polar(r.gen_range(0.0..0.98), r.gen_range(-PI..PI)),
            polar(r.gen_range(0.0..1.0), r.gen_range(-PI..PI)),
        )
        .unwrap()
    }

    #[test]
    fn gamma_matches_direct_assembly() {
        let mut r = rng(51);
        for _ in 0..100 {
            let i = random_instance(&mut r);
            let s = optimal_strategy(&i).with_eta(r.gen_range(0.0..1.5), r.gen_range(0.0..6.2)).unwrap();
            let run = run_protocol(&i, &s).unwrap();
            let want = expected_gamma(&i, &s, &Embedding::canonical(&i)).unwrap();
            assert!(linalg::max_abs_diff_vec(run.gamma.amplitudes(), want.amplitudes()) < 1e-10);
            assert!((run.success_probability() - success_probability(&i, &s)).abs() < 1e-10);
            let total: f64 = run.outcomes.iter().map(|o| o.probability).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_case_always_succeeds() {
        let i = make_instance(0.5, polar(0.0, 0.0), polar(0.0, 0.0)).unwrap();
        let run = run_protocol(&i, &optimal_strategy(&i)).unwrap();
        assert!((run.outcomes[0].probability - 1.0).abs() < 1e-15);
        assert!(run.outcomes[1].state.is_none());
    }

    #[test]
    fn success_branch_correlates_system_with_environment() {
        let i = make_instance(0.3, polar(0.5, 0.7), polar(0.6, 0.4)).unwrap();
        let emb = Embedding::canonical(&i);
        let run = run_protocol(&i, &optimal_strategy(&i)).unwrap();
        let st = run.outcomes[0].state.as_ref().unwrap();
        // Conditional state is a|0>|phi> + b|1>|phi_bar>.
        for (bit, env) in [(0, &emb.phi), (1, &emb.phi_bar)] {
            let (_, c_state) = st.condition(S, &PureState::basis(S, bit)).unwrap().unwrap();
            assert!(c_state.fidelity(env).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn failure_branch_leaves_eta() {
        let i = make_instance(0.3, polar(0.5, 0.7), polar(0.6, 0.4)).unwrap();
        let s = optimal_strategy(&i).with_eta(0.4, 1.1).unwrap();
        let run = run_protocol(&i, &s).unwrap();
        let st = run.outcomes[1].state.as_ref().unwrap();
        let rho_s = DensityMatrix::from_pure(st).partial_trace(&[S]).unwrap();
        let eta = DensityMatrix::from_pure(&s.eta());
        assert!(rho_s.matrix().max_abs_diff(eta.matrix()) < 1e-12);
    }

    #[test]
    fn ancilla_and_embedding_do_not_matter() {
        let mut r = rng(53);
        for _ in 0..50 {
            let i = random_instance(&mut r);
            let s = optimal_strategy(&i);
            let sp = separability_params(&i, &s);
            let s = sp.install(&s).unwrap();
            let base = ledger(&run_protocol(&i, &s).unwrap().gamma).unwrap();

            let k = crate::testutil::random_state(&mut r, &[A]);
            let s2 = s.with_ancilla(k).unwrap();
            let run2 = run_protocol(&i, &s2).unwrap();
            assert!((run2.success_probability() - success_probability(&i, &s)).abs() < 1e-12);

            let emb = Embedding::canonical(&i)
                .transformed(&random_unitary(&mut r, &[S]), &random_unitary(&mut r, &[C]))
                .unwrap();
            let run3 = run_protocol_with(&i, &s, &emb).unwrap();
            assert!((run3.success_probability() - p_suc_max(&i)).abs() < 1e-9);
            let l3 = ledger(&run3.gamma).unwrap();
            for k in 0..3 {
                assert!((l3.c_bipartite[k] - base.c_bipartite[k]).abs() < 1e-9);
                assert!((l3.c_pairwise[k] - base.c_pairwise[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn coherence_is_conserved() {
        let mut r = rng(57);
        for _ in 0..200 {
            let i = random_instance(&mut r);
            let m = r.gen_range(i.alpha.norm()..=1.0);
            let ap = polar(m, i.gamma_s());
            let am = if m > 0.0 { polar(i.alpha.norm() / m, 0.0) } else { polar(0.0, 0.0) };
            let s = UssdStrategy::new(&i, ap, am, r.gen_range(0.0..1.5), r.gen_range(0.0..6.2)).unwrap();
            let rep = total_coherence_conservation(&i, &s).unwrap();
            assert!(rep.deviation() < 1e-10);
        }
    }

    #[test]
    fn separating_angles_remove_system_ancilla_entanglement() {
        let mut r = rng(59);
        for _ in 0..100 {
            let i = random_instance(&mut r);
            let s = optimal_strategy(&i);
            let s = separability_params(&i, &s).install(&s).unwrap();
            let run = run_protocol(&i, &s).unwrap();
            let rho = DensityMatrix::from_pure(&run.gamma).partial_trace(&[S, A]).unwrap();
            assert!(wootters_concurrence(&rho).unwrap() < 1e-10);
        }
    }

    #[test]
    fn decomposition_reproduces_reduced_state() {
        let mut r = rng(61);
        for _ in 0..100 {
            let i = random_instance(&mut r);
            // Arbitrary split of alpha between the two amplitudes.
            let m = r.gen_range(i.alpha.norm()..=1.0);
            let theta = r.gen_range(-PI..PI);
            let ap = polar(m, i.gamma_s() + theta);
            let am = if m > 0.0 { polar(i.alpha.norm() / m, theta) } else { polar(0.0, 0.0) };
            let s = UssdStrategy::new(&i, ap, am, r.gen_range(0.0..1.5), r.gen_range(0.0..6.2)).unwrap();
            let sp = separability_params(&i, &s);
            let run = run_protocol(&i, &s).unwrap();
            let rho = DensityMatrix::from_pure(&run.gamma).partial_trace(&[S, A]).unwrap();
            let (v1, v2) = (sp.zeta1.vector(&s), sp.zeta2.vector(&s));
            let sum = crate::linalg::CMatrix::outer(&v1, &v1).add(&crate::linalg::CMatrix::outer(&v2, &v2));
            assert!(rho.matrix().max_abs_diff(&sum) < 1e-10);
        }
    }

    #[test]
    fn ignore_case_is_a_product_with_the_system() {
        let i = make_instance(0.4, polar(0.9, 0.3), polar(0.5, 0.1)).unwrap();
        let s = optimal_strategy(&i);
        let s = separability_params(&i, &s).install(&s).unwrap();
        let run = run_protocol(&i, &s).unwrap();
        let one = PureState::basis(S, 1);
        let (p, rest) = run.gamma.condition(S, &one).unwrap().unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        // rest = sqrt(r+) alpha+ e^{i delta}|1>|phi> + sqrt(r-)(a-|0> + alpha- e^{i delta}|1>)|phi_bar>
        let emb = Embedding::canonical(&i);
        let e = Complex64::from_polar(1.0, s.delta);
        let a_plus = PureState::qubit(A, Complex64::new(0.0, 0.0), s.alpha_plus * e / s.alpha_plus.norm()).unwrap();
        let a_minus =
            PureState::normalized(&[A], alloc::vec![Complex64::new(s.alpha_minus_bar(), 0.0), s.alpha_minus * e])
                .unwrap();
        let (x, y) = (a_plus.tensor(&emb.phi).unwrap(), a_minus.tensor(&emb.phi_bar).unwrap());
        let (cp, cm) = (i.r_plus.sqrt() * s.alpha_plus.norm(), i.r_minus.sqrt());
        let amps = x.amplitudes().iter().zip(y.amplitudes()).map(|(u, v)| u * cp + v * cm).collect();
        let want = PureState::normalized(&[A, C], amps).unwrap();
        assert!(rest.fidelity(&want).unwrap() > 1.0 - 1e-12);
        let l = ledger(&run.gamma).unwrap();
        assert!(l.bipartite(S).unwrap() < 1e-12 && l.c_genuine.abs() < 1e-10);
        assert!((l.bipartite(A).unwrap() - l.c_total).abs() < 1e-10);
        assert!((l.pairwise(C, A).unwrap() - l.c_total).abs() < 1e-10);
    }
}
