use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use ussd_core::coherence::{closed_form_coherences, ledger, pure_concurrence, tangle, wootters_concurrence};
use ussd_core::linalg::CMatrix;
use ussd_core::oracle::{decomposition_check, rho_sa};
use ussd_core::qcore::{projective_measure, DensityMatrix, PureState, QubitLabel, Unitary};
use ussd_core::teleport::{
    branch_coherences, branch_weighted_success, square_mean_root_with, BOutcome, CoherenceKind, TeleportInstance,
};
use ussd_core::ussd::{
    make_instance, optimal_strategy, p_suc_max, polar, run_protocol, run_protocol_with, separability_params,
    success_probability, Embedding, UssdInstance,
};
use ussd_core::Complex64;

use QubitLabel::{A, C, S};

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn state(labels: &'static [QubitLabel]) -> impl Strategy<Value = PureState> {
    amplitudes(1 << labels.len()).prop_map(move |v| PureState::normalized(labels, v).unwrap())
}

/// `e^{i g} [[e^{ia} cos t, e^{ib} sin t], [-e^{-ib} sin t, e^{-ia} cos t]]`.
fn local_unitary(q: QubitLabel) -> impl Strategy<Value = Unitary> {
    (0.0..TAU, 0.0..TAU, 0.0..FRAC_PI_2, 0.0..TAU).prop_map(move |(g, a, t, b)| {
        let ph = Complex64::from_polar(1.0, g);
        let m = CMatrix::from_rows(vec![
            ph * Complex64::from_polar(t.cos(), a),
            ph * Complex64::from_polar(t.sin(), b),
            -ph * Complex64::from_polar(t.sin(), -b),
            ph * Complex64::from_polar(t.cos(), -a),
        ]);
        Unitary::new(&[q], m).unwrap()
    })
}

fn instance() -> impl Strategy<Value = UssdInstance> {
    (0.02f64..0.98, 0.0f64..0.97, -PI..PI, 0.0f64..0.99, -PI..PI)
        .prop_map(|(p, a, ga, ac, gc)| make_instance(p, polar(a, ga), polar(ac, gc)).unwrap())
}

fn teleport_instance() -> impl Strategy<Value = TeleportInstance> {
    (0.0f64..0.78, 0.0..PI, 0.0..TAU).prop_map(|(r, m, n)| TeleportInstance::new(r, m, n).unwrap())
}

fn ledger_diff(a: &ussd_core::coherence::CoherenceLedger, b: &ussd_core::coherence::CoherenceLedger) -> f64 {
    let mut d = (a.c_total - b.c_total).abs().max((a.c_genuine - b.c_genuine).abs());
    for k in 0..3 {
        d = d.max((a.c_bipartite[k] - b.c_bipartite[k]).abs());
        d = d.max((a.c_pairwise[k] - b.c_pairwise[k]).abs());
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduced_states_are_valid(psi in state(&[S, A, C])) {
        for keep in [&[S][..], &[A, C][..], &[S, C][..]] {
            let rho = DensityMatrix::from_pure(&psi).partial_trace(keep).unwrap();
            prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
            prop_assert!(rho.eigenvalues().iter().all(|&e| e > -1e-10));
        }
    }

    #[test]
    fn complementary_spectra_agree(psi in state(&[S, C])) {
        let full = DensityMatrix::from_pure(&psi);
        let mut a = full.partial_trace(&[S]).unwrap().eigenvalues();
        let mut b = full.partial_trace(&[C]).unwrap().eigenvalues();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn measurement_probabilities_sum_to_one(psi in state(&[S, A, C]), u in local_unitary(S)) {
        let basis = [PureState::basis(S, 0).apply(&u, &[S]).unwrap(), PureState::basis(S, 1).apply(&u, &[S]).unwrap()];
        let out = projective_measure(&psi, S, &basis).unwrap();
        prop_assert!((out.iter().map(|o| o.probability).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monogamy_equalities(psi in state(&[S, A, C])) {
        let l = ledger(&psi).unwrap();
        prop_assert!(l.decomposition_spread() < 1e-9);
        prop_assert!(l.c_genuine > -1e-10);
        let perm = psi.permute(&[C, S, A]).unwrap();
        prop_assert!((ledger(&perm).unwrap().c_genuine - l.c_genuine).abs() < 1e-9);
    }

    #[test]
    fn tangle_is_linear_entropy(psi in state(&[S, A, C])) {
        for q in [S, A, C] {
            let purity = DensityMatrix::from_pure(&psi).partial_trace(&[q]).unwrap().purity();
            prop_assert!((tangle(&psi, &[q]).unwrap() - 2.0 * (1.0 - purity)).abs() < 1e-10);
            prop_assert!((pure_concurrence(&psi, &[q]).unwrap().powi(2) - tangle(&psi, &[q]).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn coherences_are_local_unitary_invariant(
        psi in state(&[S, A, C]),
        us in local_unitary(S),
        ua in local_unitary(A),
        uc in local_unitary(C),
    ) {
        let moved = psi.apply(&us, &[S]).unwrap().apply(&ua, &[A]).unwrap().apply(&uc, &[C]).unwrap();
        prop_assert!(ledger_diff(&ledger(&psi).unwrap(), &ledger(&moved).unwrap()) < 1e-9);
        let rho = DensityMatrix::from_pure(&psi).partial_trace(&[S, A]).unwrap();
        let w = wootters_concurrence(&rho).unwrap();
        let w2 = wootters_concurrence(&rho.conjugate(&us, &[S]).unwrap().conjugate(&ua, &[A]).unwrap()).unwrap();
        prop_assert!((w - w2).abs() < 1e-9);
    }

    #[test]
    fn optimum_dominates_feasible_strategies(inst in instance(), t in 0.0f64..1.0) {
        let a = inst.alpha.norm();
        let ap = a + (1.0 - a) * t;
        let am = if ap > 0.0 { a / ap } else { 0.0 };
        let p = inst.r_plus * (1.0 - ap * ap) + inst.r_minus * (1.0 - am * am);
        prop_assert!(p <= p_suc_max(&inst) + 1e-12);
    }

    #[test]
    fn success_ignores_failure_state(inst in instance(), b in 0.0..FRAC_PI_2, d in 0.0..TAU, k in local_unitary(A)) {
        let s0 = optimal_strategy(&inst);
        let s = s0.with_eta(b, d).unwrap().with_ancilla(PureState::basis(A, 0).apply(&k, &[A]).unwrap()).unwrap();
        prop_assert!((success_probability(&inst, &s) - success_probability(&inst, &s0)).abs() < 1e-12);
        let run = run_protocol(&inst, &s).unwrap();
        prop_assert!((run.success_probability() - p_suc_max(&inst)).abs() < 1e-10);
    }

    #[test]
    fn embedding_frame_is_irrelevant(inst in instance(), us in local_unitary(S), uc in local_unitary(C)) {
        let s = optimal_strategy(&inst);
        let s = separability_params(&inst, &s).install(&s).unwrap();
        let emb = Embedding::canonical(&inst).transformed(&us, &uc).unwrap();
        let a = ledger(&run_protocol(&inst, &s).unwrap().gamma).unwrap();
        let run = run_protocol_with(&inst, &s, &emb).unwrap();
        prop_assert!(ledger_diff(&a, &ledger(&run.gamma).unwrap()) < 1e-9);
        prop_assert!((run.success_probability() - p_suc_max(&inst)).abs() < 1e-10);
    }

    #[test]
    fn separating_decomposition_holds(inst in instance()) {
        let s0 = optimal_strategy(&inst);
        let sep = separability_params(&inst, &s0);
        let s = sep.install(&s0).unwrap();
        let rho = rho_sa(&inst, &s).unwrap();
        prop_assert!(decomposition_check(&rho, &inst, &s, &sep).max() < 1e-10);
        prop_assert!(wootters_concurrence(&rho).unwrap() < 1e-10);
    }

    #[test]
    fn conservation_and_closed_forms(inst in instance(), b in 0.0..FRAC_PI_2, d in 0.0..TAU) {
        let s = optimal_strategy(&inst).with_eta(b, d).unwrap();
        let run = run_protocol(&inst, &s).unwrap();
        let chi = ussd_core::ussd::build_chi(&inst, &Embedding::canonical(&inst)).unwrap();
        let before = tangle(&chi, &[C]).unwrap();
        let l = ledger(&run.gamma).unwrap();
        prop_assert!((before - l.bipartite(C).unwrap()).abs() < 1e-10);
        let cf = closed_form_coherences(&inst, &s);
        prop_assert!((cf.c_total - before).abs() < 1e-10);
        prop_assert!((cf.c_genuine - l.c_genuine).abs() < 1e-9);
    }

    #[test]
    fn teleport_branch_bookkeeping(t in teleport_instance()) {
        let pp = t.branch_probability(BOutcome::Plus);
        prop_assert!((pp + t.branch_probability(BOutcome::Minus) - 1.0).abs() < 1e-12);
        prop_assert!((branch_weighted_success(&t).unwrap() - (1.0 - t.s())).abs() < 1e-12);
        let s = t.s();
        let want = 2.0 * s / (1.0 + s);
        for b in BOutcome::BOTH {
            let cf = branch_coherences(&t, b).unwrap();
            if cf.c_total > 1e-8 {
                prop_assert!((cf.c_a_sc / cf.c_total - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn quadrature_doubling_is_stable(rho in 0.0f64..0.785) {
        for kind in [CoherenceKind::Total, CoherenceKind::SystemEnv, CoherenceKind::AncillaSystemEnv] {
            let a = square_mean_root_with(rho, kind, 32).unwrap();
            let b = square_mean_root_with(rho, kind, 64).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
