//! Oracle cross-checks and invariant sweeps run by `ussd-lab selftest`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;
use ussd_core::coherence::{
    closed_form_coherences, coherence_band, ledger, tangle, three_tangle, wootters_concurrence,
};
use ussd_core::oracle::{
    decomposition_check, final_delta, grid_min_concurrence, grid_optimize_success, quadrature_refine, rho_sa, GridSpec,
};
use ussd_core::qcore::{projective_measure, DensityMatrix, PureState, QubitLabel};
use ussd_core::teleport::{
    branch_coherences, branch_instance, branch_ledger, branch_weighted_success, coherence_proportion, run_all,
    smr_integrand, square_mean_root, total_success_probability, BOutcome, CoherenceKind, TeleportInstance,
};
use ussd_core::ussd::{
    bargmann_phase, build_chi, loop_phase, loop_states, make_instance, optimal_strategy, p_suc_max, polar,
    run_protocol, separability_params, success_probability, wrap_pi, Embedding,
};
use ussd_core::Result;

use crate::sample::{random_instance, random_local_unitary, random_state, random_teleport, rng};
use crate::table::{Cell, Table};

use QubitLabel::{A, C, S};

/// A named residual with the tolerance it must stay under.
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub run: fn() -> Result<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub error: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.residual.is_finite() && self.residual <= self.tolerance
    }
}

fn max_over<T>(items: impl IntoIterator<Item = T>, mut f: impl FnMut(T) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in items {
        let v = f(x)?;
        worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
    }
    Ok(worst)
}

/// Largest step against the requested direction.
fn monotone_violation(xs: &[f64], increasing: bool) -> f64 {
    xs.windows(2).map(|w| if increasing { w[0] - w[1] } else { w[1] - w[0] }).fold(0.0, f64::max)
}

fn spot_case_i() -> Result<f64> {
    Ok((p_suc_max(&make_instance(0.2, polar(0.4, 0.0), polar(0.0, 0.0))?) - 0.68).abs())
}

fn spot_case_ii() -> Result<f64> {
    Ok((p_suc_max(&make_instance(0.4, polar(0.9, 0.0), polar(0.0, 0.0))?) - 0.114).abs())
}

fn grid_success() -> Result<f64> {
    let mut r = rng(1);
    let g = GridSpec::success_default();
    max_over(0..50, |_| {
        let i = random_instance(&mut r);
        Ok((grid_optimize_success(&i, &g).1 - p_suc_max(&i)).abs())
    })
}

fn protocol_success() -> Result<f64> {
    let mut r = rng(2);
    max_over(0..50, |_| {
        let i = random_instance(&mut r);
        Ok((run_protocol(&i, &optimal_strategy(&i))?.success_probability() - p_suc_max(&i)).abs())
    })
}

fn eta_independence() -> Result<f64> {
    let mut r = rng(3);
    max_over(0..50, |_| {
        let i = random_instance(&mut r);
        let s0 = optimal_strategy(&i);
        let k = PureState::basis(A, 0).apply(&random_local_unitary(&mut r, A), &[A])?;
        let s = s0.with_eta(0.7, 2.1)?.with_ancilla(k)?;
        let d1 = (success_probability(&i, &s) - success_probability(&i, &s0)).abs();
        let d2 = (run_protocol(&i, &s)?.success_probability() - p_suc_max(&i)).abs();
        Ok(d1.max(d2))
    })
}

fn separable_rho() -> Result<f64> {
    let mut r = rng(4);
    max_over(0..50, |_| {
        let i = random_instance(&mut r);
        let s = optimal_strategy(&i);
        let s = separability_params(&i, &s).install(&s)?;
        let g = run_protocol(&i, &s)?.gamma;
        wootters_concurrence(&DensityMatrix::from_pure(&g).partial_trace(&[S, A])?)
    })
}

fn separating_argmin() -> Result<f64> {
    let mut r = rng(5);
    let g = GridSpec::eta_default();
    max_over(0..4, |_| {
        let i = random_instance(&mut r);
        let s = optimal_strategy(&i);
        let sep = separability_params(&i, &s);
        let m = grid_min_concurrence(&i, &s, &g)?;
        let mut d = (m.beta - sep.beta_star).abs();
        let (sb, cb) = (sep.beta_star.sin(), sep.beta_star.cos());
        if sb > 1e-3 && cb > 1e-3 && sep.q_plus > 1e-6 && sep.q_minus > 1e-6 {
            d = d.max(wrap_pi(m.delta - sep.delta_star).abs());
        }
        Ok(d.max(m.concurrence))
    })
}

fn decomposition() -> Result<f64> {
    let mut r = rng(6);
    max_over(0..50, |_| {
        let i = random_instance(&mut r);
        let s0 = optimal_strategy(&i);
        let sep = separability_params(&i, &s0);
        let s = sep.install(&s0)?;
        Ok(decomposition_check(&rho_sa(&i, &s)?, &i, &s, &sep).max())
    })
}

fn conservation() -> Result<f64> {
    let mut r = rng(7);
    max_over(0..200, |_| {
        let i = random_instance(&mut r);
        let s = optimal_strategy(&i).with_eta(rand::Rng::gen_range(&mut r, 0.0..FRAC_PI_2), 1.3)?;
        let chi = build_chi(&i, &Embedding::canonical(&i))?;
        let g = run_protocol(&i, &s)?.gamma;
        Ok((tangle(&chi, &[S])? - tangle(&g, &[C])?).abs())
    })
}

fn closed_forms() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for a in [0.0, 0.25, 0.5, 0.75, 0.95] {
            for ac in [0.0, 0.3, 0.6, 0.9, 0.99] {
                for g in [0.0, 1.0, 2.0, 3.0] {
                    let i = make_instance(p, polar(a, 0.0), polar(ac, g))?;
                    let s = optimal_strategy(&i);
                    let s = separability_params(&i, &s).install(&s)?;
                    let l = ledger(&run_protocol(&i, &s)?.gamma)?;
                    let cf = closed_form_coherences(&i, &s);
                    for (x, y) in [
                        (cf.c_total, l.bipartite(C)?),
                        (cf.c_a_sc, l.bipartite(A)?),
                        (cf.c_s_c(), l.pairwise(S, C)?),
                        (cf.c_c_a(), l.pairwise(C, A)?),
                        (cf.c_s_ca(), l.bipartite(S)?),
                        (cf.c_genuine, l.c_genuine),
                        (0.0, l.pairwise(A, S)?),
                    ] {
                        worst = worst.max((x - y).abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

fn monogamy_sums() -> Result<f64> {
    let mut r = rng(8);
    max_over(0..1000, |_| Ok(ledger(&random_state(&mut r, &[S, A, C]))?.decomposition_spread()))
}

fn genuine_is_three_tangle() -> Result<f64> {
    let mut r = rng(9);
    max_over(0..1000, |_| {
        let psi = random_state(&mut r, &[S, A, C]);
        Ok((ledger(&psi)?.c_genuine - three_tangle(&psi)?).abs())
    })
}

fn genuine_nonnegative() -> Result<f64> {
    let mut r = rng(10);
    max_over(0..1000, |_| Ok((-ledger(&random_state(&mut r, &[S, A, C]))?.c_genuine).max(0.0)))
}

fn ledger_lu_invariance() -> Result<f64> {
    let mut r = rng(11);
    max_over(0..200, |_| {
        let psi = random_state(&mut r, &[S, A, C]);
        let mut moved = psi.clone();
        for q in [S, A, C] {
            moved = moved.apply(&random_local_unitary(&mut r, q), &[q])?;
        }
        let (a, b) = (ledger(&psi)?, ledger(&moved)?);
        let mut d = (a.c_genuine - b.c_genuine).abs();
        for k in 0..3 {
            d = d.max((a.c_bipartite[k] - b.c_bipartite[k]).abs()).max((a.c_pairwise[k] - b.c_pairwise[k]).abs());
        }
        Ok(d)
    })
}

fn partial_traces() -> Result<f64> {
    let mut r = rng(12);
    max_over(0..1000, |_| {
        let psi = random_state(&mut r, &[S, A, C]);
        let rho = DensityMatrix::from_pure(&psi);
        max_over([&[S][..], &[A, C][..]], |keep| {
            let red = rho.partial_trace(keep)?;
            let neg = red.eigenvalues().iter().fold(0.0f64, |m, &e| m.max(-e));
            Ok((red.trace() - 1.0).abs().max(neg))
        })
    })
}

fn measurement_sums() -> Result<f64> {
    let mut r = rng(13);
    max_over(0..500, |_| {
        let psi = random_state(&mut r, &[S, A, C]);
        let u = random_local_unitary(&mut r, C);
        let basis = [PureState::basis(C, 0).apply(&u, &[C])?, PureState::basis(C, 1).apply(&u, &[C])?];
        let total: f64 = projective_measure(&psi, C, &basis)?.iter().map(|o| o.probability).sum();
        Ok((total - 1.0).abs())
    })
}

fn unitarity() -> Result<f64> {
    let mut r = rng(14);
    max_over(0..100, |_| {
        let i = random_instance(&mut r);
        let s = optimal_strategy(&i);
        Ok(run_protocol(&i, &s)?.unitary.matrix().unitarity_defect())
    })
}

fn fig2_column(gamma: f64) -> Result<Vec<f64>> {
    (0..101)
        .map(|k| {
            let ac = if k == 100 { 1.0 - 1e-9 } else { k as f64 / 100.0 };
            Ok(p_suc_max(&make_instance(0.2, polar(0.4, 0.0), polar(ac, gamma))?))
        })
        .collect()
}

fn fig2_decreasing() -> Result<f64> {
    Ok(monotone_violation(&fig2_column(0.0)?, false))
}

fn fig2_increasing() -> Result<f64> {
    let col = fig2_column(PI)?;
    Ok(monotone_violation(&col, true).max((col[100] - 1.0).abs()))
}

fn fig3_ratio(a: f64) -> Result<f64> {
    let i = make_instance(0.4, polar(a, 0.0), polar(0.8, FRAC_PI_2))?;
    let s = optimal_strategy(&i);
    let cf = closed_form_coherences(&i, &separability_params(&i, &s).install(&s)?);
    Ok(cf.c_a_sc / cf.c_total)
}

fn fig3_monotone() -> Result<f64> {
    let edge = (0.4f64 / 0.6).sqrt();
    let case_i: Vec<f64> = (0..100).map(|k| fig3_ratio(edge * k as f64 / 100.0)).collect::<Result<_>>()?;
    let case_ii = max_over(0..50, |k| Ok((fig3_ratio(edge + (0.999 - edge) * k as f64 / 49.0)? - 1.0).abs()))?;
    Ok(monotone_violation(&case_i, true).max(case_ii))
}

fn fig3_band() -> Result<f64> {
    let band = coherence_band(0.4, 0.5, 0.8)?;
    Ok((band.argmax.cos() + 0.8).abs())
}

fn teleport_total() -> Result<f64> {
    max_over(0..100, |k| {
        let rho = (FRAC_PI_4 * k as f64 / 99.0).min(FRAC_PI_4);
        Ok((total_success_probability(rho)? - (1.0 - (2.0 * rho).sin())).abs())
    })
}

fn teleport_input_independence() -> Result<f64> {
    max_over(0..10, |k| {
        let rho = 0.78 * k as f64 / 9.0;
        max_over(0..400, |j| {
            let inst = TeleportInstance::new(rho, PI * (j / 20) as f64 / 19.0, 6.28 * (j % 20) as f64 / 19.0)?;
            Ok((branch_weighted_success(&inst)? - (1.0 - inst.s())).abs())
        })
    })
}

fn teleport_fidelity() -> Result<f64> {
    let mut r = rng(15);
    max_over(0..100, |_| {
        let inst = random_teleport(&mut r);
        max_over(run_all(&inst)?, |run| {
            Ok(match (run.success, run.fidelity) {
                (true, Some(f)) if run.probability > 0.0 => 1.0 - f,
                _ => 0.0,
            })
        })
    })
}

fn teleport_ledgers() -> Result<f64> {
    let mut r = rng(16);
    max_over(0..50, |_| {
        let inst = random_teleport(&mut r);
        max_over(BOutcome::BOTH, |b| {
            let cf = branch_coherences(&inst, b)?;
            let l = branch_ledger(&inst, b)?;
            Ok((cf.c_total - l.bipartite(C)?)
                .abs()
                .max((cf.c_a_sc - l.bipartite(A)?).abs())
                .max((cf.c_genuine - l.c_genuine).abs()))
        })
    })
}

fn teleport_average() -> Result<f64> {
    Ok((square_mean_root(0.0, CoherenceKind::Total)? - PI * PI / 16.0).abs())
}

fn teleport_proportion() -> Result<f64> {
    // Tangle from 0 to 1, so the proportion should fall from 1 to 0.
    let xs: Vec<f64> =
        (0..50).map(|k| coherence_proportion((k as f64 / 49.0).sqrt().acos() / 2.0)).collect::<Result<_>>()?;
    Ok(monotone_violation(&xs, false).max((xs[0] - 1.0).abs()).max(xs[49].abs()))
}

fn quadrature_convergence() -> Result<f64> {
    let t = quadrature_refine(0.0, PI, &[32, 64, 128], |mu| smr_integrand(PI / 8.0, CoherenceKind::Total, mu))?;
    Ok(final_delta(&t).unwrap_or(f64::NAN))
}

fn berry_gamma() -> Result<f64> {
    let mut r = rng(17);
    max_over(0..100, |_| {
        let i = random_instance(&mut r);
        Ok(wrap_pi(bargmann_phase(&i)? - i.gamma).abs())
    })
}

fn berry_gauge() -> Result<f64> {
    let mut r = rng(18);
    max_over(0..100, |_| {
        let i = random_instance(&mut r);
        let st = loop_states(&i, &Embedding::canonical(&i))?;
        let mut g = st.clone();
        for s in g.iter_mut() {
            *s = s.with_phase(rand::Rng::gen_range(&mut r, 0.0..6.28));
        }
        Ok(wrap_pi(loop_phase(&g)? - loop_phase(&st)?).abs())
    })
}

fn berry_teleport() -> Result<f64> {
    let mut r = rng(19);
    max_over(0..50, |_| {
        let inst = random_teleport(&mut r);
        max_over(BOutcome::BOTH, |b| {
            let g = bargmann_phase(&branch_instance(&inst, b)?)?;
            Ok(g.abs().min((g - PI).abs()))
        })
    })
}

pub fn battery() -> Vec<Check> {
    macro_rules! check {
        ($name:literal, $tol:expr, $f:ident) => {
            Check { name: $name, tolerance: $tol, run: $f }
        };
    }
    vec![
        check!("optimal.spot_case_i", 1e-12, spot_case_i),
        check!("optimal.spot_case_ii", 1e-12, spot_case_ii),
        check!("optimal.grid_oracle", 1e-6, grid_success),
        check!("optimal.protocol_born", 1e-10, protocol_success),
        check!("optimal.eta_independence", 1e-10, eta_independence),
        check!("separability.wootters", 1e-10, separable_rho),
        check!("separability.grid_argmin", 2e-2, separating_argmin),
        check!("separability.decomposition", 1e-10, decomposition),
        check!("conservation.tangle", 1e-10, conservation),
        check!("closed_forms.ledger", 1e-9, closed_forms),
        check!("monogamy.sums", 1e-9, monogamy_sums),
        check!("monogamy.three_tangle", 1e-9, genuine_is_three_tangle),
        check!("monogamy.nonnegative", 1e-10, genuine_nonnegative),
        check!("monogamy.lu_invariance", 1e-9, ledger_lu_invariance),
        check!("qcore.partial_trace", 1e-10, partial_traces),
        check!("qcore.measurement", 1e-12, measurement_sums),
        check!("qcore.unitarity", 1e-10, unitarity),
        check!("fig2.decreasing_gamma_0", 1e-12, fig2_decreasing),
        check!("fig2.increasing_gamma_pi", 1e-6, fig2_increasing),
        check!("fig3.transfer_monotone", 1e-10, fig3_monotone),
        check!("fig3.band_argmax", 1e-3, fig3_band),
        check!("teleport.total_success", 1e-12, teleport_total),
        check!("teleport.input_independence", 1e-12, teleport_input_independence),
        check!("teleport.fidelity", 1e-10, teleport_fidelity),
        check!("teleport.branch_ledgers", 1e-9, teleport_ledgers),
        check!("teleport.average_perfect_channel", 1e-8, teleport_average),
        check!("teleport.proportion", 1e-12, teleport_proportion),
        check!("quadrature.convergence", 1e-9, quadrature_convergence),
        check!("berry.gamma", 1e-10, berry_gamma),
        check!("berry.gauge", 1e-10, berry_gauge),
        check!("berry.teleport_branches", 1e-10, berry_teleport),
    ]
}

/// Runs the checks whose names contain any of `only` (all when empty).
pub fn run_battery(tolerance: Option<f64>, only: &[String]) -> Vec<CheckResult> {
    let picked: Vec<Check> =
        battery().into_iter().filter(|c| only.is_empty() || only.iter().any(|f| c.name.contains(f.as_str()))).collect();
    picked
        .into_par_iter()
        .map(|c| {
            let tol = tolerance.unwrap_or(c.tolerance);
            match (c.run)() {
                Ok(residual) => CheckResult { name: c.name, residual, tolerance: tol, error: None },
                Err(e) => CheckResult { name: c.name, residual: f64::NAN, tolerance: tol, error: Some(e.to_string()) },
            }
        })
        .collect()
}

pub fn report(results: &[CheckResult], tolerance: Option<f64>, only: &[String]) -> Table {
    let failed = results.iter().filter(|r| !r.passed()).count();
    let mut t = Table::new("selftest", &["check", "residual", "tolerance", "passed", "error"])
        .meta("tolerance_override", Cell::from(tolerance))
        .meta("only", only.join(","))
        .meta("checks", results.len())
        .meta("failed", failed);
    for r in results {
        t.push(vec![
            r.name.into(),
            r.residual.into(),
            r.tolerance.into(),
            r.passed().into(),
            r.error.clone().map_or(Cell::Empty, Cell::Text),
        ]);
    }
    t
}
