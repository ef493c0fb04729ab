use std::f64::consts::{FRAC_PI_2, PI};

use rand::distributions::{Distribution, WeightedIndex};
use rayon::prelude::*;
use ussd_core::coherence::{closed_form_coherences, coherence_band, ledger};
use ussd_core::qcore::QubitLabel::{A, C, S};
use ussd_core::teleport::{
    branch_to_ussd, fig4_row, run_all, total_success_probability, AliceOutcome, BOutcome, TeleportInstance, TeleportRun,
};
use ussd_core::ussd::{
    bargmann_phase, make_instance, optimal_strategy, p_suc_max, polar, run_protocol, separability_params, UssdInstance,
    UssdStrategy,
};

use crate::config::{EvalArgs, Fig2Args, Fig3Args, Fig4Args, TeleportArgs};
use crate::error::LabError;
use crate::sample::rng;
use crate::table::{Cell, Table};

/// Open sweep endpoints stop this far short of 1.
pub const OPEN_EDGE: f64 = 1e-9;

/// `steps` points from `start` to `stop` inclusive.
pub fn sweep(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>, LabError> {
    if steps < 2 {
        return Err(LabError::invalid("steps", format!("{steps} (need at least 2)")));
    }
    let h = (stop - start) / (steps - 1) as f64;
    Ok((0..steps).map(|k| if k + 1 == steps { stop } else { start + h * k as f64 }).collect())
}

/// Inclusive sweep over `[0, 1]` whose final point is pulled in to `1 - OPEN_EDGE`.
pub fn open_unit_sweep(steps: usize) -> Result<Vec<f64>, LabError> {
    Ok(sweep(0.0, 1.0, steps)?.into_iter().map(|x| x.min(1.0 - OPEN_EDGE)).collect())
}

/// Attaches the offending field to a core validation error.
pub fn input_error(e: ussd_core::Error) -> LabError {
    let field = match &e {
        ussd_core::Error::RangeError { name, .. } => name,
        ussd_core::Error::DegenerateOverlap(_) => "alpha",
        _ => return LabError::Core(e),
    };
    let kind = format!("{e:?}");
    let kind = kind.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_owned();
    LabError::invalid(field, format!("{kind}: {e}"))
}

fn separating(inst: &UssdInstance) -> Result<UssdStrategy, ussd_core::Error> {
    let s = optimal_strategy(inst);
    separability_params(inst, &s).install(&s)
}

fn optional(x: Result<f64, ussd_core::Error>) -> Cell {
    x.map_or(Cell::Empty, Cell::Num)
}

pub fn cmd_eval(a: &EvalArgs) -> Result<Table, LabError> {
    let inst = make_instance(a.p_plus, polar(a.alpha, a.alpha_phase), polar(a.alpha_c, a.alpha_c_phase))
        .map_err(input_error)?;
    let opt = optimal_strategy(&inst);
    let sep = separability_params(&inst, &opt);
    let strat = match (a.beta, a.delta) {
        (Some(b), Some(d)) => opt.with_eta(b, d).map_err(input_error)?,
        _ => sep.install(&opt)?,
    };
    let run = run_protocol(&inst, &strat)?;
    let l = ledger(&run.gamma)?;
    let cf = closed_form_coherences(&inst, &strat);

    let mut t = Table::new("eval", &["quantity", "closed_form", "numeric", "deviation"])
        .meta("p_plus", a.p_plus)
        .meta("alpha", a.alpha)
        .meta("alpha_phase", a.alpha_phase)
        .meta("alpha_c", a.alpha_c)
        .meta("alpha_c_phase", a.alpha_c_phase)
        .meta("beta", Cell::from(a.beta))
        .meta("delta", Cell::from(a.delta))
        .meta("labels_swapped", inst.swapped);
    let mut worst: f64 = 0.0;
    let mut pair = |t: &mut Table, name: &str, closed: f64, numeric: f64| {
        let d = (closed - numeric).abs();
        worst = worst.max(d);
        t.push(vec![name.into(), closed.into(), numeric.into(), d.into()]);
    };
    let single = |t: &mut Table, name: &str, value: Cell| t.push(vec![name.into(), value, Cell::Empty, Cell::Empty]);

    single(&mut t, "r_plus", inst.r_plus.into());
    single(&mut t, "r_minus", inst.r_minus.into());
    single(&mut t, "gamma", inst.gamma.into());
    single(&mut t, "tilde_alpha", inst.tilde_alpha.into());
    single(&mut t, "case", inst.case().label().into());
    single(&mut t, "abs_alpha_plus", strat.alpha_plus.norm().into());
    single(&mut t, "abs_alpha_minus", strat.alpha_minus.norm().into());
    pair(&mut t, "p_suc_max", p_suc_max(&inst), run.success_probability());
    single(&mut t, "beta_star", sep.beta_star.into());
    single(&mut t, "delta_star", sep.delta_star.into());
    single(&mut t, "beta", strat.beta.into());
    single(&mut t, "delta", strat.delta.into());
    match bargmann_phase(&inst) {
        Ok(g) => pair(&mut t, "berry_phase", inst.gamma, g),
        Err(_) => single(&mut t, "berry_phase", Cell::Empty),
    }
    pair(&mut t, "c_i", cf.c_total, l.bipartite(C)?);
    pair(&mut t, "c_a_sc", cf.c_a_sc, l.bipartite(A)?);
    pair(&mut t, "c_s_c", cf.c_s_c(), l.pairwise(S, C)?);
    pair(&mut t, "c_c_a", cf.c_c_a(), l.pairwise(C, A)?);
    pair(&mut t, "c_s_ca", cf.c_s_ca(), l.bipartite(S)?);
    pair(&mut t, "c_g", cf.c_genuine, l.c_genuine);
    t.push(vec!["c_a_s".into(), Cell::Empty, l.pairwise(A, S)?.into(), Cell::Empty]);
    t.push(vec!["max_deviation".into(), Cell::Empty, Cell::Empty, worst.into()]);
    Ok(t)
}

/// Berry phases of the three curves.
pub const FIG2_GAMMAS: [(&str, f64); 3] = [("0", 0.0), ("half_pi", FRAC_PI_2), ("pi", PI)];

pub fn cmd_fig2(a: &Fig2Args) -> Result<Table, LabError> {
    make_instance(a.p_plus, polar(a.alpha, 0.0), polar(0.0, 0.0)).map_err(input_error)?;
    let xs = open_unit_sweep(a.steps)?;
    let mut cols = vec!["abs_alpha_c".to_owned()];
    for prefix in ["c_i", "p_suc"] {
        for (name, _) in FIG2_GAMMAS {
            cols.push(format!("{prefix}_gamma_{name}"));
        }
    }
    let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = Table::new("fig2", &cols)
        .meta("p_plus", a.p_plus)
        .meta("alpha", a.alpha)
        .meta("steps", a.steps)
        .meta("abs_alpha_c_max", 1.0 - OPEN_EDGE);
    let rows: Result<Vec<Vec<Cell>>, ussd_core::Error> = xs
        .par_iter()
        .map(|&ac| {
            let mut ci = Vec::new();
            let mut ps = Vec::new();
            for (_, g) in FIG2_GAMMAS {
                let inst = make_instance(a.p_plus, polar(a.alpha, 0.0), polar(ac, g))?;
                ci.push(closed_form_coherences(&inst, &optimal_strategy(&inst)).c_total);
                ps.push(p_suc_max(&inst));
            }
            Ok(std::iter::once(ac).chain(ci).chain(ps).map(Cell::Num).collect())
        })
        .collect();
    for r in rows? {
        t.push(r);
    }
    Ok(t)
}

pub const FIG3_COLUMNS: [&str; 14] = [
    "abs_alpha",
    "case",
    "c_i",
    "c_s_ca",
    "c_s_c",
    "c_a_sc",
    "c_c_a",
    "c_g",
    "prop_a_sc",
    "prop_s_c",
    "band_c_a_min",
    "band_c_a_max",
    "band_s_ca_min",
    "band_s_ca_max",
];

pub fn cmd_fig3(a: &Fig3Args) -> Result<Table, LabError> {
    let probe = make_instance(a.p_plus, polar(0.0, 0.0), polar(a.alpha_c, a.gamma)).map_err(input_error)?;
    let xs = open_unit_sweep(a.steps)?;
    let mut t = Table::new("fig3", &FIG3_COLUMNS)
        .meta("p_plus", a.p_plus)
        .meta("alpha_c", a.alpha_c)
        .meta("gamma", a.gamma)
        .meta("steps", a.steps)
        .meta("tilde_alpha", probe.tilde_alpha)
        .meta("abs_alpha_max", 1.0 - OPEN_EDGE);
    let rows: Result<Vec<Vec<Cell>>, ussd_core::Error> = xs
        .par_iter()
        .map(|&x| {
            let inst = make_instance(a.p_plus, polar(x, 0.0), polar(a.alpha_c, a.gamma))?;
            let cf = closed_form_coherences(&inst, &separating(&inst)?);
            let band = coherence_band(a.p_plus, x, a.alpha_c)?;
            let ci = cf.c_total;
            Ok(vec![
                x.into(),
                inst.case().label().into(),
                ci.into(),
                cf.c_s_ca().into(),
                cf.c_s_c().into(),
                cf.c_a_sc.into(),
                cf.c_c_a().into(),
                cf.c_genuine.into(),
                (cf.c_a_sc / ci).into(),
                (cf.c_s_c() / ci).into(),
                band.transferred.0.into(),
                band.transferred.1.into(),
                band.retained.0.into(),
                band.retained.1.into(),
            ])
        })
        .collect();
    for r in rows? {
        t.push(r);
    }
    Ok(t)
}

pub fn cmd_fig4(a: &Fig4Args) -> Result<Table, LabError> {
    if a.nodes == 0 {
        return Err(LabError::invalid("nodes", "must be positive"));
    }
    let xs = sweep(0.0, 1.0, a.steps)?;
    let mut t = Table::new("fig4", &["tangle", "channel_angle", "c_i", "c_s_c", "c_a_sc", "proportion"])
        .meta("steps", a.steps)
        .meta("nodes", a.nodes);
    let rows: Result<Vec<_>, _> = xs.par_iter().map(|&x| fig4_row(x, a.nodes)).collect();
    for r in rows? {
        t.push(vec![
            r.tangle.into(),
            r.channel_angle.into(),
            r.c_total.into(),
            r.c_s_c.into(),
            r.c_a_sc.into(),
            r.proportion.into(),
        ]);
    }
    Ok(t)
}

fn alice_name(a: AliceOutcome) -> &'static str {
    match a {
        AliceOutcome::Conclusive(0) => "0",
        AliceOutcome::Conclusive(_) => "1",
        AliceOutcome::Inconclusive => "?",
    }
}

fn teleport_meta(t: Table, a: &TeleportArgs, inst: &TeleportInstance, runs: &[TeleportRun]) -> Result<Table, LabError> {
    let total: f64 = runs.iter().filter(|r| r.success).map(|r| r.probability).sum();
    let expected = 1.0 - inst.s();
    Ok(t.meta("rho", a.rho)
        .meta("mu", a.mu)
        .meta("nu", a.nu)
        .meta("tangle", (2.0 * a.rho).cos().powi(2))
        .meta("total_success", total)
        .meta("channel_success", total_success_probability(a.rho)?)
        .meta("expected_success", expected)
        .meta("deviation", (total - expected).abs()))
}

pub fn cmd_teleport(a: &TeleportArgs) -> Result<Table, LabError> {
    let inst = TeleportInstance::new(a.rho, a.mu, a.nu).map_err(input_error)?;
    let runs = run_all(&inst)?;
    match a.sample {
        Some(n) => teleport_sampled(a, &inst, &runs, n),
        None => teleport_enumerated(a, &inst, &runs),
    }
}

fn teleport_enumerated(a: &TeleportArgs, inst: &TeleportInstance, runs: &[TeleportRun]) -> Result<Table, LabError> {
    let mut t = Table::new(
        "teleport",
        &[
            "b",
            "p_b",
            "alice",
            "probability",
            "success",
            "correction",
            "fidelity",
            "branch_alpha",
            "branch_alpha_c",
            "branch_p_suc",
            "beta_star",
            "delta_star",
            "berry_phase",
        ],
    );
    for b in BOutcome::BOTH {
        let rec = branch_to_ussd(inst, b)?;
        let (alpha, alpha_c, beta, delta, berry) = match &rec.instance {
            Some(bi) => {
                let sep = separability_params(bi, &optimal_strategy(bi));
                (
                    Cell::Num(bi.alpha.re),
                    Cell::Num(bi.alpha_c.re),
                    Cell::Num(sep.beta_star),
                    Cell::Num(sep.delta_star),
                    optional(bargmann_phase(bi)),
                )
            }
            None => (Cell::Num(b.sign()), Cell::Num(inst.mu.cos()), Cell::Empty, Cell::Empty, Cell::Empty),
        };
        for r in runs.iter().filter(|r| r.b == b) {
            t.push(vec![
                b.symbol().to_string().into(),
                rec.probability.into(),
                alice_name(r.alice).into(),
                r.probability.into(),
                r.success.into(),
                r.correction.map_or(Cell::Empty, |k| k.name().into()),
                r.fidelity.into(),
                alpha.clone(),
                alpha_c.clone(),
                rec.branch_success.into(),
                beta.clone(),
                delta.clone(),
                berry.clone(),
            ]);
        }
    }
    teleport_meta(t, a, inst, runs)
}

fn teleport_sampled(
    a: &TeleportArgs,
    inst: &TeleportInstance,
    runs: &[TeleportRun],
    n: u64,
) -> Result<Table, LabError> {
    if n == 0 {
        return Err(LabError::invalid("sample", "must be positive"));
    }
    let weights: Vec<f64> = runs.iter().map(|r| r.probability.max(0.0)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| LabError::invalid("sample", e.to_string()))?;
    let mut r = rng(a.seed);
    let mut counts = vec![0u64; runs.len()];
    for _ in 0..n {
        counts[dist.sample(&mut r)] += 1;
    }
    let mut t = Table::new("teleport", &["b", "alice", "probability", "count", "frequency", "success"]);
    for (run, &c) in runs.iter().zip(&counts) {
        t.push(vec![
            run.b.symbol().to_string().into(),
            alice_name(run.alice).into(),
            run.probability.into(),
            c.into(),
            (c as f64 / n as f64).into(),
            run.success.into(),
        ]);
    }
    let hits: u64 = runs.iter().zip(&counts).filter(|(r, _)| r.success).map(|(_, c)| *c).sum();
    let p = runs.iter().filter(|r| r.success).map(|r| r.probability).sum::<f64>();
    let empirical = hits as f64 / n as f64;
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    let t = t
        .meta("samples", n)
        .meta("seed", a.seed)
        .meta("empirical_success", empirical)
        .meta("binomial_sigma", sigma)
        .meta("z_score", if sigma > 0.0 { (empirical - p) / sigma } else { 0.0 });
    teleport_meta(t, a, inst, runs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(p: f64, a: f64, ac: f64) -> Table {
        cmd_eval(&EvalArgs {
            p_plus: p,
            alpha: a,
            alpha_phase: 0.0,
            alpha_c: ac,
            alpha_c_phase: 0.0,
            beta: None,
            delta: None,
        })
        .unwrap()
    }

    fn row<'a>(t: &'a Table, name: &str) -> &'a [Cell] {
        t.rows.iter().find(|r| r[0] == Cell::from(name)).unwrap()
    }

    #[test]
    fn sweep_endpoints() {
        let xs = sweep(0.0, 1.0, 5).unwrap();
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(sweep(0.0, 1.0, 1).is_err());
        let xs = open_unit_sweep(3).unwrap();
        assert_eq!(xs, vec![0.0, 0.5, 1.0 - OPEN_EDGE]);
    }

    #[test]
    fn eval_spot_values() {
        let t = eval(0.2, 0.4, 0.0);
        assert_eq!(row(&t, "case")[1], Cell::from("i"));
        let Cell::Num(p) = row(&t, "p_suc_max")[1] else { panic!() };
        assert!((p - 0.68).abs() < 1e-12);
        let Cell::Num(d) = row(&t, "max_deviation")[3] else { panic!() };
        assert!(d < 1e-9);
        let t = eval(0.4, 0.9, 0.0);
        assert_eq!(row(&t, "case")[1], Cell::from("ii"));
        let Cell::Num(p) = row(&t, "p_suc_max")[1] else { panic!() };
        assert!((p - 0.114).abs() < 1e-12);
    }

    #[test]
    fn eval_rejects_degenerate_overlap() {
        let e = cmd_eval(&EvalArgs {
            p_plus: 0.3,
            alpha: 1.0,
            alpha_phase: 0.0,
            alpha_c: 0.2,
            alpha_c_phase: 0.0,
            beta: None,
            delta: None,
        })
        .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("`alpha`") && msg.contains("DegenerateOverlap"), "{msg}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn fig2_first_and_last_rows() {
        let t = cmd_fig2(&Fig2Args { p_plus: 0.2, alpha: 0.4, steps: 11 }).unwrap();
        for k in 1..7 {
            let Cell::Num(x) = t.rows[0][k] else { panic!() };
            let want = if k < 4 { 0.5376 } else { 0.68 };
            assert!((x - want).abs() < 1e-12);
        }
        for k in 1..4 {
            let Cell::Num(x) = t.rows[10][k] else { panic!() };
            assert!(x.abs() < 1e-8);
        }
    }

    #[test]
    fn teleport_transcript() {
        let a = TeleportArgs { rho: 0.0, mu: 1.0, nu: 0.5, sample: None, seed: 0 };
        let t = cmd_teleport(&a).unwrap();
        assert_eq!(t.rows.len(), 6);
        let total = t.meta.iter().find(|(k, _)| k == "total_success").unwrap();
        let Cell::Num(x) = total.1 else { panic!() };
        assert!((x - 1.0).abs() < 1e-12);
        let a = TeleportArgs { rho: 1.0, mu: 1.0, nu: 0.5, sample: None, seed: 0 };
        assert_eq!(cmd_teleport(&a).unwrap_err().exit_code(), 2);
    }
}
