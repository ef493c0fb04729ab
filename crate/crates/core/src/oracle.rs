//! Brute-force verifiers. Nothing here calls the closed forms it checks:
//! amplitudes, states and reduced matrices are rebuilt from scratch and only
//! `qcore`, `coherence` and `quadrature` primitives are used.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::coherence::wootters_concurrence;
use crate::linalg::CMatrix;
use crate::qcore::{DensityMatrix, QubitLabel};
use crate::quadrature::GaussLegendre;
use crate::ussd::{SeparabilityParams, UssdInstance, UssdStrategy};
use crate::{Error, Result};

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// One axis of a search grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lower: f64,
    pub upper: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(lower: f64, upper: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::RangeError { name: "grid points", value: points as f64 });
        }
        if !(lower <= upper) {
            return Err(Error::RangeError { name: "grid bounds", value: upper - lower });
        }
        Ok(Axis { lower, upper, points })
    }

    pub fn step(&self) -> f64 {
        (self.upper - self.lower) / (self.points - 1) as f64
    }

    pub fn at(&self, k: usize) -> f64 {
        if k + 1 == self.points {
            self.upper
        } else {
            self.lower + self.step() * k as f64
        }
    }
}

/// Grid axes plus the number of local refinement rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub axes: Vec<Axis>,
    pub refinement_depth: usize,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>, refinement_depth: usize) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::ShapeError("grid needs at least one axis"));
        }
        Ok(GridSpec { axes, refinement_depth })
    }

    /// Default grid for the one-dimensional success search. The bounds are
    /// replaced by the feasible interval of the instance.
    pub fn success_default() -> Self {
        GridSpec { axes: alloc::vec![Axis { lower: 0.0, upper: 1.0, points: 2001 }], refinement_depth: 2 }
    }

    /// Default `(beta, delta)` grid.
    pub fn eta_default() -> Self {
        GridSpec {
            axes: alloc::vec![
                Axis { lower: 0.0, upper: FRAC_PI_2, points: 91 },
                Axis { lower: 0.0, upper: TAU, points: 181 },
            ],
            refinement_depth: 60,
        }
    }
}

/// Golden-section maximization on `[lo, hi]`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = (lo + hi) / 2.0;
    (x, f(x))
}

/// Success probability evaluated term by term:
/// `r+ (1 - |alpha+|^2) + r- (1 - |alpha-|^2)` with `|alpha-| = |alpha| / |alpha+|`.
fn success_at(inst: &UssdInstance, a_plus: f64) -> f64 {
    let a = inst.alpha.norm();
    let a_minus = if a_plus > 0.0 {
        a / a_plus
    } else if a == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    if a_minus > 1.0 {
        return f64::NEG_INFINITY;
    }
    inst.r_plus * (1.0 - a_plus * a_plus) + inst.r_minus * (1.0 - a_minus * a_minus)
}

/// Exhaustive search for the best `|alpha+|` on `[|alpha|, 1]`, followed by
/// golden-section refinement around the best cell. Returns `(|alpha+|, P)`.
pub fn grid_optimize_success(inst: &UssdInstance, grid: &GridSpec) -> (f64, f64) {
    let lo = inst.alpha.norm();
    let points = grid.axes[0].points.max(2);
    let axis = Axis { lower: lo, upper: 1.0, points };
    let f = |x: f64| success_at(inst, x);

    let mut best = (axis.at(0), f(axis.at(0)));
    for k in 1..points {
        let x = axis.at(k);
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let mut half = axis.step();
    for _ in 0..grid.refinement_depth {
        let (a, b) = ((best.0 - half).max(lo), (best.0 + half).min(1.0));
        let cand = golden_section_max(f, a, b, 1e-13);
        if cand.1 >= best.1 {
            best = cand;
        }
        half /= 16.0;
    }
    // The optimum may sit on the boundary, which golden search never samples.
    for x in [lo, 1.0] {
        let v = f(x);
        if v >= best.1 {
            best = (x, v);
        }
    }
    best
}

/// Post-unitary states of the system and ancilla for one strategy, over `(S, A)`:
/// `sqrt(1-|a+|^2)|00> + a+ |eta>|1>` and `sqrt(1-|a-|^2)|10> + a- |eta>|1>`.
fn post_unitary_pair(a_plus: Complex64, a_minus: Complex64, beta: f64, delta: f64) -> ([Complex64; 4], [Complex64; 4]) {
    let eta = [Complex64::new(beta.cos(), 0.0), Complex64::from_polar(beta.sin(), delta)];
    let mut zp = [Complex64::new(0.0, 0.0); 4];
    let mut zm = zp;
    // Index = 2*s + a.
    zp[0] = Complex64::new((1.0 - a_plus.norm_sqr()).max(0.0).sqrt(), 0.0);
    zm[2] = Complex64::new((1.0 - a_minus.norm_sqr()).max(0.0).sqrt(), 0.0);
    for s in 0..2 {
        zp[2 * s + 1] += a_plus * eta[s];
        zm[2 * s + 1] += a_minus * eta[s];
    }
    (zp, zm)
}

/// `r+ |z+><z+| + r- |z-><z-| + sqrt(r+ r-) (alpha_c |z+><z-| + h.c.)`, built
/// element by element.
fn assemble_rho(inst: &UssdInstance, zp: &[Complex64; 4], zm: &[Complex64; 4]) -> CMatrix {
    let k = (inst.r_plus * inst.r_minus).sqrt();
    let mut data = alloc::vec![Complex64::new(0.0, 0.0); 16];
    for i in 0..4 {
        for j in 0..4 {
            data[4 * i + j] = zp[i] * zp[j].conj() * inst.r_plus
                + zm[i] * zm[j].conj() * inst.r_minus
                + (inst.alpha_c * zp[i] * zm[j].conj() + inst.alpha_c.conj() * zm[i] * zp[j].conj()) * k;
        }
    }
    CMatrix::from_rows(data)
}

/// Reduced state of system and ancilla after the joint unitary, assembled
/// directly from the strategy amplitudes.
pub fn rho_sa(inst: &UssdInstance, strat: &UssdStrategy) -> Result<DensityMatrix> {
    let (zp, zm) = post_unitary_pair(strat.alpha_plus, strat.alpha_minus, strat.beta, strat.delta);
    DensityMatrix::new(&[QubitLabel::S, QubitLabel::A], assemble_rho(inst, &zp, &zm))
}

fn concurrence_at(inst: &UssdInstance, strat: &UssdStrategy, beta: f64, delta: f64) -> f64 {
    let (zp, zm) = post_unitary_pair(strat.alpha_plus, strat.alpha_minus, beta, delta);
    let m = assemble_rho(inst, &zp, &zm);
    DensityMatrix::new(&[QubitLabel::S, QubitLabel::A], m)
        .and_then(|rho| wootters_concurrence(&rho))
        .unwrap_or(f64::INFINITY)
}

/// Result of the `(beta, delta)` search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceMin {
    pub beta: f64,
    pub delta: f64,
    pub concurrence: f64,
}

/// Minimizes the Wootters concurrence of the assembled `rho_SA` over the
/// failure-state angles, keeping the strategy's `|alpha±|`. A coarse grid is
/// followed by coordinate golden-section sweeps with shrinking windows.
pub fn grid_min_concurrence(inst: &UssdInstance, strat: &UssdStrategy, grid: &GridSpec) -> Result<ConcurrenceMin> {
    if grid.axes.len() != 2 {
        return Err(Error::ShapeError("eta grid needs two axes"));
    }
    let (ab, ad) = (grid.axes[0], grid.axes[1]);
    let f = |b: f64, d: f64| concurrence_at(inst, strat, b, d);

    let mut best = ConcurrenceMin { beta: ab.at(0), delta: ad.at(0), concurrence: f64::INFINITY };
    for i in 0..ab.points {
        for j in 0..ad.points {
            let (b, d) = (ab.at(i), ad.at(j));
            let c = f(b, d);
            if c < best.concurrence {
                best = ConcurrenceMin { beta: b, delta: d, concurrence: c };
            }
        }
    }

    let (mut hb, mut hd) = (ab.step(), ad.step());
    for _ in 0..grid.refinement_depth {
        let (lo, hi) = ((best.beta - hb).max(ab.lower), (best.beta + hb).min(ab.upper));
        let (b, v) = golden_section_max(|x| -f(x, best.delta), lo, hi, 1e-14);
        if -v <= best.concurrence {
            best.beta = b;
            best.concurrence = -v;
        }
        let (d, v) = golden_section_max(|y| -f(best.beta, y), best.delta - hd, best.delta + hd, 1e-14);
        if -v <= best.concurrence {
            best.delta = d.rem_euclid(TAU);
            best.concurrence = -v;
        }
        hb *= 0.7;
        hd *= 0.7;
    }
    Ok(best)
}

/// Residuals of the two-term decomposition of `rho_SA`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionResidual {
    /// Largest elementwise deviation of `|z1><z1| + |z2><z2|` from `rho_SA`.
    pub matrix: f64,
    /// `q1+^2 + q2+^2 - r+`.
    pub plus: f64,
    /// `q1-^2 + q2-^2 - r-`.
    pub minus: f64,
    /// Cross constraint against `sqrt(r+ r-) alpha_c*`.
    pub cross: f64,
}

impl DecompositionResidual {
    pub fn max(&self) -> f64 {
        self.matrix.max(self.plus).max(self.minus).max(self.cross)
    }
}

/// Rebuilds both decomposition components from their coefficients and
/// compares their sum of projectors with `rho`.
pub fn decomposition_check(
    rho: &DensityMatrix,
    inst: &UssdInstance,
    strat: &UssdStrategy,
    params: &SeparabilityParams,
) -> DecompositionResidual {
    let (zp, zm) = post_unitary_pair(strat.alpha_plus, strat.alpha_minus, strat.beta, strat.delta);
    let comps = [params.zeta1, params.zeta2];
    let vecs: Vec<[Complex64; 4]> = comps
        .iter()
        .map(|z| {
            let w = Complex64::from_polar(z.q_minus, z.gamma);
            core::array::from_fn(|k| zp[k] * z.q_plus + zm[k] * w)
        })
        .collect();
    let sum = vecs.iter().fold(CMatrix::zeros(4), |acc, v| acc.add(&CMatrix::outer(v, v)));
    let matrix = sum.max_abs_diff(rho.matrix());

    let [z1, z2] = comps;
    let plus = (z1.q_plus.powi(2) + z2.q_plus.powi(2) - inst.r_plus).abs();
    let minus = (z1.q_minus.powi(2) + z2.q_minus.powi(2) - inst.r_minus).abs();
    let cross = (Complex64::from_polar(z1.q_plus * z1.q_minus, z1.gamma)
        + Complex64::from_polar(z2.q_plus * z2.q_minus, z2.gamma)
        - inst.alpha_c.conj() * (inst.r_plus * inst.r_minus).sqrt())
    .norm();
    DecompositionResidual { matrix, plus, minus, cross }
}

/// One row of a quadrature convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub value: f64,
    /// Change from the previous row; `None` for the first.
    pub delta: Option<f64>,
}

/// Integrates `f` on `[a, b]` at each node count.
pub fn quadrature_refine(
    a: f64,
    b: f64,
    nodes: &[usize],
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<Vec<ConvergenceRow>> {
    let mut out: Vec<ConvergenceRow> = Vec::with_capacity(nodes.len());
    for &n in nodes {
        let value = GaussLegendre::new(n)?.try_integrate(a, b, &mut f)?;
        let delta = out.last().map(|r| (value - r.value).abs());
        out.push(ConvergenceRow { nodes: n, value, delta });
    }
    Ok(out)
}

/// Last successive difference of a table.
pub fn final_delta(table: &[ConvergenceRow]) -> Option<f64> {
    table.last().and_then(|r| r.delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::QubitLabel::{A, S};
    use crate::teleport::{branch_instance, smr_integrand, BOutcome, CoherenceKind, TeleportInstance};
    use crate::testutil::rng;
    use crate::ussd::{make_instance, optimal_strategy, p_suc_max, polar, run_protocol, separability_params, wrap_pi};
    use core::f64::consts::{FRAC_PI_4, PI};
    use rand::Rng;

    #[test]
    fn axis_validation() {
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(1.0, 0.0, 5).is_err());
        let a = Axis::new(0.0, 1.0, 5).unwrap();
        assert_eq!(a.at(4), 1.0);
        assert!((a.step() - 0.25).abs() < 1e-15);
        assert!(GridSpec::new(Vec::new(), 1).is_err());
    }

    #[test]
    fn success_spot_values() {
        let g = GridSpec::success_default();
        let i = make_instance(0.2, polar(0.4, 0.0), polar(0.0, 0.0)).unwrap();
        let (a, p) = grid_optimize_success(&i, &g);
        assert!((p - 0.68).abs() < 1e-9);
        assert!((a - 0.8f64.sqrt()).abs() < 1e-5);
        let i = make_instance(0.4, polar(0.9, 0.0), polar(0.0, 0.0)).unwrap();
        let (a, p) = grid_optimize_success(&i, &g);
        assert_eq!(a, 1.0);
        assert!((p - 0.114).abs() < 1e-9);
        let i = make_instance(0.3, polar(0.0, 0.0), polar(0.5, 0.2)).unwrap();
        let (a, p) = grid_optimize_success(&i, &g);
        assert_eq!(a, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn success_agrees_with_closed_form() {
        let mut r = rng(101);
        let g = GridSpec::success_default();
        for _ in 0..100 {
            let i = make_instance(
                r.gen_range(0.01..0.99),
                polar(r.gen_range(0.0..0.99), r.gen_range(-PI..PI)),
                polar(r.gen_range(0.0..1.0), r.gen_range(-PI..PI)),
            )
            .unwrap();
            assert!((grid_optimize_success(&i, &g).1 - p_suc_max(&i)).abs() < 1e-9);
        }
    }

    #[test]
    fn assembled_rho_matches_protocol() {
        let mut r = rng(103);
        for _ in 0..50 {
            let i = make_instance(
                r.gen_range(0.05..0.95),
                polar(r.gen_range(0.0..0.95), r.gen_range(-PI..PI)),
                polar(r.gen_range(0.0..1.0), r.gen_range(-PI..PI)),
            )
            .unwrap();
            let s = optimal_strategy(&i).with_eta(r.gen_range(0.0..FRAC_PI_2), r.gen_range(0.0..TAU)).unwrap();
            let run = run_protocol(&i, &s).unwrap();
            let sim = DensityMatrix::from_pure(&run.gamma).partial_trace(&[S, A]).unwrap();
            assert!(sim.matrix().max_abs_diff(rho_sa(&i, &s).unwrap().matrix()) < 1e-12);
        }
    }

    fn assert_argmin(i: &UssdInstance, tol: f64) {
        let s = optimal_strategy(i);
        let sep = separability_params(i, &s);
        let m = grid_min_concurrence(i, &s, &GridSpec::eta_default()).unwrap();
        assert!(m.concurrence < 1e-6, "{m:?}");
        assert!((m.beta - sep.beta_star).abs() < tol, "{m:?} vs {}", sep.beta_star);
        let (sb, cb) = (sep.beta_star.sin(), sep.beta_star.cos());
        if sb > 1e-6 && cb > 1e-6 {
            assert!(wrap_pi(m.delta - sep.delta_star).abs() < tol, "{m:?} vs {}", sep.delta_star);
        }
    }

    #[test]
    fn concurrence_minimum_locates_separating_angles() {
        assert_argmin(&make_instance(0.2, polar(0.4, 0.0), polar(0.0, 0.0)).unwrap(), 2e-2);
        let mut r = rng(107);
        for _ in 0..10 {
            let i = make_instance(
                r.gen_range(0.1..0.5),
                polar(r.gen_range(0.05..0.6), r.gen_range(-PI..PI)),
                polar(r.gen_range(0.0..0.9), r.gen_range(-PI..PI)),
            )
            .unwrap();
            assert_argmin(&i, 2e-2);
        }
    }

    #[test]
    fn teleport_branch_minimum_is_equal_superposition() {
        let t = TeleportInstance::new(PI / 8.0, 1.0, 0.0).unwrap();
        let i = branch_instance(&t, BOutcome::Plus).unwrap();
        let m = grid_min_concurrence(&i, &optimal_strategy(&i), &GridSpec::eta_default()).unwrap();
        assert!((m.beta - FRAC_PI_4).abs() < 2e-2 && m.concurrence < 1e-6);
    }

    #[test]
    fn ignore_plus_case_is_delta_free() {
        let i = make_instance(0.4, polar(0.9, 0.3), polar(0.5, 0.7)).unwrap();
        let s = optimal_strategy(&i);
        for d in [0.0, 1.0, 3.0, 5.5] {
            assert!(concurrence_at(&i, &s, FRAC_PI_2, d) < 1e-10);
        }
        let m = grid_min_concurrence(&i, &s, &GridSpec::eta_default()).unwrap();
        assert!((m.beta - FRAC_PI_2).abs() < 2e-2);
    }

    #[test]
    fn decomposition_residuals() {
        let mut r = rng(109);
        for k in 0..60 {
            let ac = if k % 3 == 0 { 0.0 } else { r.gen_range(0.0..1.0) };
            let i = make_instance(
                r.gen_range(0.05..0.95),
                polar(r.gen_range(0.0..0.95), r.gen_range(-PI..PI)),
                polar(ac, r.gen_range(-PI..PI)),
            )
            .unwrap();
            let s0 = optimal_strategy(&i);
            let sep = separability_params(&i, &s0);
            let s = sep.install(&s0).unwrap();
            let rho = rho_sa(&i, &s).unwrap();
            assert!(decomposition_check(&rho, &i, &s, &sep).max() < 1e-10);
            let mut bad = sep;
            bad.zeta2.gamma += 0.1;
            let dev = decomposition_check(&rho, &i, &s, &bad);
            if bad.zeta2.q_plus * bad.zeta2.q_minus > 0.1 {
                assert!(dev.max() > 1e-3, "{dev:?}");
            }
        }
    }

    #[test]
    fn decomposition_pure_states_are_separable() {
        let i = make_instance(0.3, polar(0.5, 0.4), polar(0.6, -1.2)).unwrap();
        let s0 = optimal_strategy(&i);
        let sep = separability_params(&i, &s0);
        let s = sep.install(&s0).unwrap();
        let rho = rho_sa(&i, &s).unwrap();
        assert!(wootters_concurrence(&rho).unwrap() < 1e-10);
    }

    #[test]
    fn quadrature_tables() {
        let t = quadrature_refine(0.0, PI, &[2, 5, 9], |_| Ok(3.0)).unwrap();
        assert!(t.iter().all(|r| (r.value - 3.0 * PI).abs() < 1e-12));
        assert!(t[0].delta.is_none());
        let t = quadrature_refine(0.0, PI, &[64], |x| Ok(x.sin().powi(2))).unwrap();
        assert!((t[0].value - FRAC_PI_2).abs() < 1e-12);
        let t = quadrature_refine(0.0, PI, &[64, 128], |mu| smr_integrand(PI / 8.0, CoherenceKind::Total, mu)).unwrap();
        assert!(final_delta(&t).unwrap() < 1e-10);
        let e = quadrature_refine(0.0, 1.0, &[8], |x| Ok(if x > 0.5 { f64::NAN } else { x }));
        assert!(matches!(e, Err(Error::NumericalError(_))));
    }
}
