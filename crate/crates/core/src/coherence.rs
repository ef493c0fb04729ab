//! Tangle-based coherence measures for one to three qubits.
//!
//! Pure splits use the Cauchy–Binet form `tangle = 4 det(rho_x)`, summed over
//! 2×2 minors of the amplitude matrix, which stays nonnegative and accurate
//! near zero. Mixed two-qubit states use the Wootters concurrence.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, CMatrix};
use crate::qcore::{DensityMatrix, PureState, QubitLabel};
use crate::ussd::{make_instance, optimal_strategy, separability_params, UssdInstance, UssdStrategy};
use crate::{Error, Result};

/// Eigenvalues of `rho` below this fraction of the trace are dropped before
/// forming the spin-flip matrix.
const SUPPORT_CUTOFF: f64 = 1e-13;

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)` of a two-qubit state.
///
/// The `l_i` are the singular values of `T_ij = v_i^T (Y ⊗ Y) v_j`, where
/// `rho = sum v_i v_i^dagger` is the eigen-decomposition with
/// `v_i = sqrt(p_i) e_i`. They coincide with the square roots of the
/// eigenvalues of `rho (Y⊗Y) rho* (Y⊗Y)`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.labels().len() != 2 {
        return Err(Error::ShapeError("concurrence needs a two-qubit state"));
    }
    let eig = rho.eigen();
    let trace = rho.trace();
    let support: Vec<Vec<Complex64>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > SUPPORT_CUTOFF * trace)
        .map(|(k, &p)| linalg::scale_vec(&eig.vector(k), Complex64::new(p.sqrt(), 0.0)))
        .collect();
    let k = support.len();
    if k == 0 {
        return Ok(0.0);
    }
    let flipped: Vec<[Complex64; 4]> = support.iter().map(|v| spin_flip(v)).collect();
    let mut t = CMatrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            t[(i, j)] = support[i].iter().zip(&flipped[j]).map(|(a, b)| a * b).sum();
        }
    }
    let h = &t.adjoint() * &t;
    let frame = linalg::hermitian_eigen(&h);
    let mut lambdas: Vec<f64> = (0..k).map(|j| linalg::norm(&t.mul_vec(&frame.vector(j)))).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let rest: f64 = lambdas[1..].iter().sum();
    Ok((lambdas[0] - rest).max(0.0))
}

/// `(Y ⊗ Y) v` with `Y ⊗ Y` the real antidiagonal `(-1, 1, 1, -1)`.
fn spin_flip(v: &[Complex64]) -> [Complex64; 4] {
    [-v[3], v[2], v[1], -v[0]]
}

/// `2 |psi_00 psi_11 - psi_01 psi_10|` for a possibly subnormalized
/// two-qubit vector; no normalization is applied.
pub fn amplitude_concurrence(psi: [Complex64; 4]) -> f64 {
    2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm()
}

/// Qubit order with the listed `part` first, then the rest.
fn split_order(psi: &PureState, part: &[QubitLabel]) -> Result<(Vec<QubitLabel>, usize)> {
    let n = psi.labels().len();
    if part.is_empty() || part.len() >= n {
        return Err(Error::PartitionError);
    }
    for &q in part {
        psi.register().position(q)?;
    }
    let mut order = part.to_vec();
    order.extend(psi.register().complement(part));
    if order.len() != n {
        return Err(Error::PartitionError);
    }
    Ok((order, part.len()))
}

/// Tangle `4 det(rho_x)` of a qubit-vs-rest split. For a two-qubit split
/// in a three-qubit state the single remaining qubit is used instead.
pub fn tangle(psi: &PureState, part: &[QubitLabel]) -> Result<f64> {
    let (order, k) = split_order(psi, part)?;
    let n = order.len();
    let (order, k) = match (k, n - k) {
        (1, _) => (order, 1),
        (_, 1) => {
            let mut rotated = order[k..].to_vec();
            rotated.extend_from_slice(&order[..k]);
            (rotated, 1)
        }
        _ => return Err(Error::PartitionError),
    };
    debug_assert_eq!(k, 1);
    let a = psi.permute(&order)?;
    let amps = a.amplitudes();
    let cols = amps.len() / 2;
    let (r0, r1) = amps.split_at(cols);
    let mut det = 0.0;
    for j in 0..cols {
        for l in (j + 1)..cols {
            det += (r0[j] * r1[l] - r0[l] * r1[j]).norm_sqr();
        }
    }
    Ok(4.0 * det)
}

/// Concurrence `sqrt(tangle)` of a pure bipartite split.
pub fn pure_concurrence(psi: &PureState, part: &[QubitLabel]) -> Result<f64> {
    Ok(tangle(psi, part)?.sqrt())
}

/// Squared Wootters concurrence of the two-qubit reduction onto `pair`.
pub fn pairwise_tangle(psi: &PureState, pair: [QubitLabel; 2]) -> Result<f64> {
    let rho = DensityMatrix::from_pure(psi).partial_trace(&pair)?;
    let c = wootters_concurrence(&rho)?;
    Ok(c * c)
}

/// Three-tangle from the Cayley hyperdeterminant, `4 |d1 - 2 d2 + 4 d3|`.
pub fn three_tangle(psi: &PureState) -> Result<f64> {
    if psi.labels().len() != 3 {
        return Err(Error::ShapeError("three-tangle needs a three-qubit state"));
    }
    let a = |i: usize| psi.amplitudes()[i];
    let (a0, a1, a2, a3, a4, a5, a6, a7) = (a(0), a(1), a(2), a(3), a(4), a(5), a(6), a(7));
    let d1 = a0 * a0 * a7 * a7 + a1 * a1 * a6 * a6 + a2 * a2 * a5 * a5 + a4 * a4 * a3 * a3;
    let d2 = a0 * a7 * a3 * a4
        + a0 * a7 * a5 * a2
        + a0 * a7 * a6 * a1
        + a3 * a4 * a5 * a2
        + a3 * a4 * a6 * a1
        + a5 * a2 * a6 * a1;
    let d3 = a0 * a6 * a5 * a3 + a7 * a1 * a2 * a4;
    Ok(4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm())
}

/// CKW residual `tau_{x:yz} - tau_{xy} - tau_{xz}` with `pivot` as `x`.
pub fn ckw_residual(psi: &PureState, pivot: QubitLabel) -> Result<f64> {
    if psi.labels().len() != 3 {
        return Err(Error::ShapeError("CKW residual needs a three-qubit state"));
    }
    let others = psi.register().complement(&[pivot]);
    if others.len() != 2 {
        return Err(Error::UnknownQubit(pivot));
    }
    let whole = tangle(psi, &[pivot])?;
    let p1 = pairwise_tangle(psi, [pivot, others[0]])?;
    let p2 = pairwise_tangle(psi, [pivot, others[1]])?;
    Ok(whole - p1 - p2)
}

/// Tangle bookkeeping of a three-qubit pure state.
///
/// Index `k` of `bipartite` is the split of qubit `labels[k]` against the
/// other two; index `k` of `pairwise` is the pair that excludes `labels[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceLedger {
    pub labels: [QubitLabel; 3],
    pub c_total: f64,
    pub c_bipartite: [f64; 3],
    pub c_pairwise: [f64; 3],
    pub c_genuine: f64,
}

impl CoherenceLedger {
    fn index(&self, q: QubitLabel) -> Result<usize> {
        self.labels.iter().position(|&l| l == q).ok_or(Error::UnknownQubit(q))
    }

    /// `C_{x:yz}`.
    pub fn bipartite(&self, x: QubitLabel) -> Result<f64> {
        Ok(self.c_bipartite[self.index(x)?])
    }

    /// `C_{x:y}`, symmetric in its arguments.
    pub fn pairwise(&self, x: QubitLabel, y: QubitLabel) -> Result<f64> {
        let (i, j) = (self.index(x)?, self.index(y)?);
        if i == j {
            return Err(Error::PartitionError);
        }
        Ok(self.c_pairwise[3 - i - j])
    }

    /// `C_{x:yz} + C_{y:z}` for each choice of `x`, in label order.
    pub fn decomposition_sums(&self) -> [f64; 3] {
        core::array::from_fn(|k| self.c_bipartite[k] + self.c_pairwise[k])
    }

    /// Largest pairwise gap between the three decomposition sums.
    pub fn decomposition_spread(&self) -> f64 {
        let s = self.decomposition_sums();
        let max = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }
}

/// Full ledger. `c_total` is the mean of the three decomposition sums, and
/// `c_genuine` is `c_total` minus all pairwise tangles.
pub fn ledger(psi: &PureState) -> Result<CoherenceLedger> {
    if psi.labels().len() != 3 {
        return Err(Error::ShapeError("ledger needs a three-qubit state"));
    }
    let l = psi.labels();
    let labels = [l[0], l[1], l[2]];
    let mut c_bipartite = [0.0; 3];
    let mut c_pairwise = [0.0; 3];
    for k in 0..3 {
        c_bipartite[k] = tangle(psi, &[labels[k]])?;
        let pair = [labels[(k + 1) % 3], labels[(k + 2) % 3]];
        c_pairwise[k] = pairwise_tangle(psi, pair)?;
    }
    let c_total = (0..3).map(|k| c_bipartite[k] + c_pairwise[k]).sum::<f64>() / 3.0;
    let c_genuine = c_total - c_pairwise.iter().sum::<f64>();
    Ok(CoherenceLedger { labels, c_total, c_bipartite, c_pairwise, c_genuine })
}

/// Closed-form tangles of the post-unitary state `|Gamma>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCoherences {
    /// `C_I = 4 r+ r- (1-|alpha_c|^2)(1-|alpha|^2)`.
    pub c_total: f64,
    /// `C_{A:SC} = 4 r+ r- (1-|alpha_c|^2)(|alpha+|^2 + |alpha-|^2 - 2|alpha|^2)`.
    pub c_a_sc: f64,
    /// `C_g = 4 r+ r- (1-|alpha_c|^2) |a+ alpha- sin b e^{i d} + a- alpha+ cos b|^2`.
    pub c_genuine: f64,
}

impl ClosedFormCoherences {
    /// `C_{S:C} = C_I - C_{A:SC}`.
    pub fn c_s_c(&self) -> f64 {
        self.c_total - self.c_a_sc
    }

    /// `C_{C:A} = C_{A:SC} - C_g`, valid when `C_{A:S} = 0`.
    pub fn c_c_a(&self) -> f64 {
        self.c_a_sc - self.c_genuine
    }

    /// `C_{S:CA} = C_I - C_{C:A}`, valid when `C_{A:S} = 0`.
    pub fn c_s_ca(&self) -> f64 {
        self.c_total - self.c_c_a()
    }
}

pub fn closed_form_coherences(inst: &UssdInstance, strat: &UssdStrategy) -> ClosedFormCoherences {
    let k = 4.0 * inst.r_plus * inst.r_minus * (1.0 - inst.alpha_c.norm_sqr());
    let (ap, am) = (strat.alpha_plus, strat.alpha_minus);
    let a2 = inst.alpha.norm_sqr();
    let mixed = am * Complex64::from_polar(strat.alpha_plus_bar() * strat.beta.sin(), strat.delta)
        + ap * (strat.alpha_minus_bar() * strat.beta.cos());
    ClosedFormCoherences {
        c_total: k * (1.0 - a2),
        c_a_sc: k * (ap.norm_sqr() + am.norm_sqr() - 2.0 * a2),
        c_genuine: k * mixed.norm_sqr(),
    }
}

/// Extent of the coherence ratios over the Berry phase at fixed magnitudes,
/// with the optimal strategy and separating `|eta>` at every phase.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceBand {
    /// `C_{C:A}/C_I`.
    pub transferred: (f64, f64),
    /// `C_{S:CA}/C_I`.
    pub retained: (f64, f64),
    /// `C_g/C_I`.
    pub genuine: (f64, f64),
    /// Refined phase in `[0, pi]` maximizing `C_{C:A}/C_I`; its mirror
    /// `2 pi - gamma` is an equal maximum.
    pub argmax: f64,
    /// Refined phase in `[0, pi]` minimizing `C_{C:A}/C_I`.
    pub argmin: f64,
    /// `acos(-|alpha_c|)`, where the maximum is expected.
    pub predicted_argmax: f64,
    /// True when the ratios do not depend on the phase at all.
    pub flat: bool,
}

/// Number of phase samples in the coarse scan over `[0, 2 pi)`.
pub const BAND_SCAN_POINTS: usize = 720;

/// Ratios `(C_{C:A}, C_{S:CA}, C_g) / C_I` at Berry phase `gamma`.
pub fn band_ratios(p_plus: f64, abs_alpha: f64, abs_alpha_c: f64, gamma: f64) -> Result<[f64; 3]> {
    let inst = make_instance(p_plus, Complex64::new(abs_alpha, 0.0), Complex64::from_polar(abs_alpha_c, gamma))?;
    let strat = optimal_strategy(&inst);
    let strat = separability_params(&inst, &strat).install(&strat)?;
    let cf = closed_form_coherences(&inst, &strat);
    if cf.c_total <= 0.0 {
        return Err(Error::NumericalError("no initial coherence to distribute"));
    }
    Ok([cf.c_c_a() / cf.c_total, cf.c_s_ca() / cf.c_total, cf.c_genuine / cf.c_total])
}

pub fn coherence_band(p_plus: f64, abs_alpha: f64, abs_alpha_c: f64) -> Result<CoherenceBand> {
    let n = BAND_SCAN_POINTS;
    let step = TAU / n as f64;
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        samples.push(band_ratios(p_plus, abs_alpha, abs_alpha_c, k as f64 * step)?);
    }
    let range =
        |j: usize| samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s[j]), hi.max(s[j])));
    let coarse = range(0);
    let flat = coarse.1 - coarse.0 < 1e-12;

    let f = |g: f64| band_ratios(p_plus, abs_alpha, abs_alpha_c, g).map(|r| r[0]).unwrap_or(f64::NAN);
    // Restrict to [0, pi]; the ratios are even in gamma.
    let half = n / 2;
    let pick = |better: &dyn Fn(f64, f64) -> bool| {
        let mut best = 0;
        for k in 1..=half {
            if better(samples[k][0], samples[best][0]) {
                best = k;
            }
        }
        best
    };
    let refine = |k: usize, sign: f64| {
        let lo = (k as f64 - 1.0) * step;
        let hi = (k as f64 + 1.0) * step;
        let g = golden_max(|x| sign * f(x), lo, hi, 1e-12);
        g.clamp(0.0, PI)
    };
    let (argmax, argmin) =
        if flat { (0.0, 0.0) } else { (refine(pick(&|a, b| a > b), 1.0), refine(pick(&|a, b| a < b), -1.0)) };

    let mut transferred = coarse;
    let mut retained = range(1);
    let genuine = range(2);
    if !flat {
        let (hi, lo) = (f(argmax), f(argmin));
        transferred = (transferred.0.min(lo), transferred.1.max(hi));
        retained = (retained.0.min(1.0 - hi), retained.1.max(1.0 - lo));
    }
    Ok(CoherenceBand { transferred, retained, genuine, argmax, argmin, predicted_argmax: (-abs_alpha_c).acos(), flat })
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    (lo + hi) / 2.0
}
