//! Probabilistic teleportation over a partially entangled channel, with
//! Alice's Bell-type measurement replaced by a `B` readout followed by
//! unambiguous discrimination on `S`.
//!
//! Registers: `S` carries the input, `B` is Alice's half of the channel and
//! `C` is Bob's half.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::coherence::{closed_form_coherences, ledger, ClosedFormCoherences, CoherenceLedger};
use crate::qcore::{gates, PureState, QubitLabel, Unitary};
use crate::quadrature::GaussLegendre;
use crate::ussd::{
    build_unitary_with, make_instance, optimal_strategy, p_suc_max, separability_params, Embedding, UssdInstance,
    UssdStrategy,
};
use crate::{Error, Result};

use QubitLabel::{A, B, C, S};

/// `sin 2 rho` at or above this is treated as the separable channel.
const SEPARABLE_EDGE: f64 = 1.0 - 1e-15;

/// Default node count for the Bloch-sphere average.
pub const DEFAULT_NODES: usize = 64;

/// Channel angle and the Bloch angles of the state to send.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportInstance {
    pub channel_angle: f64,
    pub mu: f64,
    pub nu: f64,
}

impl TeleportInstance {
    pub fn new(channel_angle: f64, mu: f64, nu: f64) -> Result<Self> {
        check_channel_angle(channel_angle)?;
        if !(0.0..=PI).contains(&mu) {
            return Err(Error::RangeError { name: "mu", value: mu });
        }
        if !(0.0..TAU).contains(&nu) {
            return Err(Error::RangeError { name: "nu", value: nu });
        }
        Ok(TeleportInstance { channel_angle, mu, nu })
    }

    /// `cos(mu/2)|0> + sin(mu/2) e^{i nu}|1>` on `label`.
    pub fn input_state(&self, label: QubitLabel) -> PureState {
        PureState::bloch(label, self.mu, self.nu)
    }

    /// `sin 2 rho`.
    pub fn s(&self) -> f64 {
        (2.0 * self.channel_angle).sin()
    }

    /// Probability of reading `b` on `B`: `(1 ± sin 2rho cos mu) / 2`.
    pub fn branch_probability(&self, b: BOutcome) -> f64 {
        (1.0 + b.sign() * self.s() * self.mu.cos()) / 2.0
    }

    fn separable(&self) -> bool {
        self.s() >= SEPARABLE_EDGE
    }
}

fn check_channel_angle(rho: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_4).contains(&rho) {
        return Err(Error::RangeError { name: "channel_angle", value: rho });
    }
    Ok(())
}

/// Outcome of Alice's readout of `B`; `Plus` is `|0>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BOutcome {
    Plus,
    Minus,
}

impl BOutcome {
    pub const BOTH: [BOutcome; 2] = [BOutcome::Plus, BOutcome::Minus];

    pub fn bit(self) -> usize {
        match self {
            BOutcome::Plus => 0,
            BOutcome::Minus => 1,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            BOutcome::Plus => 1.0,
            BOutcome::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            BOutcome::Plus => '+',
            BOutcome::Minus => '-',
        }
    }
}

/// Result of the discrimination step on `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AliceOutcome {
    /// Ancilla read `0`, then `S` read the given bit.
    Conclusive(usize),
    /// Ancilla read `1`.
    Inconclusive,
}

impl AliceOutcome {
    pub const ALL: [AliceOutcome; 3] =
        [AliceOutcome::Conclusive(0), AliceOutcome::Conclusive(1), AliceOutcome::Inconclusive];
}

/// Bob's correction on `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Correction {
    Identity,
    PauliZ,
    PauliX,
    /// `i sigma_y = sigma_z sigma_x`.
    IPauliY,
}

impl Correction {
    /// Lookup from the two classical bits.
    pub fn for_outcomes(b: BOutcome, s_bit: usize) -> Correction {
        match (b, s_bit) {
            (BOutcome::Plus, 0) => Correction::Identity,
            (BOutcome::Plus, _) => Correction::PauliZ,
            (BOutcome::Minus, 0) => Correction::PauliX,
            (BOutcome::Minus, _) => Correction::IPauliY,
        }
    }

    pub fn unitary(self, q: QubitLabel) -> Unitary {
        match self {
            Correction::Identity => Unitary::identity(&[q]).expect("single label"),
            Correction::PauliZ => gates::pauli_z(q),
            Correction::PauliX => gates::pauli_x(q),
            Correction::IPauliY => gates::i_pauli_y(q),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Correction::Identity => "I",
            Correction::PauliZ => "Z",
            Correction::PauliX => "X",
            Correction::IPauliY => "iY",
        }
    }
}

/// Local unitaries on `B` and `C` that turn the standard channel into an
/// arbitrary two-qubit pure state. Alice undoes `u_b` before her circuit and
/// Bob undoes `u_c` before his correction.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFrame {
    pub u_b: Unitary,
    pub u_c: Unitary,
}

/// `(M_b ⊗ 1)|psi+>` over `(B, C)` with `M_b = cos rho + sin rho sigma_z`.
pub fn channel_state(channel_angle: f64) -> Result<PureState> {
    check_channel_angle(channel_angle)?;
    let (c, s) = (channel_angle.cos(), channel_angle.sin());
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    PureState::new(&[B, C], alloc::vec![Complex64::new((c + s) * h, 0.0), zero, zero, Complex64::new((c - s) * h, 0.0)])
}

pub fn channel_state_with(channel_angle: f64, frame: &LocalFrame) -> Result<PureState> {
    channel_state(channel_angle)?.apply(&frame.u_b, &[B])?.apply(&frame.u_c, &[C])
}

/// `H_S CNOT_{S->B} (|phi>_S ⊗ |psi>_BC)` over `(S, B, C)`.
pub fn alice_circuit(inst: &TeleportInstance) -> Result<PureState> {
    let omega = inst.input_state(S).tensor(&channel_state(inst.channel_angle)?)?;
    finish_circuit(omega)
}

pub fn alice_circuit_with(inst: &TeleportInstance, frame: &LocalFrame) -> Result<PureState> {
    let omega = inst
        .input_state(S)
        .tensor(&channel_state_with(inst.channel_angle, frame)?)?
        .apply(&frame.u_b.adjoint(), &[B])?;
    finish_circuit(omega)
}

fn finish_circuit(omega: PureState) -> Result<PureState> {
    omega.apply(&gates::cnot(S, B), &[S, B])?.apply(&gates::hadamard(S), &[S])
}

/// The two system states and the two environment states of a branch.
pub fn branch_embedding(inst: &TeleportInstance, b: BOutcome) -> Result<Embedding> {
    let (c, s) = (inst.channel_angle.cos(), inst.channel_angle.sin() * b.sign());
    let xi = PureState::qubit(S, Complex64::new(c, 0.0), Complex64::new(s, 0.0))?;
    let xi_bar = xi.apply(&gates::pauli_x(S), &[S])?;
    let phi = inst.input_state(C);
    let phi = match b {
        BOutcome::Plus => phi,
        BOutcome::Minus => phi.apply(&gates::pauli_x(C), &[C])?,
    };
    // The second environment state is the first one with sigma_z applied
    // before any sigma_x, i.e. sigma_x sigma_z |phi> for the minus branch.
    let phi_bar = match b {
        BOutcome::Plus => phi.apply(&gates::pauli_z(C), &[C])?,
        BOutcome::Minus => inst.input_state(C).apply(&gates::pauli_z(C), &[C])?.apply(&gates::pauli_x(C), &[C])?,
    };
    Ok(Embedding { xi, xi_bar, phi, phi_bar })
}

/// Discrimination task faced by Alice in branch `b`:
/// `p+ = 1/2`, `alpha = ± sin 2rho`, `alpha_c = cos mu`.
pub fn branch_instance(inst: &TeleportInstance, b: BOutcome) -> Result<UssdInstance> {
    make_instance(0.5, Complex64::new(b.sign() * inst.s(), 0.0), Complex64::new(inst.mu.cos(), 0.0))
}

/// Optimal strategy with the separating failure state.
pub fn branch_strategy(branch: &UssdInstance) -> Result<UssdStrategy> {
    let s = optimal_strategy(branch);
    separability_params(branch, &s).install(&s)
}

/// Summary of one `B` outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRecord {
    pub b: BOutcome,
    pub probability: f64,
    /// `None` for the separable channel, where the two states coincide.
    pub instance: Option<UssdInstance>,
    /// Optimal discrimination probability within the branch.
    pub branch_success: f64,
    pub coherences: ClosedFormCoherences,
}

pub fn branch_to_ussd(inst: &TeleportInstance, b: BOutcome) -> Result<BranchRecord> {
    let probability = inst.branch_probability(b);
    if inst.separable() {
        let zero = ClosedFormCoherences { c_total: 0.0, c_a_sc: 0.0, c_genuine: 0.0 };
        return Ok(BranchRecord { b, probability, instance: None, branch_success: 0.0, coherences: zero });
    }
    let branch = branch_instance(inst, b)?;
    let strat = branch_strategy(&branch)?;
    Ok(BranchRecord {
        b,
        probability,
        instance: Some(branch),
        branch_success: p_suc_max(&branch),
        coherences: closed_form_coherences(&branch, &strat),
    })
}

/// Closed-form coherences of branch `b`.
pub fn branch_coherences(inst: &TeleportInstance, b: BOutcome) -> Result<ClosedFormCoherences> {
    Ok(branch_to_ussd(inst, b)?.coherences)
}

/// Ledger of the simulated post-unitary state in branch `b`.
pub fn branch_ledger(inst: &TeleportInstance, b: BOutcome) -> Result<CoherenceLedger> {
    let (_, gamma, _) = simulate_branch(inst, b)?;
    ledger(&gamma)
}

/// Measures `B`, then applies the branch unitary `U_SA` to the simulated
/// `(S, C)` state. Returns `(P_b, Gamma over (S, A, C), strategy)`.
fn simulate_branch(inst: &TeleportInstance, b: BOutcome) -> Result<(f64, PureState, UssdStrategy)> {
    if inst.separable() {
        return Err(Error::DegenerateOverlap(inst.s()));
    }
    let omega = alice_circuit(inst)?;
    branch_from_omega(inst, b, &omega)
}

fn branch_from_omega(
    inst: &TeleportInstance,
    b: BOutcome,
    omega: &PureState,
) -> Result<(f64, PureState, UssdStrategy)> {
    let (p, chi) = omega
        .condition(B, &PureState::basis(B, b.bit()))?
        .ok_or(Error::NumericalError("branch has zero probability"))?;
    let branch = branch_instance(inst, b)?;
    let strat = branch_strategy(&branch)?;
    let emb = branch_embedding(inst, b)?;
    let u = build_unitary_with(&branch, &strat, &emb)?;
    let gamma = chi.tensor(&strat.ancilla_init)?.apply(&u, &[S, A])?.permute(&[S, A, C])?;
    Ok((p, gamma, strat))
}

/// One path through the protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportRun {
    pub b: BOutcome,
    pub alice: AliceOutcome,
    /// Joint probability of this `(b, alice)` path.
    pub probability: f64,
    pub success: bool,
    /// State of `C` after Bob's action; `None` if the path cannot occur.
    pub final_state: Option<PureState>,
    pub correction: Option<Correction>,
    /// Fidelity of `final_state` with the input.
    pub fidelity: Option<f64>,
}

pub fn run_teleport(inst: &TeleportInstance, b: BOutcome, alice: AliceOutcome) -> Result<TeleportRun> {
    run_path(inst, b, alice, None)
}

pub fn run_teleport_with(
    inst: &TeleportInstance,
    b: BOutcome,
    alice: AliceOutcome,
    frame: &LocalFrame,
) -> Result<TeleportRun> {
    run_path(inst, b, alice, Some(frame))
}

fn run_path(
    inst: &TeleportInstance,
    b: BOutcome,
    alice: AliceOutcome,
    frame: Option<&LocalFrame>,
) -> Result<TeleportRun> {
    let omega = match frame {
        Some(f) => alice_circuit_with(inst, f)?,
        None => alice_circuit(inst)?,
    };
    let target = inst.input_state(C);
    let empty = |probability| TeleportRun {
        b,
        alice,
        probability,
        success: false,
        final_state: None,
        correction: None,
        fidelity: None,
    };

    if inst.separable() {
        // Identical states: the ancilla always reads inconclusive.
        let pb = inst.branch_probability(b);
        return Ok(match alice {
            AliceOutcome::Inconclusive => {
                let (_, chi) = omega
                    .condition(B, &PureState::basis(B, b.bit()))?
                    .ok_or(Error::NumericalError("branch has zero probability"))?;
                let c_state = environment_factor(&chi)?;
                let c_state = undo_frame(c_state, frame)?;
                let fidelity = target.fidelity(&c_state)?;
                TeleportRun { final_state: Some(c_state), fidelity: Some(fidelity), ..empty(pb) }
            }
            AliceOutcome::Conclusive(_) => empty(0.0),
        });
    }

    let (pb, gamma, _) = branch_from_omega(inst, b, &omega)?;
    let (bit, correction) = match alice {
        AliceOutcome::Conclusive(s_bit) => (0, Some(Correction::for_outcomes(b, s_bit))),
        AliceOutcome::Inconclusive => (1, None),
    };
    let Some((pa, sc)) = gamma.condition(A, &PureState::basis(A, bit))? else {
        return Ok(empty(0.0));
    };
    let (ps, c_state) = match alice {
        AliceOutcome::Conclusive(s_bit) => match sc.condition(S, &PureState::basis(S, s_bit))? {
            Some(hit) => hit,
            None => return Ok(empty(0.0)),
        },
        AliceOutcome::Inconclusive => (1.0, environment_factor(&sc)?),
    };
    let mut c_state = undo_frame(c_state, frame)?;
    if let Some(k) = correction {
        c_state = c_state.apply(&k.unitary(C), &[C])?;
    }
    let fidelity = target.fidelity(&c_state)?;
    Ok(TeleportRun {
        b,
        alice,
        probability: pb * pa * ps,
        success: correction.is_some(),
        final_state: Some(c_state),
        correction,
        fidelity: Some(fidelity),
    })
}

fn undo_frame(c_state: PureState, frame: Option<&LocalFrame>) -> Result<PureState> {
    match frame {
        Some(f) => c_state.apply(&f.u_c.adjoint(), &[C]),
        None => Ok(c_state),
    }
}

/// `C` factor of a product state over `(S, C)`.
fn environment_factor(sc: &PureState) -> Result<PureState> {
    let rho = crate::qcore::DensityMatrix::from_pure(sc).partial_trace(&[C])?;
    let eig = rho.eigen();
    PureState::normalized(&[C], eig.vector(0))
}

/// All six paths `(b, alice)` in a fixed order.
pub fn run_all(inst: &TeleportInstance) -> Result<Vec<TeleportRun>> {
    let mut out = Vec::with_capacity(6);
    for b in BOutcome::BOTH {
        for a in AliceOutcome::ALL {
            out.push(run_teleport(inst, b, a)?);
        }
    }
    Ok(out)
}

/// `P+ P_suc(chi+) + P- P_suc(chi-)` for this input state.
pub fn branch_weighted_success(inst: &TeleportInstance) -> Result<f64> {
    let mut total = 0.0;
    for b in BOutcome::BOTH {
        let r = branch_to_ussd(inst, b)?;
        total += r.probability * r.branch_success;
    }
    Ok(total)
}

/// Total success probability of the channel. The branch-weighted value does
/// not depend on the input state, so it is evaluated at the equator.
pub fn total_success_probability(channel_angle: f64) -> Result<f64> {
    let inst = TeleportInstance::new(channel_angle, PI / 2.0, 0.0)?;
    branch_weighted_success(&inst)
}

/// Coherence quantity averaged by [`square_mean_root`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceKind {
    /// `C_I`.
    Total,
    /// `C_{A:SC}`.
    AncillaSystemEnv,
    /// `C_{S:C}`.
    SystemEnv,
}

impl CoherenceKind {
    pub fn pick(self, cf: &ClosedFormCoherences) -> f64 {
        match self {
            CoherenceKind::Total => cf.c_total,
            CoherenceKind::AncillaSystemEnv => cf.c_a_sc,
            CoherenceKind::SystemEnv => cf.c_s_c(),
        }
    }
}

/// Integrand of the Bloch-sphere average after the trivial `nu` integral:
/// `(P+ sqrt(C+) + P- sqrt(C-)) sin(mu) / 2`.
pub fn smr_integrand(channel_angle: f64, which: CoherenceKind, mu: f64) -> Result<f64> {
    let inst = TeleportInstance::new(channel_angle, mu, 0.0)?;
    let mut acc = 0.0;
    for b in BOutcome::BOTH {
        let r = branch_to_ussd(&inst, b)?;
        acc += r.probability * which.pick(&r.coherences).max(0.0).sqrt();
    }
    Ok(acc * mu.sin() / 2.0)
}

/// Squared Bloch-sphere average of the branch-weighted square roots.
pub fn square_mean_root(channel_angle: f64, which: CoherenceKind) -> Result<f64> {
    square_mean_root_with(channel_angle, which, DEFAULT_NODES)
}

pub fn square_mean_root_with(channel_angle: f64, which: CoherenceKind, nodes: usize) -> Result<f64> {
    check_channel_angle(channel_angle)?;
    let rule = GaussLegendre::new(nodes)?;
    let mean = rule.try_integrate(0.0, PI, |mu| smr_integrand(channel_angle, which, mu))?;
    Ok(mean * mean)
}

/// One row of the channel sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig4Row {
    pub tangle: f64,
    pub channel_angle: f64,
    pub c_total: f64,
    pub c_s_c: f64,
    pub c_a_sc: f64,
    /// `C_{A:SC} / C_I`, the same in every branch and for every input.
    pub proportion: f64,
}

/// Channel angle with tangle `cos^2 2rho = tangle`.
pub fn angle_for_tangle(tangle: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&tangle) {
        return Err(Error::RangeError { name: "tangle", value: tangle });
    }
    Ok(tangle.sqrt().acos() / 2.0)
}

/// Branch ratio `C_{A:SC}/C_I`. At the separable channel both vanish and the
/// limit `2s/(1+s) -> 1` is used.
pub fn coherence_proportion(channel_angle: f64) -> Result<f64> {
    let inst = TeleportInstance::new(channel_angle, PI / 2.0, 0.0)?;
    if inst.separable() {
        return Ok(1.0);
    }
    let cf = branch_coherences(&inst, BOutcome::Plus)?;
    Ok(cf.c_a_sc / cf.c_total)
}

pub fn fig4_row(tangle: f64, nodes: usize) -> Result<Fig4Row> {
    let rho = angle_for_tangle(tangle)?;
    Ok(Fig4Row {
        tangle,
        channel_angle: rho,
        c_total: square_mean_root_with(rho, CoherenceKind::Total, nodes)?,
        c_s_c: square_mean_root_with(rho, CoherenceKind::SystemEnv, nodes)?,
        c_a_sc: square_mean_root_with(rho, CoherenceKind::AncillaSystemEnv, nodes)?,
        proportion: coherence_proportion(rho)?,
    })
}

pub fn fig4_sweep(tangles: &[f64], nodes: usize) -> Result<Vec<Fig4Row>> {
    tangles.iter().map(|&t| fig4_row(t, nodes)).collect()
}
