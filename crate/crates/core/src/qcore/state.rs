use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::register::{scatter, Register};
use super::{QubitLabel, Unitary};
use crate::linalg::{self, ONE, ZERO};
use crate::{Error, Result, Tolerances};

/// Normalized state vector over a labelled register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    register: Register,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(labels: &[QubitLabel], amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new_with(labels, amplitudes, &Tolerances::DEFAULT)
    }

    pub fn new_with(labels: &[QubitLabel], amplitudes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        let register = Register::new(labels)?;
        Self::from_register(register, amplitudes, tol)
    }

    pub(crate) fn from_register(register: Register, amplitudes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        if amplitudes.len() != register.dim() {
            return Err(Error::ShapeError("amplitude count does not match register"));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NumericalError("non-finite amplitude"));
        }
        let n2 = linalg::norm_sqr(&amplitudes);
        if (n2 - 1.0).abs() > tol.norm {
            return Err(Error::NotNormalized(n2));
        }
        Ok(PureState { register, amplitudes })
    }

    /// Normalizes `amplitudes` first. Fails on a (numerically) zero vector.
    pub fn normalized(labels: &[QubitLabel], amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = linalg::norm(&amplitudes);
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::NumericalError("cannot normalize a zero vector"));
        }
        Self::new(labels, linalg::scale_vec(&amplitudes, Complex64::new(1.0 / n, 0.0)))
    }

    /// Single-qubit state `a|0> + b|1>`.
    pub fn qubit(label: QubitLabel, a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(&[label], alloc::vec![a, b])
    }

    /// Computational basis state `|bit>` of one qubit.
    pub fn basis(label: QubitLabel, bit: usize) -> Self {
        let amps = if bit == 0 { alloc::vec![ONE, ZERO] } else { alloc::vec![ZERO, ONE] };
        PureState { register: Register::new(&[label]).expect("single label"), amplitudes: amps }
    }

    /// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn bloch(label: QubitLabel, theta: f64, phi: f64) -> Self {
        let a = Complex64::new((theta / 2.0).cos(), 0.0);
        let b = Complex64::from_polar((theta / 2.0).sin(), phi);
        PureState { register: Register::new(&[label]).expect("single label"), amplitudes: alloc::vec![a, b] }
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn labels(&self) -> &[QubitLabel] {
        self.register.labels()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes)
    }

    /// `self ⊗ other`; the register is the concatenation.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let register = self.register.concat(&other.register)?;
        Ok(PureState { register, amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes) })
    }

    /// `<self|other>`; both states must live on the same register.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.register != other.register {
            return Err(Error::ShapeError("inner product across different registers"));
        }
        Ok(linalg::inner(&self.amplitudes, &other.amplitudes))
    }

    /// `|<self|other>|^2`, after aligning `other` to this register order.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        let other = other.permute(self.labels())?;
        Ok(self.inner(&other)?.norm_sqr())
    }

    /// Multiplies by a global phase `e^{i theta}`.
    pub fn with_phase(&self, theta: f64) -> PureState {
        let ph = Complex64::from_polar(1.0, theta);
        PureState { register: self.register.clone(), amplitudes: linalg::scale_vec(&self.amplitudes, ph) }
    }

    /// Applies `u` to `targets` (in the order of `u`'s own register).
    pub fn apply(&self, u: &Unitary, targets: &[QubitLabel]) -> Result<PureState> {
        let k = targets.len();
        if u.matrix().dim() != 1 << k {
            return Err(Error::ShapeError("unitary dimension does not match target count"));
        }
        Register::new(targets)?;
        let shifts = self.register.shifts(targets)?;
        let mask: usize = shifts.iter().map(|s| 1 << s).sum();
        let m = u.matrix();
        let mut out = alloc::vec![ZERO; self.dim()];
        for (i, slot) in out.iter_mut().enumerate() {
            let t = self.register.gather(i, &shifts);
            let base = i & !mask;
            let mut acc = ZERO;
            for tp in 0..(1 << k) {
                let coeff = m[(t, tp)];
                if coeff != ZERO {
                    acc += coeff * self.amplitudes[base | scatter(tp, &shifts)];
                }
            }
            *slot = acc;
        }
        Ok(PureState { register: self.register.clone(), amplitudes: out })
    }

    /// Same state with the register reordered to `order`.
    pub fn permute(&self, order: &[QubitLabel]) -> Result<PureState> {
        let register = Register::new(order)?;
        if register.len() != self.register.len() {
            return Err(Error::ShapeError("permutation must list every qubit once"));
        }
        let shifts = self.register.shifts(order)?;
        let mut out = alloc::vec![ZERO; self.dim()];
        for (i, &amp) in self.amplitudes.iter().enumerate() {
            out[self.register.gather(i, &shifts)] = amp;
        }
        Ok(PureState { register, amplitudes: out })
    }

    /// Projects `target` onto `outcome`. Returns the Born probability and the
    /// normalized state of the remaining qubits, or `None` when the
    /// probability vanishes.
    pub fn condition(&self, target: QubitLabel, outcome: &PureState) -> Result<Option<(f64, PureState)>> {
        if outcome.register.len() != 1 {
            return Err(Error::ShapeError("outcome must be a single-qubit state"));
        }
        let rest = self.register.complement(&[target]);
        if rest.is_empty() {
            return Err(Error::ShapeError("cannot condition away the last qubit"));
        }
        let reordered = {
            let mut order = alloc::vec![target];
            order.extend_from_slice(&rest);
            self.permute(&order)?
        };
        let half = self.dim() / 2;
        let o = outcome.amplitudes();
        let sub: Vec<Complex64> = (0..half)
            .map(|j| o[0].conj() * reordered.amplitudes[j] + o[1].conj() * reordered.amplitudes[half + j])
            .collect();
        let p = linalg::norm_sqr(&sub);
        if p <= 1e-300 {
            return Ok(None);
        }
        let state = PureState::new(&rest, linalg::scale_vec(&sub, Complex64::new(1.0 / p.sqrt(), 0.0)))?;
        Ok(Some((p, state)))
    }

    /// Born probability of finding `target` in `outcome`.
    pub fn outcome_probability(&self, target: QubitLabel, outcome: &PureState) -> Result<f64> {
        if self.register.len() == 1 {
            if self.labels()[0] != target {
                return Err(Error::UnknownQubit(target));
            }
            return Ok(linalg::inner(outcome.amplitudes(), &self.amplitudes).norm_sqr());
        }
        Ok(self.condition(target, outcome)?.map_or(0.0, |(p, _)| p))
    }
}
