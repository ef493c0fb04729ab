use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Names of the qubits that appear in the discrimination (S, C, A) and
/// teleportation (S, B, C) settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitLabel {
    /// System qubit.
    S,
    /// Environment / receiver qubit.
    C,
    /// Ancilla.
    A,
    /// Sender's half of the teleportation channel.
    B,
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QubitLabel::S => "S",
            QubitLabel::C => "C",
            QubitLabel::A => "A",
            QubitLabel::B => "B",
        };
        f.write_str(s)
    }
}

pub const MAX_QUBITS: usize = 3;

/// Ordered list of distinct labels, one to three long.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register(Vec<QubitLabel>);

impl Register {
    pub fn new(labels: &[QubitLabel]) -> Result<Self> {
        if labels.is_empty() || labels.len() > MAX_QUBITS {
            return Err(Error::InvalidRegister("register must hold 1 to 3 qubits"));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::RegisterClash(*l));
            }
        }
        Ok(Register(labels.to_vec()))
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.0.len()
    }

    pub fn position(&self, label: QubitLabel) -> Result<usize> {
        self.0.iter().position(|&l| l == label).ok_or(Error::UnknownQubit(label))
    }

    pub fn contains(&self, label: QubitLabel) -> bool {
        self.0.contains(&label)
    }

    /// Bit shift of `label` inside a basis index.
    pub fn shift(&self, label: QubitLabel) -> Result<usize> {
        Ok(self.len() - 1 - self.position(label)?)
    }

    /// Concatenation; fails on shared labels.
    pub fn concat(&self, other: &Register) -> Result<Register> {
        if let Some(&l) = other.0.iter().find(|l| self.0.contains(l)) {
            return Err(Error::RegisterClash(l));
        }
        let mut labels = self.0.clone();
        labels.extend_from_slice(&other.0);
        Register::new(&labels)
    }

    /// Labels of `self` that are not in `subset`, in register order.
    pub fn complement(&self, subset: &[QubitLabel]) -> Vec<QubitLabel> {
        self.0.iter().copied().filter(|l| !subset.contains(l)).collect()
    }

    /// Extracts the bits of `index` belonging to `labels`, packed in the
    /// order of `labels` (first label most significant).
    pub(crate) fn gather(&self, index: usize, shifts: &[usize]) -> usize {
        shifts.iter().fold(0, |acc, &s| (acc << 1) | ((index >> s) & 1))
    }

    pub(crate) fn shifts(&self, labels: &[QubitLabel]) -> Result<Vec<usize>> {
        labels.iter().map(|&l| self.shift(l)).collect()
    }
}

/// Places the packed bits of `sub` (first shift most significant) at `shifts`.
pub(crate) fn scatter(sub: usize, shifts: &[usize]) -> usize {
    let k = shifts.len();
    shifts.iter().enumerate().fold(0, |acc, (i, &s)| acc | (((sub >> (k - 1 - i)) & 1) << s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use QubitLabel::*;

    #[test]
    fn rejects_duplicates_and_bad_sizes() {
        assert_eq!(Register::new(&[S, S]), Err(Error::RegisterClash(S)));
        assert!(Register::new(&[]).is_err());
        assert!(Register::new(&[S, C, A, B]).is_err());
    }

    #[test]
    fn gather_scatter_roundtrip() {
        let r = Register::new(&[S, A, C]).unwrap();
        let shifts = r.shifts(&[C, S]).unwrap();
        for idx in 0..8 {
            let sub = r.gather(idx, &shifts);
            let back = scatter(sub, &shifts);
            assert_eq!(back, idx & 0b101);
        }
    }
}
