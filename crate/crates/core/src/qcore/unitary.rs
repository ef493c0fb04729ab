use alloc::vec::Vec;

use num_complex::Complex64;

use super::register::{scatter, Register};
use super::{PureState, QubitLabel};
use crate::linalg::{self, CMatrix, ZERO};
use crate::{Error, Result, Tolerances};

/// Unitary operator over a labelled register.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    register: Register,
    matrix: CMatrix,
}

impl Unitary {
    pub fn new(labels: &[QubitLabel], matrix: CMatrix) -> Result<Self> {
        Self::new_with(labels, matrix, &Tolerances::DEFAULT)
    }

    pub fn new_with(labels: &[QubitLabel], matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let register = Register::new(labels)?;
        if matrix.dim() != register.dim() {
            return Err(Error::ShapeError("matrix dimension does not match register"));
        }
        let defect = matrix.unitarity_defect();
        if !(defect <= tol.unitary) {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Unitary { register, matrix })
    }

    pub fn identity(labels: &[QubitLabel]) -> Result<Self> {
        let register = Register::new(labels)?;
        let matrix = CMatrix::identity(register.dim());
        Ok(Unitary { register, matrix })
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn labels(&self) -> &[QubitLabel] {
        self.register.labels()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary { register: self.register.clone(), matrix: self.matrix.adjoint() }
    }

    /// `self · other` (apply `other` first). Registers must match.
    pub fn compose(&self, other: &Unitary) -> Result<Unitary> {
        if self.register != other.register {
            return Err(Error::ShapeError("composing unitaries on different registers"));
        }
        Ok(Unitary { register: self.register.clone(), matrix: &self.matrix * &other.matrix })
    }

    /// Same operator with a different label set (the matrix is unchanged).
    pub fn relabel(&self, labels: &[QubitLabel]) -> Result<Unitary> {
        let register = Register::new(labels)?;
        if register.len() != self.register.len() {
            return Err(Error::ShapeError("relabel must keep the qubit count"));
        }
        Ok(Unitary { register, matrix: self.matrix.clone() })
    }

    /// Kronecker product; the register is the concatenation.
    pub fn tensor(&self, other: &Unitary) -> Result<Unitary> {
        let register = self.register.concat(&other.register)?;
        Ok(Unitary { register, matrix: self.matrix.kron(&other.matrix) })
    }

    /// Full matrix of this operator acting on `targets` inside `labels`.
    pub fn embed(&self, labels: &[QubitLabel], targets: &[QubitLabel]) -> Result<CMatrix> {
        Self::embed_matrix(&self.matrix, labels, targets)
    }

    /// Embeds an arbitrary operator on `targets` into the register `labels`.
    pub(crate) fn embed_matrix(matrix: &CMatrix, labels: &[QubitLabel], targets: &[QubitLabel]) -> Result<CMatrix> {
        if matrix.dim() != 1 << targets.len() {
            return Err(Error::ShapeError("unitary dimension does not match target count"));
        }
        let full = Register::new(labels)?;
        let t_shifts = full.shifts(targets)?;
        let rest = full.complement(targets);
        let r_shifts = full.shifts(&rest)?;
        let (dt, dr) = (1usize << targets.len(), 1usize << rest.len());
        let mut m = CMatrix::zeros(full.dim());
        for e in 0..dr {
            let base = scatter(e, &r_shifts);
            for a in 0..dt {
                for b in 0..dt {
                    m[(base | scatter(a, &t_shifts), base | scatter(b, &t_shifts))] = matrix[(a, b)];
                }
            }
        }
        Ok(m)
    }
}

/// Single- and two-qubit gates.
pub mod gates {
    use super::*;
    use crate::linalg::{I, ONE};

    fn single(label: QubitLabel, rows: [Complex64; 4]) -> Unitary {
        Unitary { register: Register::new(&[label]).expect("single label"), matrix: CMatrix::from_rows(rows.to_vec()) }
    }

    pub fn hadamard(q: QubitLabel) -> Unitary {
        let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        single(q, [h, h, h, -h])
    }

    pub fn pauli_x(q: QubitLabel) -> Unitary {
        single(q, [ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y(q: QubitLabel) -> Unitary {
        single(q, [ZERO, -I, I, ZERO])
    }

    pub fn pauli_z(q: QubitLabel) -> Unitary {
        single(q, [ONE, ZERO, ZERO, -ONE])
    }

    /// `i σ_y = [[0, 1], [-1, 0]]`.
    pub fn i_pauli_y(q: QubitLabel) -> Unitary {
        single(q, [ZERO, ONE, -ONE, ZERO])
    }

    /// `diag(1, e^{i theta})`.
    pub fn phase(q: QubitLabel, theta: f64) -> Unitary {
        single(q, [ONE, ZERO, ZERO, Complex64::from_polar(1.0, theta)])
    }

    /// CNOT on the register `(control, target)`.
    pub fn cnot(control: QubitLabel, target: QubitLabel) -> Unitary {
        let mut m = CMatrix::identity(4);
        m[(2, 2)] = ZERO;
        m[(3, 3)] = ZERO;
        m[(2, 3)] = ONE;
        m[(3, 2)] = ONE;
        Unitary { register: Register::new(&[control, target]).expect("distinct labels"), matrix: m }
    }
}

/// Unitary mapping each input state to its paired output state.
///
/// The inputs are orthonormalized by modified Gram–Schmidt with the same
/// combinations applied to the outputs; both frames are then completed with
/// canonical basis vectors in index order.
pub fn complete_unitary(constraints: &[(PureState, PureState)]) -> Result<Unitary> {
    complete_unitary_with(constraints, &Tolerances::DEFAULT)
}

pub fn complete_unitary_with(constraints: &[(PureState, PureState)], tol: &Tolerances) -> Result<Unitary> {
    let first = constraints.first().ok_or(Error::ShapeError("no constraints given"))?;
    let register = first.0.register().clone();
    let labels = register.labels().to_vec();
    let mut inputs = Vec::with_capacity(constraints.len());
    let mut outputs = Vec::with_capacity(constraints.len());
    for (a, b) in constraints {
        if a.register() != &register {
            return Err(Error::ShapeError("constraint inputs live on different registers"));
        }
        inputs.push(a.amplitudes().to_vec());
        outputs.push(b.permute(&labels)?.amplitudes().to_vec());
    }

    let mismatch = linalg::gram(&inputs).max_abs_diff(&linalg::gram(&outputs));
    if !(mismatch <= tol.gram) {
        return Err(Error::NotIsometric(mismatch));
    }

    let dim = register.dim();
    let mut e_frame: Vec<Vec<Complex64>> = Vec::new();
    let mut f_frame: Vec<Vec<Complex64>> = Vec::new();
    for (x, y) in inputs.iter().zip(&outputs) {
        let (mut rx, mut ry) = (x.clone(), y.clone());
        for _ in 0..2 {
            for (e, f) in e_frame.iter().zip(&f_frame) {
                let proj = linalg::inner(e, &rx);
                for k in 0..dim {
                    rx[k] -= proj * e[k];
                    ry[k] -= proj * f[k];
                }
            }
        }
        let n = linalg::norm(&rx);
        if n >= tol.gram_schmidt_skip {
            let s = Complex64::new(1.0 / n, 0.0);
            e_frame.push(linalg::scale_vec(&rx, s));
            f_frame.push(linalg::scale_vec(&ry, s));
        }
    }
    // Remove the residual non-orthogonality the Gram tolerance allows.
    let f_frame = linalg::gram_schmidt(&f_frame, tol.gram_schmidt_skip);
    if f_frame.len() != e_frame.len() {
        return Err(Error::NotIsometric(1.0));
    }

    let canonical: Vec<Vec<Complex64>> = (0..dim)
        .map(|i| {
            let mut v = alloc::vec![ZERO; dim];
            v[i] = Complex64::new(1.0, 0.0);
            v
        })
        .collect();
    let complete = |frame: Vec<Vec<Complex64>>| {
        let mut all = frame;
        all.extend(canonical.iter().cloned());
        linalg::gram_schmidt(&all, tol.gram_schmidt_skip)
    };
    let e_full = complete(e_frame);
    let f_full = complete(f_frame);
    debug_assert_eq!(e_full.len(), dim);
    debug_assert_eq!(f_full.len(), dim);

    let mut m = CMatrix::zeros(dim);
    for (e, f) in e_full.iter().zip(&f_full) {
        m = m.add(&CMatrix::outer(f, e));
    }
    let u = Unitary::new_with(&labels, m, tol)?;

    for (x, y) in inputs.iter().zip(&outputs) {
        let err = linalg::max_abs_diff_vec(&u.matrix().mul_vec(x), y);
        if !(err <= tol.unitary) {
            return Err(Error::NotIsometric(err));
        }
    }
    Ok(u)
}
