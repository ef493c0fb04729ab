use alloc::vec::Vec;

use num_complex::Complex64;

use super::register::{scatter, Register};
use super::{PureState, QubitLabel};
use crate::linalg::{self, CMatrix, HermitianEigen};
use crate::{Error, Result, Tolerances};

/// Hermitian, positive semidefinite, unit-trace matrix over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    register: Register,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(labels: &[QubitLabel], matrix: CMatrix) -> Result<Self> {
        Self::new_with(labels, matrix, &Tolerances::DEFAULT)
    }

    pub fn new_with(labels: &[QubitLabel], matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let register = Register::new(labels)?;
        if matrix.dim() != register.dim() {
            return Err(Error::ShapeError("matrix dimension does not match register"));
        }
        if matrix.hermiticity_defect() > tol.hermitian {
            return Err(Error::NotDensityMatrix("not Hermitian"));
        }
        if (matrix.trace().re - 1.0).abs() > tol.trace {
            return Err(Error::NotDensityMatrix("trace differs from 1"));
        }
        let eig = linalg::hermitian_eigen(&matrix);
        if eig.values.last().is_some_and(|&v| v < -tol.psd) {
            return Err(Error::NotDensityMatrix("negative eigenvalue"));
        }
        Ok(DensityMatrix { register, matrix })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        DensityMatrix { register: psi.register().clone(), matrix: CMatrix::outer(a, a) }
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

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn eigen(&self) -> HermitianEigen {
        linalg::hermitian_eigen(&self.matrix)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().values
    }

    /// Reduced state on `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::PartitionError);
        }
        let kept = Register::new(keep)?;
        let keep_shifts = self.register.shifts(keep)?;
        let env = self.register.complement(keep);
        let env_shifts = self.register.shifts(&env)?;
        let (dk, de) = (1usize << keep.len(), 1usize << env.len());
        let mut out = CMatrix::zeros(dk);
        for a in 0..dk {
            let ia = scatter(a, &keep_shifts);
            for b in 0..dk {
                let ib = scatter(b, &keep_shifts);
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..de {
                    let ie = scatter(e, &env_shifts);
                    acc += self.matrix[(ia | ie, ib | ie)];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(DensityMatrix { register: kept, matrix: out })
    }

    /// `(U ⊗ I) rho (U ⊗ I)^dagger` with `u` acting on `targets`.
    pub fn conjugate(&self, u: &super::Unitary, targets: &[QubitLabel]) -> Result<DensityMatrix> {
        let full = u.embed(self.labels(), targets)?;
        let m = &(&full * &self.matrix) * &full.adjoint();
        Ok(DensityMatrix { register: self.register.clone(), matrix: m })
    }
}
