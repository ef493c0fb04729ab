use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::wrap_pi;
use crate::qcore::{PureState, QubitLabel};
use crate::{Error, Result, Tolerances};

/// One discrimination task: weights and overlaps of
/// `|chi> = sqrt(r+) |xi>|phi> + sqrt(r-) |xi_bar>|phi_bar>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UssdInstance {
    /// Prior weight of the `+` branch, at most 1/2.
    pub p_plus: f64,
    /// `<xi_bar|xi>`.
    pub alpha: Complex64,
    /// `<phi_bar|phi>`.
    pub alpha_c: Complex64,
    pub r_plus: f64,
    pub r_minus: f64,
    /// `gamma_s + gamma_c`, wrapped to `(-pi, pi]`.
    pub gamma: f64,
    /// `sqrt(p+/p-)`.
    pub tilde_alpha: f64,
    /// True when the input had `p+ > 1/2` and the labels were exchanged.
    pub swapped: bool,
}

/// Which regime the optimal strategy falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalCase {
    /// `|alpha| < tilde_alpha`: both failure amplitudes are nonzero.
    Balanced,
    /// `|alpha| >= tilde_alpha`: the `+` state is never identified.
    IgnorePlus,
}

impl OptimalCase {
    pub fn label(self) -> &'static str {
        match self {
            OptimalCase::Balanced => "i",
            OptimalCase::IgnorePlus => "ii",
        }
    }
}

/// Validates and canonicalizes an instance. Inputs with `p+ > 1/2` have
/// their labels swapped, which conjugates both overlaps.
pub fn make_instance(p_plus: f64, alpha: Complex64, alpha_c: Complex64) -> Result<UssdInstance> {
    if !(0.0..=1.0).contains(&p_plus) {
        return Err(Error::RangeError { name: "p_plus", value: p_plus });
    }
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::RangeError { name: "alpha", value: alpha.norm() });
    }
    if alpha.norm() >= 1.0 {
        return Err(Error::DegenerateOverlap(alpha.norm()));
    }
    let ac = alpha_c.norm();
    if !(ac <= 1.0 + Tolerances::DEFAULT.norm) {
        return Err(Error::RangeError { name: "alpha_c", value: ac });
    }
    let alpha_c = if ac > 1.0 { alpha_c / ac } else { alpha_c };

    let (p_plus, alpha, alpha_c, swapped) =
        if p_plus > 0.5 { (1.0 - p_plus, alpha.conj(), alpha_c.conj(), true) } else { (p_plus, alpha, alpha_c, false) };
    let p_minus = 1.0 - p_plus;
    let gamma = wrap_pi(alpha.arg() + alpha_c.arg());
    let cross = (p_plus * p_minus).sqrt() * alpha.norm() * alpha_c.norm() * gamma.cos();
    let denom = 1.0 + 2.0 * cross;
    Ok(UssdInstance {
        p_plus,
        alpha,
        alpha_c,
        r_plus: p_plus / denom,
        r_minus: p_minus / denom,
        gamma,
        tilde_alpha: (p_plus / p_minus).sqrt(),
        swapped,
    })
}

/// Polar form helper: `mag e^{i phase}`.
pub fn polar(mag: f64, phase: f64) -> Complex64 {
    Complex64::from_polar(mag, phase)
}

impl UssdInstance {
    pub fn p_minus(&self) -> f64 {
        1.0 - self.p_plus
    }

    pub fn gamma_s(&self) -> f64 {
        self.alpha.arg()
    }

    pub fn gamma_c(&self) -> f64 {
        self.alpha_c.arg()
    }

    /// `sqrt(1 - |alpha_c|^2)`.
    pub fn alpha_c_bar(&self) -> f64 {
        (1.0 - self.alpha_c.norm_sqr()).max(0.0).sqrt()
    }

    pub fn case(&self) -> OptimalCase {
        if self.alpha.norm() < self.tilde_alpha {
            OptimalCase::Balanced
        } else {
            OptimalCase::IgnorePlus
        }
    }

    /// `r+ + r- + 2 sqrt(r+ r-) |alpha||alpha_c| cos gamma`, which is 1.
    pub fn normalization(&self) -> f64 {
        self.r_plus
            + self.r_minus
            + 2.0 * (self.r_plus * self.r_minus).sqrt() * self.alpha.norm() * self.alpha_c.norm() * self.gamma.cos()
    }
}

/// Concrete qubit states realizing the overlaps of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub xi: PureState,
    pub xi_bar: PureState,
    pub phi: PureState,
    pub phi_bar: PureState,
}

impl Embedding {
    /// `xi = |0>`, `xi_bar = alpha*|0> + sqrt(1-|alpha|^2)|1>`, and likewise
    /// on `C`.
    pub fn canonical(inst: &UssdInstance) -> Embedding {
        let pair = |label, a: Complex64| {
            let bar = (1.0 - a.norm_sqr()).max(0.0).sqrt();
            let second = PureState::normalized(&[label], alloc::vec![a.conj(), Complex64::new(bar, 0.0)])
                .expect("overlap magnitude at most one");
            (PureState::basis(label, 0), second)
        };
        let (xi, xi_bar) = pair(QubitLabel::S, inst.alpha);
        let (phi, phi_bar) = pair(QubitLabel::C, inst.alpha_c);
        Embedding { xi, xi_bar, phi, phi_bar }
    }

    /// Checks the states against the instance overlaps.
    pub fn new(
        inst: &UssdInstance,
        xi: PureState,
        xi_bar: PureState,
        phi: PureState,
        phi_bar: PureState,
    ) -> Result<Self> {
        let e = Embedding { xi, xi_bar, phi, phi_bar };
        e.validate(inst, &Tolerances::DEFAULT)?;
        Ok(e)
    }

    pub fn validate(&self, inst: &UssdInstance, tol: &Tolerances) -> Result<()> {
        let on = |s: &PureState, q| s.labels() == [q];
        if !(on(&self.xi, QubitLabel::S)
            && on(&self.xi_bar, QubitLabel::S)
            && on(&self.phi, QubitLabel::C)
            && on(&self.phi_bar, QubitLabel::C))
        {
            return Err(Error::InvalidRegister("embedding states must live on S and C"));
        }
        let ds = (self.xi_bar.inner(&self.xi)? - inst.alpha).norm();
        let dc = (self.phi_bar.inner(&self.phi)? - inst.alpha_c).norm();
        let worst = ds.max(dc);
        if worst > tol.embedding {
            return Err(Error::EmbeddingError(worst));
        }
        Ok(())
    }

    /// Applies `u_s` to both system states and `u_c` to both environment
    /// states; overlaps are unchanged.
    pub fn transformed(&self, u_s: &crate::qcore::Unitary, u_c: &crate::qcore::Unitary) -> Result<Embedding> {
        Ok(Embedding {
            xi: self.xi.apply(u_s, &[QubitLabel::S])?,
            xi_bar: self.xi_bar.apply(u_s, &[QubitLabel::S])?,
            phi: self.phi.apply(u_c, &[QubitLabel::C])?,
            phi_bar: self.phi_bar.apply(u_c, &[QubitLabel::C])?,
        })
    }
}

/// `|chi>` over `(S, C)`.
pub fn build_chi(inst: &UssdInstance, emb: &Embedding) -> Result<PureState> {
    emb.validate(inst, &Tolerances::DEFAULT)?;
    let plus = emb.xi.tensor(&emb.phi)?;
    let minus = emb.xi_bar.tensor(&emb.phi_bar)?;
    let (a, b) = (inst.r_plus.sqrt(), inst.r_minus.sqrt());
    let amps = plus.amplitudes().iter().zip(minus.amplitudes()).map(|(x, y)| x * a + y * b).collect();
    PureState::new_with(&[QubitLabel::S, QubitLabel::C], amps, &Tolerances { norm: 1e-10, ..Tolerances::DEFAULT })
}
