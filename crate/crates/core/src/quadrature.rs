//! Gauss–Legendre quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule; roots of `P_n` found by Newton iteration from the
    /// Chebyshev-like initial guess.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::RangeError { name: "nodes", value: 0.0 });
        }
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let (half, mid) = ((b - a) / 2.0, (a + b) / 2.0);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Like [`integrate`](Self::integrate) but fails on a non-finite sample.
    pub fn try_integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
        let (half, mid) = ((b - a) / 2.0, (a + b) / 2.0);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x)?;
            if !v.is_finite() {
                return Err(Error::NumericalError("non-finite integrand sample"));
            }
            acc += w * v;
        }
        Ok(acc * half)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64, 128] {
            let g = GaussLegendre::new(n).unwrap();
            assert!((g.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
            assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let g = GaussLegendre::new(5).unwrap();
        // Degree 9 is the limit for five nodes.
        let v = g.integrate(0.0, 2.0, |x| x.powi(9) - 3.0 * x.powi(4));
        let exact = 2f64.powi(10) / 10.0 - 3.0 * 2f64.powi(5) / 5.0;
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn sine_squared_over_half_period() {
        let g = GaussLegendre::new(64).unwrap();
        assert!((g.integrate(0.0, PI, |m| m.sin().powi(2)) - PI / 2.0).abs() < 1e-12);
        assert!((g.integrate(0.0, 1.0, |_| 3.0) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = GaussLegendre::new(8).unwrap();
        assert!(g.try_integrate(0.0, 1.0, |_| Ok(f64::NAN)).is_err());
        assert!(GaussLegendre::new(0).is_err());
    }
}
