//! Oscillatory integrals `∫ w(x) e(phi(x)) dx`, the exponential-integral
//! (van der Corput) bound, truncated Perron integrals, and partial summation.

mod perron;
mod quad;
mod vdc;

use serde::Serialize;

use crate::amplitude::{Amplitude, LocalApproximation};
use crate::scalar::Real;

pub use perron::{
    exact_partial_sum, partial_summation_check, perron_battery, perron_scaling, perron_truncated, PerronSetup,
    PerronScaling, DEFAULT_SIGMA,
};
pub use quad::{integrate, integrate_fn, integrate_weighted, Integral, QuadOptions};
pub use vdc::{
    locate_lambda, vdc_battery, vdc_bound_check, vdc_constant, VdcCase, VdcReport, VDC_C1,
    VDC_C2, VDC_C3, VDC_C4,
};

/// A real phase with derivatives through order four.
pub trait Phase<F: Real>: Sync {
    fn value(&self, x: F) -> F;

    /// `phi^{(k)}(x)` for `k <= 4`.
    fn deriv(&self, k: usize, x: F) -> F;
}

/// `d^k/dx^k log x` for `k >= 1`.
pub(crate) fn log_deriv<F: Real>(k: usize, x: F) -> F {
    // (-1)^{k-1} (k-1)! / x^k
    let fact = (1..k).fold(F::one(), |acc, i| acc * F::from_usize(i).unwrap());
    let sign = if k.is_multiple_of(2) { -F::one() } else { F::one() };
    sign * fact / x.powi(k as i32)
}

/// `sum_i c_i x^i + L log x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyLogPhase<F: Real> {
    pub coeffs: Vec<F>,
    pub log_coef: F,
}

impl<F: Real> PolyLogPhase<F> {
    pub fn polynomial(coeffs: Vec<F>) -> Self {
        Self {
            coeffs,
            log_coef: F::zero(),
        }
    }

    pub fn linear(t: F) -> Self {
        Self::polynomial(vec![F::zero(), t])
    }
}

impl<F: Real> Phase<F> for PolyLogPhase<F> {
    fn value(&self, x: F) -> F {
        let poly = self.coeffs.iter().rev().fold(F::zero(), |acc, &c| acc * x + c);
        if self.log_coef == F::zero() {
            poly
        } else {
            poly + self.log_coef * x.ln()
        }
    }

    fn deriv(&self, k: usize, x: F) -> F {
        if k == 0 {
            return self.value(x);
        }
        // Horner over x^{i-k}, from the top coefficient down
        let poly = self
            .coeffs
            .iter()
            .enumerate()
            .skip(k)
            .rev()
            .fold(F::zero(), |acc, (i, &c)| {
                let ff = (0..k).fold(F::one(), |p, r| p * F::from_usize(i - r).unwrap());
                acc * x + c * ff
            });
        if self.log_coef == F::zero() {
            poly
        } else {
            poly + self.log_coef * log_deriv(k, x)
        }
    }
}

/// `(f - g)(u) + (t / 2 pi) log u`, the phase of the arc integrals.
#[derive(Debug, Clone, Copy)]
pub struct ArcPhase<'a, F: Real, A: Amplitude<F> + ?Sized> {
    pub f: &'a A,
    pub approx: LocalApproximation<F>,
    pub t: F,
}

impl<F: Real, A: Amplitude<F> + ?Sized> Phase<F> for ArcPhase<'_, F, A> {
    fn value(&self, u: F) -> F {
        self.f.value(u) - self.approx.g(u) + self.t / F::TAU() * u.ln()
    }

    fn deriv(&self, k: usize, u: F) -> F {
        if k == 0 {
            return self.value(u);
        }
        self.approx.residual_deriv(self.f, k, u) + self.t / F::TAU() * log_deriv(k, u)
    }
}
