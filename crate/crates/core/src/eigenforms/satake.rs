use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unit-modulus Satake parameter `alpha_p` with `alpha_p + conj(alpha_p) = lambda(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatakeAngle<F: Real> {
    pub p: u64,
    pub alpha: Complex<F>,
}

impl<F: Real> SatakeAngle<F> {
    /// The parameter in the upper half plane; needs `|lambda(p)| <= 2`.
    pub fn from_lambda(p: u64, lambda_p: F) -> Result<Self> {
        let two = F::lit(2.0);
        if lambda_p.abs() > two + F::lit(1e-12) {
            return Err(Error::invalid(format!(
                "lambda({p}) = {lambda_p} violates |lambda(p)| <= 2"
            )));
        }
        let re = lambda_p / two;
        let im = (F::one() - re * re).max(F::zero()).sqrt();
        Ok(Self {
            p,
            alpha: Complex::new(re, im),
        })
    }

    /// Angle `theta` with `alpha = e^{i theta}`, in `[0, pi]`.
    pub fn theta(&self) -> F {
        self.alpha.im.atan2(self.alpha.re)
    }

    /// `lambda(p^k) = (alpha^{k+1} - conj(alpha)^{k+1}) / (alpha - conj(alpha))`,
    /// evaluated as `sin((k+1) theta) / sin(theta)`.
    pub fn lambda_power(&self, k: u32) -> F {
        let th = self.theta();
        let s = th.sin();
        let kp1 = F::from_u32(k + 1).unwrap();
        if s.abs() < F::lit(1e-9) {
            // alpha = +-1: the limit is (k+1) alpha^k
            let sign = if self.alpha.re < F::zero() && k % 2 == 1 {
                -F::one()
            } else {
                F::one()
            };
            return sign * kp1;
        }
        (kp1 * th).sin() / s
    }
}

/// `b_{p^k} = (alpha^k + conj(alpha)^k) / k`, the coefficients of
/// `log F_p(s)` for `F = L(G, s)`.
pub fn euler_log_coeffs<F: Real>(angle: &SatakeAngle<F>, k: u32) -> Result<Complex<F>> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let kf = F::from_u32(k).unwrap();
    // alpha^k via the angle, not repeated multiplication
    let ak = Complex::from_polar(F::one(), kf * angle.theta());
    Ok((ak + ak.conj()) / kf)
}
