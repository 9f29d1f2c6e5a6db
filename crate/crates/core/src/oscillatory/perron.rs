use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{e, Real};

use super::quad::{integrate_fn, QuadOptions};

/// Abscissa `1 + eps` of the vertical line.
pub const DEFAULT_SIGMA: f64 = 1.01;

/// A finite Dirichlet polynomial `sum_{n <= M} C_n n^{-s}` and the Perron window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronSetup<F: Real> {
    /// `C_1, ..., C_M`.
    pub coeffs: Vec<F>,
    pub x1: F,
    pub x2: F,
    pub t0: F,
    pub sigma: F,
}

impl<F: Real> PerronSetup<F> {
    pub fn new(coeffs: Vec<F>, x1: F, x2: F, t0: F) -> Result<Self> {
        if !(x1 < x2) || x1 <= F::zero() {
            return Err(Error::invalid("need 0 < x1 < x2"));
        }
        if !(t0 > F::zero()) {
            return Err(Error::invalid("T0 must be positive"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        Ok(Self {
            coeffs,
            x1,
            x2,
            t0,
            sigma: F::lit(DEFAULT_SIGMA),
        })
    }

    pub fn with_t0(&self, t0: F) -> Self {
        Self { t0, ..self.clone() }
    }
}

/// `sum_{x1 < n <= u} C_n`.
pub fn exact_partial_sum<F: Real>(coeffs: &[F], x1: F, u: F) -> F {
    coeffs
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let n = F::from_usize(i + 1).unwrap();
            n > x1 && n <= u
        })
        .fold(F::zero(), |acc, (_, &c)| acc + c)
}

/// `(1 / 2 pi) ∫_{-T}^{T} y^{sigma + it} / (sigma + it) dt`; the integrand at
/// `-t` is the conjugate of the one at `t`, so only `[0, T]` is integrated.
fn perron_kernel<F: Real>(y: F, sigma: F, t0: F, opts: &QuadOptions) -> Result<F> {
    let ly = y.ln();
    let amp = y.powf(sigma);
    let rate = ly / F::TAU();
    let g = |t: F| e(t * rate) * amp / Complex::new(sigma, t);
    let r = integrate_fn(g, |_| rate.abs(), F::zero(), t0, opts)?;
    Ok(r.value.re / F::PI())
}

/// The truncated Perron integral for `sum_{x1 < n <= u} C_n`, term by term.
pub fn perron_truncated<F: Real>(setup: &PerronSetup<F>, u: F, opts: &QuadOptions) -> Result<Complex<F>> {
    if !(setup.x1 < u && u <= setup.x2) {
        return Err(Error::Precondition(format!(
            "u = {u} outside ({}, {}]",
            setup.x1, setup.x2
        )));
    }
    let terms: Vec<Result<F>> = setup
        .coeffs
        .par_iter()
        .enumerate()
        .map(|(i, &c)| {
            if c == F::zero() {
                return Ok(F::zero());
            }
            let n = F::from_usize(i + 1).unwrap();
            let hi = perron_kernel(u / n, setup.sigma, setup.t0, opts)?;
            let lo = perron_kernel(setup.x1 / n, setup.sigma, setup.t0, opts)?;
            Ok(c * (hi - lo))
        })
        .collect();
    let mut acc = F::zero();
    for t in terms {
        acc = acc + t?;
    }
    Ok(Complex::new(acc, F::zero()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerronScaling {
    pub t0: f64,
    pub mean_error: f64,
    pub mean_error_doubled: f64,
    /// `mean_error / mean_error_doubled`.
    pub factor: f64,
}

/// Mean `|truncated - exact|` over a battery at `T0` and `2 T0`.
pub fn perron_scaling<F: Real>(battery: &[(PerronSetup<F>, F)], t0: F, opts: &QuadOptions) -> Result<PerronScaling> {
    let mean = |t: F| -> Result<f64> {
        let mut acc = 0.0;
        for (setup, u) in battery {
            let s = setup.with_t0(t);
            let approx = perron_truncated(&s, *u, opts)?;
            let exact = exact_partial_sum(&s.coeffs, s.x1, *u);
            acc += (approx.re - exact).abs().to_f64_lossy();
        }
        Ok(acc / battery.len().max(1) as f64)
    };
    let m1 = mean(t0)?;
    let m2 = mean(t0 + t0)?;
    Ok(PerronScaling {
        t0: t0.to_f64_lossy(),
        mean_error: m1,
        mean_error_doubled: m2,
        factor: m1 / m2,
    })
}

/// The two fixed setups (`C_1 = 1` on `(0.5, 1.5]`; `C_n = 1` for `n <= 50`
/// on `(10.5, 30.5]`) followed by `count` seeded random ones, each with the
/// evaluation point `u`. Ends stay at distance `>= 0.2` from the integers.
pub fn perron_battery(count: usize, seed: u64) -> Vec<(PerronSetup<f64>, f64)> {
    let mut out = vec![
        (PerronSetup::new(vec![1.0], 0.5, 2.0, 1e3).unwrap(), 1.5),
        (PerronSetup::new(vec![1.0; 50], 10.5, 50.0, 1e3).unwrap(), 30.5),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let m: usize = rng.gen_range(3..30);
        let coeffs: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x1 = rng.gen_range(0..m / 2) as f64 + rng.gen_range(0.2..0.8);
        let u = rng.gen_range(x1.ceil() as usize..m) as f64 + rng.gen_range(0.2..0.8);
        out.push((PerronSetup::new(coeffs, x1, m as f64, 1e3).unwrap(), u));
    }
    out
}

/// Both sides of `sum_{x1 < n <= x2} C_n Z(n) = Z(x2) S(x2) - ∫_{x1}^{x2} S(u) Z'(u) du`
/// with `S(u) = sum_{x1 < n <= u} C_n`; the integral is split at the integers,
/// where `S` jumps.
pub fn partial_summation_check<F, Z, D>(
    coeffs: &[F],
    z: Z,
    dz: D,
    x1: F,
    x2: F,
    opts: &QuadOptions,
) -> Result<(Complex<F>, Complex<F>)>
where
    F: Real,
    Z: Fn(F) -> Complex<F> + Sync,
    D: Fn(F) -> Complex<F> + Sync,
{
    if !(x1 < x2) {
        return Err(Error::invalid("need x1 < x2"));
    }
    let last = x2.floor().to_f64_lossy() as usize;
    if last > coeffs.len() {
        return Err(Error::OutOfRange {
            what: "x2",
            value: last as u64,
            limit: coeffs.len() as u64,
        });
    }
    let first = (x1.floor().to_f64_lossy().max(0.0) as usize) + 1;
    let c = |n: usize| coeffs[n - 1];
    let mut direct = Complex::new(F::zero(), F::zero());
    for n in first..=last {
        direct = direct + z(F::from_usize(n).unwrap()) * c(n);
    }

    let freq = |u: F| {
        let zu = z(u).norm();
        if zu > F::zero() {
            dz(u).norm() / zu / F::TAU()
        } else {
            F::zero()
        }
    };
    // breakpoints x1 < first < first + 1 < ... < last <= x2
    let mut cuts = vec![x1];
    cuts.extend((first..=last).map(|n| F::from_usize(n).unwrap()).filter(|&v| v > x1 && v < x2));
    cuts.push(x2);
    let mut s = F::zero();
    let mut integral = Complex::new(F::zero(), F::zero());
    for w in cuts.windows(2) {
        // S is constant on [w0, w1): it already includes every n <= w0
        let n0 = w[0].floor().to_f64_lossy() as usize;
        if w[0] > x1 && w[0] == F::from_usize(n0).unwrap() && n0 >= first {
            s = s + c(n0);
        }
        if s != F::zero() {
            let piece = integrate_fn(&dz, freq, w[0], w[1], opts)?;
            integral = integral + piece.value * s;
        }
    }
    let total = exact_partial_sum(coeffs, x1, x2);
    Ok((direct, z(x2) * total - integral))
}
