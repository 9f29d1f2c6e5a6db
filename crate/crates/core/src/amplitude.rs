//! Amplitude functions `f`, the frequency map `h(x) = f'(x) + x f''(x)`, and
//! the local surrogate
//!
//! `g(x) = h(x0) x - x0^2 f''(x0) log x + C`,
//!
//! which agrees with `f` to second order at `x0 = h^-1(l/q)` and whose
//! exponential splits as `e(C) e(n l / q) n^{-iT}` with `T = 2 pi x0^2 f''(x0)`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{e, e_ratio, Real};

/// A real phase with closed-form derivatives up to order four.
pub trait Amplitude<F: Real>: Send + Sync {
    fn value(&self, x: F) -> F;

    /// `f^{(k)}(x)` for `k <= 4`; `k = 0` is the value.
    fn deriv(&self, k: usize, x: F) -> F;

    /// `h(x) = f'(x) + x f''(x)`.
    fn h(&self, x: F) -> F {
        self.deriv(1, x) + x * self.deriv(2, x)
    }

    /// `h'(x) = 2 f''(x) + x f'''(x)`.
    fn h_prime(&self, x: F) -> F {
        F::lit(2.0) * self.deriv(2, x) + x * self.deriv(3, x)
    }

    /// Solves `h(x) = y` for `x >= 1` by monotone bisection.
    fn invert_h(&self, y: F) -> Result<F> {
        invert_h_bisect(self, y, F::one(), F::lit(1e15))
    }
}

/// Bisection for `h(x) = y` on `[lo, hi]`, to about `1e-13` relative.
pub fn invert_h_bisect<F: Real, A: Amplitude<F> + ?Sized>(f: &A, y: F, lo: F, hi: F) -> Result<F> {
    let (mut a, mut b) = (lo, hi);
    let (ha, hb) = (f.h(a) - y, f.h(b) - y);
    if ha == F::zero() {
        return Ok(a);
    }
    if hb == F::zero() {
        return Ok(b);
    }
    if ha.signum() == hb.signum() {
        return Err(Error::NoSolution(format!(
            "h(x) = {y} has no solution in [{lo}, {hi}]"
        )));
    }
    let rel = F::lit(1e-13).max(F::epsilon() * F::lit(4.0));
    for _ in 0..400 {
        // geometric midpoint: the interval spans many decades
        let m = (a * b).sqrt();
        let hm = f.h(m) - y;
        if hm.signum() == ha.signum() {
            a = m;
        } else {
            b = m;
        }
        if (b - a) <= rel * a {
            break;
        }
    }
    Ok((a + b) / F::lit(2.0))
}

/// `f(x) = j x^gamma`, the family the Piatetski-Shapiro reduction produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerAmplitude<F: Real> {
    pub j: F,
    pub gamma: F,
}

impl<F: Real> PowerAmplitude<F> {
    pub fn new(j: F, gamma: F) -> Result<Self> {
        if j == F::zero() || !j.is_finite() {
            return Err(Error::invalid("j must be finite and non-zero"));
        }
        if !(gamma > F::zero() && gamma <= F::one()) {
            return Err(Error::invalid(format!("gamma = {gamma} outside (0, 1]")));
        }
        Ok(Self { j, gamma })
    }

    /// `j gamma (gamma - 1) ... (gamma - k + 1)`.
    fn coefficient(&self, k: usize) -> F {
        (0..k).fold(self.j, |acc, i| acc * (self.gamma - F::from_usize(i).unwrap()))
    }

    /// `h` is decreasing on `[1, inf)` iff `j > 0` (for `gamma < 1`).
    pub fn h_is_decreasing(&self) -> bool {
        self.j > F::zero()
    }
}

impl<F: Real> Amplitude<F> for PowerAmplitude<F> {
    fn value(&self, x: F) -> F {
        self.j * x.powf(self.gamma)
    }

    fn deriv(&self, k: usize, x: F) -> F {
        let kf = F::from_usize(k).unwrap();
        self.coefficient(k) * x.powf(self.gamma - kf)
    }

    fn h(&self, x: F) -> F {
        self.j * self.gamma * self.gamma * x.powf(self.gamma - F::one())
    }

    /// Closed form `x = (y / (j gamma^2))^{1/(gamma - 1)}`.
    fn invert_h(&self, y: F) -> Result<F> {
        let scale = self.j * self.gamma * self.gamma;
        let ratio = y / scale;
        if self.gamma == F::one() || ratio <= F::zero() || !ratio.is_finite() {
            return Err(Error::NoSolution(format!("h(x) = {y} is outside the range of h")));
        }
        let x = ratio.powf(F::one() / (self.gamma - F::one()));
        if x < F::one() || !x.is_finite() {
            return Err(Error::NoSolution(format!(
                "h(x) = {y} needs x = {x} outside [1, inf)"
            )));
        }
        Ok(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionWindow {
    /// Lower bound on the absolute normalized ratio.
    pub lo: f64,
    /// Upper bound on the absolute normalized ratio.
    pub hi: f64,
}

impl Default for ConditionWindow {
    fn default() -> Self {
        // frozen: ratios for gamma in [0.9, 0.99] sit in [0.009, 2.1]
        Self { lo: 1e-3, hi: 1e3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub id: String,
    pub min: f64,
    pub max: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub n: f64,
    pub samples: usize,
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

pub const CONDITION_SAMPLES: usize = 1024;

/// Samples the normalized ratios behind conditions i) to vii) on `[N, 2N]`.
///
/// An asymptotic condition `A(x) ≍ B(x)` passes when `A/B` keeps one sign
/// and `|A/B|` stays inside the window at every sample.
pub fn check_conditions<F: Real, A: Amplitude<F> + ?Sized>(
    f: &A,
    n: F,
    window: ConditionWindow,
) -> Result<ConditionReport> {
    if n < F::lit(2.0) {
        return Err(Error::invalid("conditions are sampled on [N, 2N] with N >= 2"));
    }
    let xs: Vec<F> = (0..CONDITION_SAMPLES)
        .map(|i| {
            let t = F::from_usize(i).unwrap() / F::from_usize(CONDITION_SAMPLES - 1).unwrap();
            n * F::lit(2.0).powf(t)
        })
        .collect();

    let mut out = Vec::new();
    let ratio_check = |id: &str, ratio: &dyn Fn(F) -> F| -> ConditionResult {
        let vals: Vec<f64> = xs.iter().map(|&x| ratio(x).to_f64_lossy()).collect();
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let finite = vals.iter().all(|v| v.is_finite());
        let same_sign = min > 0.0 || max < 0.0;
        let mag_lo = min.abs().min(max.abs());
        let mag_hi = min.abs().max(max.abs());
        ConditionResult {
            id: id.to_string(),
            min,
            max,
            pass: finite && same_sign && mag_lo >= window.lo && mag_hi <= window.hi,
        }
    };

    // i) derivative evaluators defined and finite through order four
    let finite = xs
        .iter()
        .all(|&x| (0..=4).all(|k| f.deriv(k, x).is_finite()));
    out.push(ConditionResult {
        id: "i".into(),
        min: if finite { 1.0 } else { 0.0 },
        max: if finite { 1.0 } else { 0.0 },
        pass: finite,
    });

    // ii) positive and increasing: x f'(x) / f(x) > 0 with f > 0
    let mut ii = ratio_check("ii", &|x| x * f.deriv(1, x) / f.value(x));
    ii.pass = ii.pass && ii.min > 0.0 && xs.iter().all(|&x| f.value(x) > F::zero());
    out.push(ii);

    out.push(ratio_check("iii", &|x| f.value(x + x) / f.value(x)));
    for k in 1..=4usize {
        let id = format!("iv.{k}");
        out.push(ratio_check(&id, &|x| {
            x.powi(k as i32) * f.deriv(k, x) / f.value(x)
        }));
    }
    out.push(ratio_check("v", &|x| x * f.h(x) / f.value(x)));
    out.push(ratio_check("vi", &|x| x * x * f.h_prime(x) / f.value(x)));
    out.push(ratio_check("vii", &|x| {
        x * x * (F::lit(2.0) * f.deriv(2, x) - x * f.deriv(3, x)) / f.value(x)
    }));
    Ok(ConditionReport {
        n: n.to_f64_lossy(),
        samples: CONDITION_SAMPLES,
        conditions: out,
    })
}

/// `h(x)`, free-function form.
pub fn h<F: Real, A: Amplitude<F> + ?Sized>(f: &A, x: F) -> F {
    f.h(x)
}

/// The surrogate phase `g` anchored at `x0 = h^-1(l/q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalApproximation<F: Real> {
    pub x0: F,
    pub l: i64,
    pub q: u64,
    /// `h(x0) = l / q`.
    pub slope: F,
    /// `x0^2 f''(x0)`.
    pub logcoef: F,
    pub c: F,
    /// `2 pi x0^2 f''(x0)`.
    pub t: F,
}

/// Builds `g` for the fraction `l/q`.
pub fn build_approximation<F: Real, A: Amplitude<F> + ?Sized>(
    f: &A,
    l: i64,
    q: u64,
) -> Result<LocalApproximation<F>> {
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    if num_integer::gcd(l.unsigned_abs(), q) != 1 {
        return Err(Error::invalid(format!("{l}/{q} is not reduced")));
    }
    let slope = F::from_i64(l).unwrap() / F::from_u64_lossy(q);
    let x0 = f.invert_h(slope)?;
    Ok(approximation_at(f, x0, l, q))
}

/// `g` at a given anchor; `h(x0)` is taken to be exactly `l/q`.
pub fn approximation_at<F: Real, A: Amplitude<F> + ?Sized>(
    f: &A,
    x0: F,
    l: i64,
    q: u64,
) -> LocalApproximation<F> {
    let slope = F::from_i64(l).unwrap() / F::from_u64_lossy(q);
    let logcoef = x0 * (x0 * f.deriv(2, x0));
    let c = f.value(x0) - slope * x0 + logcoef * x0.ln();
    LocalApproximation {
        x0,
        l,
        q,
        slope,
        logcoef,
        c,
        t: F::TAU() * logcoef,
    }
}

impl<F: Real> LocalApproximation<F> {
    pub fn g(&self, x: F) -> F {
        self.slope * x - self.logcoef * x.ln() + self.c
    }

    /// `g^{(k)}(x)` for `k <= 4`.
    pub fn g_deriv(&self, k: usize, x: F) -> F {
        match k {
            0 => self.g(x),
            1 => self.slope - self.logcoef / x,
            _ => {
                // d^k/dx^k log x = (-1)^{k-1} (k-1)! / x^k
                let fact = (1..k).fold(F::one(), |acc, i| acc * F::from_usize(i).unwrap());
                let sign = if k.is_multiple_of(2) { -F::one() } else { F::one() };
                // divide stepwise: x^k alone overflows for anchors past 1e154
                let scaled = (0..k).fold(self.logcoef, |acc, _| acc / x);
                -scaled * sign * fact
            }
        }
    }

    /// `(f - g)^{(k)}(x)`.
    pub fn residual_deriv<A: Amplitude<F> + ?Sized>(&self, f: &A, k: usize, x: F) -> F {
        f.deriv(k, x) - self.g_deriv(k, x)
    }

    /// `e(g(n))`, computed directly from the value of `g`.
    pub fn e_g(&self, n: u64) -> Complex<F> {
        e(self.g(F::from_u64_lossy(n)))
    }

    /// `e(C) e(n l / q) n^{-iT}`.
    pub fn factorized(&self, n: u64) -> Complex<F> {
        let n_f = F::from_u64_lossy(n);
        let nl = (n as i128 * self.l as i128).rem_euclid(self.q as i128) as i64;
        let power = Complex::from_polar(F::one(), -self.t * n_f.ln());
        e(self.c) * e_ratio::<F>(nl, self.q) * power
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorProfile {
    /// `max |(f - g)'| (qQ)^2 f(N) / N`.
    pub d1_max: f64,
    /// `max |(f - g)''| qQN`.
    pub d2_max: f64,
    /// `min |(f - g)'''| N^3 / f(N)`.
    pub d3_min: f64,
    /// `max |(f - g)'''| N^3 / f(N)`.
    pub d3_max: f64,
}

/// Normalized sizes of `(f - g)', (f - g)'', (f - g)'''` on `(x1, x2]`.
pub fn approximation_error_profile<F: Real, A: Amplitude<F> + ?Sized>(
    f: &A,
    approx: &LocalApproximation<F>,
    interval: (F, F),
    samples: usize,
    n: F,
    big_q: F,
) -> ErrorProfile {
    let (x1, x2) = interval;
    let samples = samples.max(2);
    let fn_ = f.value(n).abs();
    let qq = F::from_u64_lossy(approx.q) * big_q;
    let mut p = ErrorProfile {
        d1_max: 0.0,
        d2_max: 0.0,
        d3_min: f64::INFINITY,
        d3_max: 0.0,
    };
    for i in 0..samples {
        let t = F::from_usize(i).unwrap() / F::from_usize(samples - 1).unwrap();
        let x = x1 + (x2 - x1) * t;
        let d1 = (approx.residual_deriv(f, 1, x).abs() * qq * qq * fn_ / n).to_f64_lossy();
        let d2 = (approx.residual_deriv(f, 2, x).abs() * qq * n).to_f64_lossy();
        let d3 = (approx.residual_deriv(f, 3, x).abs() * n * n * n / fn_).to_f64_lossy();
        p.d1_max = p.d1_max.max(d1);
        p.d2_max = p.d2_max.max(d2);
        p.d3_min = p.d3_min.min(d3);
        p.d3_max = p.d3_max.max(d3);
    }
    p
}
