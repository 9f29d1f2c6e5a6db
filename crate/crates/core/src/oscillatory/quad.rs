use std::sync::OnceLock;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{e, Real};

use super::Phase;

const GL_ORDER: usize = 16;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton on `P_16`.
fn gauss_legendre() -> &'static [(f64, f64); GL_ORDER] {
    static NODES: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = GL_ORDER;
        let mut out = [(0.0, 0.0); GL_ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

fn gauss_panel<F: Real>(g: &(impl Fn(F) -> Complex<F> + ?Sized), a: F, b: F) -> Complex<F> {
    let half = (b - a) / F::lit(2.0);
    let mid = (a + b) / F::lit(2.0);
    let mut acc = Complex::new(F::zero(), F::zero());
    for &(x, w) in gauss_legendre() {
        acc = acc + g(mid + half * F::lit(x)) * F::lit(w);
    }
    acc * half
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute tolerance on the whole integral.
    pub tol: f64,
    /// Total number of accepted plus rejected panels allowed.
    pub max_panels: usize,
    /// Target oscillation count per initial panel, `c` in `c / (1 + |phi'|)`.
    pub cycles_per_panel: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_panels: 4_000_000,
            cycles_per_panel: 1.0,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<F: Real> {
    pub value: Complex<F>,
    /// Sum of the per-panel refinement differences.
    pub error: F,
    pub panels: usize,
}

const MAX_DEPTH: u32 = 48;

/// Adaptive panel quadrature of a complex integrand.
///
/// `freq(x)` estimates the local oscillation rate `|phi'(x)|`; the interval
/// is first cut into panels of width `c / (1 + freq)`, then each panel is
/// bisected until a 16-point rule and its two halves agree within the
/// panel's share of `tol`.
pub fn integrate_fn<F, G, W>(g: G, freq: W, a: F, b: F, opts: &QuadOptions) -> Result<Integral<F>>
where
    F: Real,
    G: Fn(F) -> Complex<F> + Sync,
    W: Fn(F) -> F + Sync,
{
    if !(a < b) {
        if a == b {
            return Ok(Integral {
                value: Complex::new(F::zero(), F::zero()),
                error: F::zero(),
                panels: 0,
            });
        }
        return Err(Error::invalid(format!("integration bounds a = {a} > b = {b}")));
    }
    let c = F::lit(opts.cycles_per_panel);
    let mut cuts = vec![a];
    let mut x = a;
    while x < b {
        let w = c / (F::one() + freq(x).abs());
        x = if x + w >= b || (b - x - w) < w * F::lit(1e-3) { b } else { x + w };
        cuts.push(x);
        if cuts.len() > opts.max_panels {
            return Err(Error::BudgetExceeded {
                estimate_re: f64::NAN,
                estimate_im: f64::NAN,
                error_bound: f64::INFINITY,
            });
        }
    }
    let span = b - a;
    let tol = F::lit(opts.tol);
    let per_panel_budget = opts.max_panels / (cuts.len() - 1).max(1) + 64;

    let pieces: Vec<(Complex<F>, F, usize, bool)> = cuts
        .par_windows(2)
        .map(|w| adapt(&g, w[0], w[1], tol * (w[1] - w[0]) / span, per_panel_budget))
        .collect();

    let mut value = Complex::new(F::zero(), F::zero());
    let mut comp = Complex::new(F::zero(), F::zero());
    let (mut error, mut panels, mut ok) = (F::zero(), 0usize, true);
    for (v, err, n, good) in pieces {
        // Neumaier, componentwise
        value = neumaier(value, v, &mut comp);
        error = error + err;
        panels += n;
        ok &= good;
    }
    let value = value + comp;
    if !ok || panels > opts.max_panels || error > tol {
        return Err(Error::BudgetExceeded {
            estimate_re: value.re.to_f64_lossy(),
            estimate_im: value.im.to_f64_lossy(),
            error_bound: error.to_f64_lossy(),
        });
    }
    Ok(Integral { value, error, panels })
}

fn neumaier<F: Real>(sum: Complex<F>, x: Complex<F>, comp: &mut Complex<F>) -> Complex<F> {
    let step = |s: F, v: F, c: &mut F| {
        let t = s + v;
        *c = *c + if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
        t
    };
    let re = step(sum.re, x.re, &mut comp.re);
    let im = step(sum.im, x.im, &mut comp.im);
    Complex::new(re, im)
}

fn adapt<F: Real>(
    g: &(impl Fn(F) -> Complex<F> + Sync),
    a: F,
    b: F,
    tol: F,
    budget: usize,
) -> (Complex<F>, F, usize, bool) {
    // explicit stack, left halves processed first so the sum order is fixed
    let mut stack = vec![(a, b, gauss_panel(g, a, b), tol, 0u32, F::infinity())];
    let mut value = Complex::new(F::zero(), F::zero());
    let mut comp = Complex::new(F::zero(), F::zero());
    let mut error = F::zero();
    let mut panels = 0usize;
    let mut ok = true;
    let floor = F::epsilon() * F::lit(64.0);
    while let Some((u, v, whole, t, depth, parent)) = stack.pop() {
        panels += 1;
        let m = (u + v) / F::lit(2.0);
        let left = gauss_panel(g, u, m);
        let right = gauss_panel(g, m, v);
        let halves = left + right;
        let diff = (halves - whole).norm();
        let scale = (v - u) * g(m).norm() + halves.norm();
        let converged = diff <= t || diff <= floor * scale;
        // a resolved panel gains many digits per halving; one that does not is
        // at the noise level of the integrand (large reduced phases)
        let stalled = depth >= 2 && diff <= F::lit(1e-8) * scale && diff * F::lit(8.0) > parent;
        let exhausted = depth >= MAX_DEPTH || panels >= budget;
        if converged || stalled || exhausted {
            ok &= converged || stalled;
            value = neumaier(value, halves, &mut comp);
            error = error + diff;
            continue;
        }
        let half_t = t / F::lit(2.0);
        stack.push((m, v, right, half_t, depth + 1, diff));
        stack.push((u, m, left, half_t, depth + 1, diff));
    }
    (value + comp, error, panels, ok)
}

/// `∫_a^b e(phi(x)) dx`.
pub fn integrate<F: Real, P: Phase<F> + ?Sized>(
    phase: &P,
    a: F,
    b: F,
    opts: &QuadOptions,
) -> Result<Integral<F>> {
    integrate_fn(|x| e(phase.value(x)), |x| phase.deriv(1, x), a, b, opts)
}

/// `∫_a^b w(x) e(phi(x)) dx`.
pub fn integrate_weighted<F, P, W>(phase: &P, weight: W, a: F, b: F, opts: &QuadOptions) -> Result<Integral<F>>
where
    F: Real,
    P: Phase<F> + ?Sized,
    W: Fn(F) -> Complex<F> + Sync,
{
    integrate_fn(|x| weight(x) * e(phase.value(x)), |x| phase.deriv(1, x), a, b, opts)
}

#[cfg(test)]
mod tests {
    use super::super::PolyLogPhase;
    use super::*;

    #[test]
    fn nodes_integrate_polynomials() {
        let nodes = gauss_legendre();
        let wsum: f64 = nodes.iter().map(|n| n.1).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // exact through degree 31
        let x30: f64 = nodes.iter().map(|n| n.1 * n.0.powi(30)).sum();
        assert!((x30 - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn constant_phase() {
        let p = PolyLogPhase::polynomial(vec![0.0f64]);
        let r = integrate(&p, 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((r.value - Complex::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn linear_phase_closed_form() {
        let t = 3.7f64;
        let p = PolyLogPhase::linear(t);
        let r = integrate(&p, 0.0, 1.0, &QuadOptions::default()).unwrap();
        let want = (e(t) - Complex::new(1.0, 0.0)) / Complex::new(0.0, std::f64::consts::TAU * t);
        assert!((r.value - want).norm() < 1e-10);
    }

    #[test]
    fn quadratic_phase_refinement_oracle() {
        let p = PolyLogPhase::polynomial(vec![0.0f64, 0.0, 1.0]);
        let r = integrate(&p, 0.0, 30.0, &QuadOptions::default()).unwrap();
        // fixed 10x finer uniform Gauss panels, no adaptivity
        let g = |x: f64| e(x * x);
        let n = 10 * 60 * 30;
        let h = 30.0 / n as f64;
        let mut acc = Complex::new(0.0, 0.0);
        let mut comp = Complex::new(0.0, 0.0);
        for i in 0..n {
            acc = neumaier(acc, gauss_panel(&g, i as f64 * h, (i + 1) as f64 * h), &mut comp);
        }
        assert!((r.value - (acc + comp)).norm() < 1e-8);
        // Fresnel limit: ∫_0^∞ e(x^2) = (1 + i) / 4
        let inf = Complex::new(0.25, 0.25);
        assert!((r.value - inf).norm() < 0.01, "{} vs {inf}", r.value);
    }

    #[test]
    fn weighted_and_degenerate() {
        let p = PolyLogPhase::polynomial(vec![0.0f64]);
        let r = integrate_weighted(&p, |x| Complex::new(x, 0.0), 0.0, 2.0, &QuadOptions::default()).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-14);
        let z = integrate(&p, 1.0, 1.0, &QuadOptions::default()).unwrap();
        assert_eq!(z.value, Complex::new(0.0, 0.0));
        assert!(integrate(&p, 2.0, 1.0, &QuadOptions::default()).is_err());
    }

    #[test]
    fn budget_exceeded_reports_estimate() {
        let p = PolyLogPhase::polynomial(vec![0.0f64, 0.0, 1.0]);
        let opts = QuadOptions {
            tol: 1e-15,
            max_panels: 50,
            cycles_per_panel: 40.0,
        };
        match integrate(&p, 0.0, 30.0, &opts) {
            Err(Error::BudgetExceeded { error_bound, .. }) => assert!(error_bound > 0.0),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn halving_tol_stays_within_estimate() {
        // 20 fixed phases
        for i in 0..20 {
            let s = i as f64;
            let p = PolyLogPhase {
                coeffs: vec![0.1 * s, 1.0 + s, 0.05 * s, -0.001 * s],
                log_coef: 0.5 * (s - 10.0),
            };
            let (a, b) = (1.0, 3.0 + s);
            let coarse = integrate(&p, a, b, &QuadOptions::with_tol(1e-6)).unwrap();
            let fine = integrate(&p, a, b, &QuadOptions::with_tol(5e-7)).unwrap();
            assert!((coarse.value - fine.value).norm() <= coarse.error.max(1e-15), "phase {i}");
        }
    }

    #[test]
    fn single_precision() {
        let p = PolyLogPhase::linear(2.5f32);
        let r = integrate(&p, 0.0, 1.0, &QuadOptions::with_tol(1e-5)).unwrap();
        let want = (e(2.5f32) - Complex::new(1.0, 0.0)) / Complex::new(0.0, std::f32::consts::TAU * 2.5);
        assert!((r.value - want).norm() < 1e-5);
    }
}
