//! `sum_{N < n <= N'} a_n e(f(n))`, directly and regrouped over Farey arcs.
//!
//! Phases are reduced mod 1 in double-double before `e(.)`: `f(N)` reaches
//! `N^{3/2}`, and a plain `f64` keeps only a handful of fractional digits
//! at that size.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitude::{approximation_at, approximation_error_profile, Amplitude, LocalApproximation, PowerAmplitude};
use crate::arith::primes_in;
use crate::ddouble::DoubleDouble;
use crate::eigenforms::CoefficientSequence;
use crate::error::{Error, Result};
use crate::farey::{check_partition, default_level, dissect_and_project, FareyArc, ProjectedInterval};
use crate::scalar::e;

/// `eta` in the admissibility window `N^{3/4 + eta} <= f(N) <= N^{3/2 - eta}`.
pub const ADMISSIBILITY_ETA: f64 = 0.01;
/// Frozen ceiling on `|S| / (N^{3/4} f(N)^{1/6})`.
pub const BOUND_CEILING: f64 = 10.0;

const BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum QPolicy {
    /// `Q = N^{1/2} / f(N)^{1/3}`.
    DefaultLevel,
    Explicit { q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "phase", rename_all = "kebab-case")]
pub enum SumPhase {
    Power(PowerAmplitude<f64>),
    /// Diagnostic `f(n) = theta n`; not dissectable.
    Linear { theta: f64 },
}

impl SumPhase {
    pub fn power(j: f64, gamma: f64) -> Result<Self> {
        Ok(Self::Power(PowerAmplitude::new(j, gamma)?))
    }

    /// `f(n)` in double-double.
    pub fn value_dd(&self, n: u64) -> DoubleDouble {
        let x = DoubleDouble::from_u64(n);
        match self {
            SumPhase::Power(p) => DoubleDouble::from_f64(p.j) * x.powf(p.gamma),
            SumPhase::Linear { theta } => DoubleDouble::from_f64(*theta) * x,
        }
    }

    /// `f(n) mod 1`.
    pub fn reduced(&self, n: u64) -> f64 {
        self.value_dd(n).fract()
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            SumPhase::Power(p) => p.value(x),
            SumPhase::Linear { theta } => theta * x,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SumRequest {
    pub coeff: CoefficientSequence,
    pub phase: SumPhase,
    pub n: u64,
    pub n_prime: u64,
    pub prime_only: bool,
    pub q_policy: QPolicy,
}

impl SumRequest {
    pub fn new(coeff: CoefficientSequence, phase: SumPhase, n: u64, n_prime: u64) -> Self {
        Self {
            coeff,
            phase,
            n,
            n_prime,
            prime_only: false,
            q_policy: QPolicy::DefaultLevel,
        }
    }

    pub fn prime_only(mut self, yes: bool) -> Self {
        self.prime_only = yes;
        self
    }

    pub fn with_q(mut self, policy: QPolicy) -> Self {
        self.q_policy = policy;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        if self.n_prime < self.n || self.n_prime > self.n.saturating_mul(2) {
            return Err(Error::invalid(format!(
                "need N <= N' <= 2N, got N = {}, N' = {}",
                self.n, self.n_prime
            )));
        }
        if self.n_prime > self.coeff.n_max() {
            let need = CoefficientSequence::required_table_size(self.coeff.kind(), self.n_prime);
            return Err(Error::OutOfRange {
                what: "tau table n_max",
                value: need,
                limit: self.coeff.table().map_or(0, |t| t.n_max()),
            });
        }
        Ok(())
    }

    /// Dissection level for this request.
    pub fn level(&self) -> Result<f64> {
        match (self.q_policy, &self.phase) {
            (QPolicy::Explicit { q }, _) => Ok(q),
            (QPolicy::DefaultLevel, SumPhase::Power(p)) => Ok(default_level(p, self.n as f64)),
            (QPolicy::DefaultLevel, SumPhase::Linear { .. }) => {
                Err(Error::invalid("linear phases have no default level"))
            }
        }
    }

    /// Summation indices in `(lo, hi]`, primes only if requested.
    fn indices(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        if hi <= lo {
            return Ok(Vec::new());
        }
        if self.prime_only {
            Ok(primes_in(lo, hi)?.primes)
        } else {
            Ok((lo + 1..=hi).collect())
        }
    }
}

/// Normalized sizes of `(f - g)', (f - g)'', (f - g)'''` over an arc, in the
/// units of [`approximation_error_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcDiagnostic {
    pub arc: FareyArc<f64>,
    pub interval: ProjectedInterval<f64>,
    pub n_terms: usize,
    pub subsum: Complex64,
    /// The same subsum through `e(C) e(nl/q) n^{-iT} e(f(n) - g(n))`.
    pub factorized: Complex64,
    /// `max_n |e(f(n)) - e(C) e(nl/q) n^{-iT} e(f(n) - g(n))|`.
    pub identity_error: f64,
    pub residual: ResidualNorms,
}

impl ArcDiagnostic {
    pub const CSV_HEADER: &'static str = "q,l,x0,m1,m2,subsum_re,subsum_im,residual_norms";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.6e};{:.6e};{:.6e}",
            self.arc.q,
            self.arc.l,
            self.interval.x0,
            self.interval.m1(),
            self.interval.m2(),
            self.subsum.re,
            self.subsum.im,
            self.residual.d1,
            self.residual.d2,
            self.residual.d3
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumResult {
    pub value: Complex64,
    pub n_terms: usize,
    /// `sum |a_n|` over the same terms.
    pub abs_sum: f64,
    /// `None` when `f(N)` is outside the admissibility window.
    pub bound_ratio: Option<f64>,
    pub per_arc: Option<Vec<ArcDiagnostic>>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    sum: Complex64,
    comp: Complex64,
    abs: f64,
    terms: usize,
}

impl Acc {
    fn add(&mut self, z: Complex64) {
        let step = |s: &mut f64, c: &mut f64, v: f64| {
            let t = *s + v;
            *c += if s.abs() >= v.abs() { (*s - t) + v } else { (v - t) + *s };
            *s = t;
        };
        step(&mut self.sum.re, &mut self.comp.re, z.re);
        step(&mut self.sum.im, &mut self.comp.im, z.im);
    }

    fn merge(&mut self, other: &Acc) {
        self.add(other.sum);
        self.add(other.comp);
        self.abs += other.abs;
        self.terms += other.terms;
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn sum_terms(req: &SumRequest, idx: &[u64]) -> Result<Acc> {
    let blocks: Vec<Result<Acc>> = idx
        .par_chunks(BLOCK as usize)
        .map(|chunk| {
            let mut acc = Acc::default();
            for &n in chunk {
                let a = req.coeff.get(n)?;
                acc.abs += a.abs();
                acc.terms += 1;
                if a != 0.0 {
                    acc.add(e(req.phase.reduced(n)) * a);
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = Acc::default();
    for b in blocks {
        total.merge(&b?);
    }
    Ok(total)
}

/// `|value| / (N^{3/4} f(N)^{1/6})` if `N^{3/4 + eta} <= f(N) <= N^{3/2 - eta}`.
pub fn bound_ratio(n: u64, f_n: f64, value: Complex64, eta: f64) -> Option<f64> {
    let x = n as f64;
    let f_n = f_n.abs();
    if !(f_n >= x.powf(0.75 + eta) && f_n <= x.powf(1.5 - eta)) {
        return None;
    }
    Some(value.norm() / (x.powf(0.75) * f_n.powf(1.0 / 6.0)))
}

fn ratio_for(req: &SumRequest, value: Complex64) -> Option<f64> {
    match req.phase {
        SumPhase::Power(_) => bound_ratio(req.n, req.phase.value(req.n as f64), value, ADMISSIBILITY_ETA),
        SumPhase::Linear { .. } => None,
    }
}

/// The sum evaluated term by term with compensated accumulation.
pub fn direct_sum(req: &SumRequest) -> Result<SumResult> {
    req.validate()?;
    let idx = req.indices(req.n, req.n_prime)?;
    let acc = sum_terms(req, &idx)?;
    let value = acc.value();
    Ok(SumResult {
        value,
        n_terms: acc.terms,
        abs_sum: acc.abs,
        bound_ratio: ratio_for(req, value),
        per_arc: None,
    })
}

/// `e(C) e(nl/q) n^{-iT} e(f(n) - g(n))` with `f(n) - g(n)` in double-double.
pub fn factorized_term(phase: &SumPhase, approx: &LocalApproximation<f64>, n: u64) -> Complex64 {
    let ln_n = (n as f64).ln();
    let g_lin = DoubleDouble::from_f64(approx.slope) * DoubleDouble::from_u64(n) + DoubleDouble::from_f64(approx.c);
    let resid = phase.value_dd(n) - g_lin + DoubleDouble::from_f64(approx.logcoef * ln_n);
    let nl = (n as i128 * approx.l as i128).rem_euclid(approx.q as i128) as i64;
    // n^{-iT} = e(-T log n / 2 pi) = e(-x0^2 f''(x0) log n)
    e(approx.c) * crate::scalar::e_ratio::<f64>(nl, approx.q) * e(-approx.logcoef * ln_n) * e(resid.fract())
}

/// The same sum, dissected over Farey arcs of level `Q` and regrouped.
///
/// Each arc is summed twice, directly and through the factorized form; the
/// returned value is the regrouped direct subsums.
pub fn farey_decomposed_sum(req: &SumRequest) -> Result<SumResult> {
    req.validate()?;
    let amp = match req.phase {
        SumPhase::Power(p) => p,
        SumPhase::Linear { .. } => return Err(Error::invalid("Farey regrouping needs a power phase")),
    };
    if req.n_prime == req.n {
        return Ok(SumResult {
            value: Complex64::new(0.0, 0.0),
            n_terms: 0,
            abs_sum: 0.0,
            bound_ratio: ratio_for(req, Complex64::new(0.0, 0.0)),
            per_arc: Some(Vec::new()),
        });
    }
    let level = req.level()?;
    let (nf, npf) = (req.n as f64, req.n_prime as f64);
    let parts = dissect_and_project(&amp, nf, npf, level)?;
    let intervals: Vec<_> = parts.iter().map(|p| p.1).collect();
    check_partition(&intervals, req.n, req.n_prime)?;

    let per_arc: Vec<Result<(ArcDiagnostic, Acc)>> = parts
        .par_iter()
        .map(|(arc, interval)| {
            let range = interval.integers();
            let (lo, hi) = (range.start().saturating_sub(1), *range.end());
            let idx = if range.is_empty() { Vec::new() } else { req.indices(lo, hi)? };
            let approx = approximation_at(&amp, interval.x0, arc.l, arc.q);
            let mut direct = Acc::default();
            let mut fact = Acc::default();
            let mut worst = 0.0f64;
            for &n in &idx {
                let a = req.coeff.get(n)?;
                direct.abs += a.abs();
                direct.terms += 1;
                let plain = e(req.phase.reduced(n));
                let split = factorized_term(&req.phase, &approx, n);
                worst = worst.max((plain - split).norm());
                if a != 0.0 {
                    direct.add(plain * a);
                    fact.add(split * a);
                }
            }
            let prof = approximation_error_profile(
                &amp,
                &approx,
                (interval.lo.max(nf), interval.hi.min(npf)),
                33,
                nf,
                level,
            );
            let diag = ArcDiagnostic {
                arc: *arc,
                interval: *interval,
                n_terms: idx.len(),
                subsum: direct.value(),
                factorized: fact.value(),
                identity_error: worst,
                residual: ResidualNorms {
                    d1: prof.d1_max,
                    d2: prof.d2_max,
                    d3: prof.d3_max,
                },
            };
            Ok((diag, direct))
        })
        .collect();

    let mut total = Acc::default();
    let mut diags = Vec::with_capacity(per_arc.len());
    for r in per_arc {
        let (d, acc) = r?;
        total.merge(&acc);
        diags.push(d);
    }
    let value = total.value();
    Ok(SumResult {
        value,
        n_terms: total.terms,
        abs_sum: total.abs,
        bound_ratio: ratio_for(req, value),
        per_arc: Some(diags),
    })
}
