//! Piatetski-Shapiro primes `p = floor(n^c)`: enumeration, the exact counting
//! identity, the saw-tooth function, and Hecke coefficient sums over them.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, small_primes, SIEVE_CEILING};
use crate::ddouble::DoubleDouble;
use crate::eigenforms::{CoefficientSequence, TauTable};
use crate::error::{Error, Result};

const BLOCK: u64 = 8192;
/// `f64` floors closer than this (or 16 ulp) to an integer go to double-double.
const F64_AMBIGUITY: f64 = 1e-9;
/// Relative double-double margin below which only an exact test can decide.
const DD_AMBIGUITY: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PSConfig {
    pub c: f64,
    pub gamma: f64,
    pub n: u64,
}

impl PSConfig {
    /// `1 < c < 12/11`, i.e. `11/12 < gamma < 1`.
    pub fn new(c: f64, n: u64) -> Result<Self> {
        let gamma = 1.0 / c;
        if !(c > 1.0 && c < 12.0 / 11.0 && gamma > 11.0 / 12.0 && gamma < 1.0) {
            return Err(Error::invalid(format!("need 1 < c < 12/11, got c = {c}")));
        }
        Self::diagnostic(c, n)
    }

    /// Any `1 <= c < 2`; `c = 1` enumerates the primes themselves.
    pub fn diagnostic(c: f64, n: u64) -> Result<Self> {
        if !(1.0..2.0).contains(&c) {
            return Err(Error::invalid(format!("diagnostic c must lie in [1, 2), got {c}")));
        }
        if n == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        let cfg = Self { c, gamma: 1.0 / c, n };
        let top = (n as f64).powf(c);
        if !(top <= SIEVE_CEILING as f64) {
            return Err(Error::ResourceLimit(format!("N^c = {top:.3e} exceeds the sieve ceiling 2^50")));
        }
        Ok(cfg)
    }

    /// `floor(N^c)`, the largest prime candidate.
    pub fn p_max(&self) -> Result<u64> {
        floor_pow(self.n, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PSRecord {
    pub n: u64,
    pub p: u64,
    pub is_prime: bool,
}

/// `n^c` as an exact integer when it is one.
fn exact_integer_power(n: u64, c: f64) -> Option<u64> {
    let (mant, exp, _) = num_traits::Float::integer_decode(c);
    // c = num / den with den a power of two
    let (num, den_log) = if exp >= 0 {
        (mant.checked_shl(exp as u32)?, 0u32)
    } else {
        let tz = mant.trailing_zeros().min((-exp) as u32);
        (mant >> tz, (-exp) as u32 - tz)
    };
    let fac = factorize(n).ok()?;
    fac.factors.iter().try_fold(1u64, |acc, &(p, e)| {
        if den_log >= 32 || e % (1u32 << den_log) != 0 {
            return None;
        }
        let k = u32::try_from((e >> den_log) as u64 * num).ok()?;
        acc.checked_mul(p.checked_pow(k)?)
    })
}

/// `floor(n^c)` for `c > 0`, exact or an error.
///
/// Plain `f64` first; near an integer the power is redone in double-double,
/// and if that is still too close the value is tested for being an exact
/// integer power.
pub fn floor_pow(n: u64, c: f64) -> Result<u64> {
    if n <= 1 || c == 1.0 {
        return Ok(n);
    }
    let x = (n as f64).powf(c);
    if !(x < 9.0e15) {
        return Err(Error::OutOfRange {
            what: "n^c",
            value: n,
            limit: 9_000_000_000_000_000,
        });
    }
    let fl = x.floor();
    let margin = F64_AMBIGUITY.max(16.0 * f64::EPSILON * x);
    if x - fl > margin && fl + 1.0 - x > margin {
        return Ok(fl as u64);
    }
    let y = DoubleDouble::from_u64(n).powf(c);
    let fl = y.floor();
    let r = (y - fl).to_f64();
    let margin = DD_AMBIGUITY * x.max(1.0);
    if r > margin && 1.0 - r > margin {
        return Ok(fl.to_f64() as u64);
    }
    match exact_integer_power(n, c) {
        Some(v) if (v as f64 - x).abs() <= 1.0 => Ok(v),
        _ => Err(Error::AmbiguousFloor { n }),
    }
}

/// `ceil(n^c)`.
pub fn ceil_pow(n: u64, c: f64) -> Result<u64> {
    let fl = floor_pow(n, c)?;
    if n <= 1 || c == 1.0 || exact_integer_power(n, c) == Some(fl) {
        Ok(fl)
    } else {
        Ok(fl + 1)
    }
}

fn prime_set(limit: u64) -> Vec<u64> {
    if limit < 2 {
        Vec::new()
    } else {
        small_primes(limit)
    }
}

/// All `n <= N` with `floor(n^c)` prime, ascending in `n`.
pub fn ps_enumerate(cfg: &PSConfig) -> Result<Vec<PSRecord>> {
    let primes = prime_set(cfg.p_max()?);
    let blocks: Vec<Result<Vec<PSRecord>>> = (0..cfg.n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK + 1;
            let hi = ((b + 1) * BLOCK).min(cfg.n);
            let mut out = Vec::new();
            for n in lo..=hi {
                let p = floor_pow(n, cfg.c)?;
                if primes.binary_search(&p).is_ok() {
                    out.push(PSRecord { n, p, is_prime: true });
                }
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}

/// `[-p^gamma] - [-(p+1)^gamma]`, the number of integers in `[p^gamma, (p+1)^gamma)`.
pub fn bracket_count(p: u64, gamma: f64) -> Result<u64> {
    Ok(ceil_pow(p + 1, gamma)? - ceil_pow(p, gamma)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundaryPrime {
    pub p: u64,
    pub bracket: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingReport {
    /// Primes `p <= N^c` with `ceil((p+1)^gamma) <= N`.
    pub interior_primes: usize,
    pub max_discrepancy: u64,
    /// Primes near `N^c`, where `n <= N` may clip the bracket.
    pub boundary: Vec<BoundaryPrime>,
    /// `#{n <= N : floor(n^c) prime}`.
    pub hits: usize,
    /// `sum_{p <= N^c} ([-p^gamma] - [-(p+1)^gamma])`.
    pub bracket_total: u64,
}

/// Compares `#{n <= N : floor(n^c) = p}` with the bracket for every prime `p <= N^c`.
pub fn counting_identity_check(cfg: &PSConfig) -> Result<CountingReport> {
    let records = ps_enumerate(cfg)?;
    let mut counts: HashMap<u64, u64> = HashMap::with_capacity(records.len());
    for r in &records {
        *counts.entry(r.p).or_default() += 1;
    }
    let primes = prime_set(cfg.p_max()?);
    let rows: Vec<Result<(u64, u64, u64, bool)>> = primes
        .par_iter()
        .map(|&p| {
            let bracket = bracket_count(p, cfg.gamma)?;
            let count = counts.get(&p).copied().unwrap_or(0);
            let interior = ceil_pow(p + 1, cfg.gamma)? <= cfg.n;
            Ok((p, bracket, count, interior))
        })
        .collect();
    let mut report = CountingReport {
        interior_primes: 0,
        max_discrepancy: 0,
        boundary: Vec::new(),
        hits: records.len(),
        bracket_total: 0,
    };
    for row in rows {
        let (p, bracket, count, interior) = row?;
        report.bracket_total += bracket;
        if interior {
            report.interior_primes += 1;
            report.max_discrepancy = report.max_discrepancy.max(bracket.abs_diff(count));
        } else {
            report.boundary.push(BoundaryPrime { p, bracket, count });
        }
    }
    Ok(report)
}

/// `psi(x) = x - [x] - 1`.
pub fn sawtooth(x: f64) -> f64 {
    x - x.floor() - 1.0
}

/// `-1/2 - sum_{j <= J} sin(2 pi j x) / (pi j)`, the truncated Fourier series of [`sawtooth`].
pub fn sawtooth_fourier(x: f64, big_j: u64) -> Result<f64> {
    if big_j == 0 {
        return Err(Error::invalid("J must be at least 1"));
    }
    let t = x - x.round();
    let s: f64 = (1..=big_j)
        .rev()
        .map(|j| {
            let jf = j as f64;
            (std::f64::consts::TAU * jf * t).sin() / (std::f64::consts::PI * jf)
        })
        .sum();
    Ok(-0.5 - s)
}

/// Frozen bound `|psi(x) - psi_J(x)| <= 1 / (2 pi J ||x||)` for `x` not an integer.
pub fn sawtooth_tail_bound(x: f64, big_j: u64) -> f64 {
    let dist = (x - x.round()).abs();
    1.0 / (std::f64::consts::TAU * big_j as f64 * dist)
}

fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = s + v;
        comp += if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
        s = t;
    }
    s + comp
}

/// `(p+1)^gamma - p^gamma` without cancellation.
pub fn gap_weight(p: u64, gamma: f64) -> f64 {
    let x = p as f64;
    x.powf(gamma) * (gamma * (1.0 / x).ln_1p()).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem3Report {
    pub n: u64,
    pub c: f64,
    /// `sum_{n <= N, [n^c] prime} a_{[n^c]}`.
    pub lhs: f64,
    /// `sum_{p <= N^c} ((p+1)^gamma - p^gamma) a_p`.
    pub main: f64,
    pub diff: f64,
    pub diff_over_n: f64,
}

fn theorem3_with(cfg: &PSConfig, a: impl Fn(u64) -> Result<f64> + Sync) -> Result<Theorem3Report> {
    let records = ps_enumerate(cfg)?;
    let lhs_terms = records.iter().map(|r| a(r.p)).collect::<Result<Vec<_>>>()?;
    let primes = prime_set(cfg.p_max()?);
    let main_terms = primes
        .par_iter()
        .map(|&p| Ok(gap_weight(p, cfg.gamma) * a(p)?))
        .collect::<Result<Vec<_>>>()?;
    let lhs = neumaier(lhs_terms.into_iter());
    let main = neumaier(main_terms.into_iter());
    Ok(Theorem3Report {
        n: cfg.n,
        c: cfg.c,
        lhs,
        main,
        diff: lhs - main,
        diff_over_n: (lhs - main) / cfg.n as f64,
    })
}

/// Both sides of the Piatetski-Shapiro transfer for `a_p`.
pub fn theorem3_check(cfg: &PSConfig, coeff: &CoefficientSequence) -> Result<Theorem3Report> {
    let p_max = cfg.p_max()?;
    if p_max > coeff.n_max() {
        return Err(Error::OutOfRange {
            what: "tau table n_max",
            value: CoefficientSequence::required_table_size(coeff.kind(), p_max),
            limit: coeff.table().map_or(0, |t| t.n_max()),
        });
    }
    theorem3_with(cfg, |p| coeff.get(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem5Report {
    pub n: u64,
    pub c: f64,
    pub ps_count: usize,
    /// `sum_{n <= N, [n^c] prime} lambda([n^c])^2`.
    pub sum_lambda_sq: f64,
    /// `N / (c log N)`.
    pub scale: f64,
    pub ratio: f64,
    /// `sum_{p <= N^c} ((p+1)^gamma - p^gamma) lambda(p)^2`.
    pub main_term: f64,
    pub diff_over_n: f64,
    /// Hits with `p^2` in the table, where `lambda(p)^2 = 1 + lambda(p^2)` is cross-checked.
    pub identity_checked: usize,
    /// `|sum lambda(p)^2 - (#hits + sum lambda(p^2))|` over those hits.
    pub identity_error: f64,
}

impl Theorem5Report {
    pub const CSV_HEADER: &'static str = "N,c,ps_count,sum_lambda_sq,main_term,ratio,diff_over_N";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e}",
            self.n, self.c, self.ps_count, self.sum_lambda_sq, self.main_term, self.ratio, self.diff_over_n
        )
    }
}

/// `sum lambda([n^c])^2 / (N / (c log N))`, with `lambda(p)^2` from `tau(p)` alone.
pub fn theorem5_ratio(cfg: &PSConfig, table: &TauTable) -> Result<Theorem5Report> {
    let p_max = cfg.p_max()?;
    if p_max > table.n_max() {
        return Err(Error::OutOfRange {
            what: "tau table n_max",
            value: p_max,
            limit: table.n_max(),
        });
    }
    if cfg.n < 2 {
        return Err(Error::invalid("N must be at least 2"));
    }
    let lsq = |p: u64| table.lambda(p).map(|l| l * l);
    let t3 = theorem3_with(cfg, lsq)?;
    let records = ps_enumerate(cfg)?;

    let mut direct = Vec::new();
    let mut route = Vec::new();
    for r in &records {
        if r.p.checked_mul(r.p).is_some_and(|s| s <= table.n_max()) {
            let (l2, one_plus) = table.lambda_square_identity(r.p)?;
            direct.push(l2);
            route.push(one_plus - 1.0);
        }
    }
    let identity_checked = direct.len();
    let identity_error = (neumaier(direct.into_iter()) - (identity_checked as f64 + neumaier(route.into_iter()))).abs();

    let nf = cfg.n as f64;
    let scale = nf / (cfg.c * nf.ln());
    Ok(Theorem5Report {
        n: cfg.n,
        c: cfg.c,
        ps_count: records.len(),
        sum_lambda_sq: t3.lhs,
        scale,
        ratio: t3.lhs / scale,
        main_term: t3.main,
        diff_over_n: t3.diff_over_n,
        identity_checked,
        identity_error,
    })
}
