//! Verification batteries. Each check returns a serializable [`Check`]; the
//! suites group them the way the CLI `verify` subcommand exposes them.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::amplitude::{approximation_at, Amplitude, PowerAmplitude};
use crate::arith::{gcd, small_primes};
use crate::characters::{all_characters, gauss_sum};
use crate::eigenforms::{p_pow_11, CoefficientKind, CoefficientSequence, TauTable};
use crate::error::{Error, Result};
use crate::expsum::{direct_sum, farey_decomposed_sum, QPolicy, SumPhase, SumRequest, BOUND_CEILING};
use crate::farey::{check_partition, default_level, dissect_and_project, M_WINDOW_DELTA, M_WINDOW_K};
use crate::oscillatory::{
    exact_partial_sum, integrate, perron_battery, perron_scaling, perron_truncated, vdc_battery, vdc_bound_check,
    vdc_constant, ArcPhase, QuadOptions, VDC_C3,
};
use crate::piatetski::{counting_identity_check, theorem5_ratio, PSConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Farey,
    Oscillatory,
    Bounds,
    Ps,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Identities, Suite::Farey, Suite::Oscillatory, Suite::Bounds, Suite::Ps];
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Self::Identities),
            "farey" => Ok(Self::Farey),
            "oscillatory" => Ok(Self::Oscillatory),
            "bounds" => Ok(Self::Bounds),
            "ps" => Ok(Self::Ps),
            other => Err(Error::invalid(format!("unknown suite `{other}`"))),
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Identities => "identities",
            Self::Farey => "farey",
            Self::Oscillatory => "oscillatory",
            Self::Bounds => "bounds",
            Self::Ps => "ps",
        })
    }
}

/// `Small` runs in seconds; `Full` uses the acceptance sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    Small,
    Full,
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Self::Small),
            "full" => Ok(Self::Full),
            other => Err(Error::invalid(format!("unknown grid `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub scale: Scale,
    pub seed: u64,
    pub ps_c: f64,
    pub ps_n: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            scale: Scale::Small,
            seed: 1,
            ps_c: 1.05,
            ps_n: 10_000,
        }
    }
}

impl VerifyConfig {
    /// Tau-table size the suite needs.
    pub fn required_table(&self, suite: Suite) -> u64 {
        let full = self.scale == Scale::Full;
        match suite {
            Suite::Identities => {
                if full {
                    1_000_000
                } else {
                    100_000
                }
            }
            Suite::Farey => 20_000,
            Suite::Oscillatory => 0,
            Suite::Bounds => {
                if full {
                    200_000
                } else {
                    20_000
                }
            }
            Suite::Ps => {
                let grid_top = *self.theorem5_grid().last().unwrap_or(&0);
                let top = grid_top.max(self.ps_n);
                (top as f64).powf(self.ps_c).ceil() as u64 + 1
            }
        }
    }

    pub fn theorem5_grid(&self) -> Vec<u64> {
        match self.scale {
            Scale::Small => vec![1_000, 10_000],
            Scale::Full => vec![1_000, 10_000, 100_000],
        }
    }

    pub fn bounds_grid(&self) -> Vec<u64> {
        match self.scale {
            Scale::Small => vec![1_000, 10_000],
            Scale::Full => vec![1_000, 10_000, 100_000],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// The measured quantity the verdict is based on.
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, value: f64, limit: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            pass,
            value,
            limit,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: value={:.6e} limit={:.6e} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.limit,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub checks: Vec<Check>,
}

fn need_table(table: Option<&Arc<TauTable>>, n: u64) -> Result<&Arc<TauTable>> {
    match table {
        Some(t) if t.n_max() >= n => Ok(t),
        Some(t) => Err(Error::OutOfRange {
            what: "tau table n_max",
            value: n,
            limit: t.n_max(),
        }),
        None => Err(Error::OutOfRange {
            what: "tau table n_max",
            value: n,
            limit: 0,
        }),
    }
}

/// `tau(p)^2 - tau(p^2) = p^11` for `p <= p_max` with `p^2` tabulated, and
/// `tau(mn) = tau(m) tau(n)` on `pairs` random coprime pairs.
pub fn check_hecke_exact(table: &TauTable, p_max: u64, pairs: usize, seed: u64) -> Result<Check> {
    let mut primes = 0usize;
    let mut failures = 0usize;
    for p in small_primes(p_max) {
        if p * p > table.n_max() {
            break;
        }
        primes += 1;
        let tp = table.tau(p)?;
        let lhs = tp.checked_mul(tp).and_then(|s| s.checked_sub(table.tau(p * p).ok()?));
        if lhs != Some(p_pow_11(p)) {
            failures += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = table.n_max();
    let mut tested = 0usize;
    while tested < pairs {
        let m = rng.gen_range(2..=crate::arith::isqrt(top).max(2) * 8).min(top / 2);
        let n = rng.gen_range(2..=(top / m).max(2));
        if m * n > top || gcd(m, n) != 1 {
            continue;
        }
        tested += 1;
        let prod = table.tau(m)?.checked_mul(table.tau(n)?);
        if prod != Some(table.tau(m * n)?) {
            failures += 1;
        }
    }
    Ok(Check::new(
        "hecke-exact",
        failures == 0 && primes > 0,
        failures as f64,
        0.0,
        format!("primes={primes} pairs={tested} n_max={top}"),
    ))
}

/// `lambda(p)^2 = 1 + lambda(p^2)` in floating point for `p <= p_max`.
pub fn check_lambda_square(table: &TauTable, p_max: u64, tol: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for p in small_primes(p_max) {
        if p * p > table.n_max() {
            break;
        }
        let (a, b) = table.lambda_square_identity(p)?;
        worst = worst.max((a - b).abs());
        count += 1;
    }
    Ok(Check::new(
        "lambda-square-identity",
        worst <= tol && count > 0,
        worst,
        tol,
        format!("primes={count}"),
    ))
}

/// `e(nl/q) = (1/phi(q)) sum_chi chi(l) tau(conj chi) chi(n)` for every
/// `q <= q_max` and unit residues `n, l mod q`.
pub fn check_character_decomposition(q_max: u64, tol: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for q in 1..=q_max {
        let chars = all_characters::<f64>(q)?;
        let taus: Vec<Complex64> = chars.iter().map(|c| gauss_sum(&c.conj()).value).collect();
        let phi = chars.len() as f64;
        let units: Vec<i64> = (1..=q as i64).filter(|&a| gcd(a as u64, q) == 1).collect();
        for &n in &units {
            for &l in &units {
                let direct = crate::scalar::e_ratio::<f64>(n * l, q);
                let sum = chars
                    .iter()
                    .zip(&taus)
                    .fold(Complex64::new(0.0, 0.0), |acc, (chi, tau)| acc + chi.value(l) * tau * chi.value(n));
                worst = worst.max((direct - sum / phi).norm());
                cases += 1;
            }
        }
    }
    Ok(Check::new(
        "character-decomposition",
        worst <= tol,
        worst,
        tol,
        format!("q_max={q_max} cases={cases}"),
    ))
}

/// `| |tau(chi)| - sqrt(q) |` over primitive characters, `q <= q_max`.
pub fn check_gauss_sums(q_max: u64, tol: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut primitive = 0usize;
    for q in 1..=q_max {
        for chi in all_characters::<f64>(q)?.iter().filter(|c| c.is_primitive()) {
            worst = worst.max((gauss_sum(chi).value.norm() - (q as f64).sqrt()).abs());
            primitive += 1;
        }
    }
    Ok(Check::new(
        "gauss-sum-modulus",
        worst <= tol,
        worst,
        tol,
        format!("q_max={q_max} primitive={primitive}"),
    ))
}

/// Partition of `(N, 2N]` plus the `M` and `m` windows on interior arcs.
pub fn check_farey_dissection(n: u64, gamma: f64, j: f64, q: QPolicy) -> Result<Check> {
    let amp = PowerAmplitude::new(j, gamma)?;
    let nf = n as f64;
    let level = match q {
        QPolicy::DefaultLevel => default_level(&amp, nf),
        QPolicy::Explicit { q } => q,
    };
    let parts = dissect_and_project(&amp, nf, 2.0 * nf, level)?;
    let intervals: Vec<_> = parts.iter().map(|p| p.1).collect();
    let partition = check_partition(&intervals, n, 2 * n);
    let mut covered = 0u64;
    for iv in &intervals {
        let r = iv.integers();
        if !r.is_empty() {
            covered += r.end() - r.start() + 1;
        }
    }
    let f_n = amp.value(nf);
    let mut interior = 0usize;
    let mut worst_m = 0.0f64;
    let mut bad = 0usize;
    for (arc, iv) in parts.iter().filter(|(a, _)| a.is_interior()) {
        interior += 1;
        let (a, b) = iv.normalized_m(level, nf, f_n);
        worst_m = worst_m.max(a).max(b);
        if !arc.m_window_holds(M_WINDOW_DELTA) || !(a > 0.0 && b > 0.0) || a.max(b) > M_WINDOW_K {
            bad += 1;
        }
    }
    let pass = partition.is_ok() && covered == n && bad == 0;
    Ok(Check::new(
        "farey-dissection",
        pass,
        worst_m,
        M_WINDOW_K,
        format!(
            "N={n} gamma={gamma} j={j} Q={level:.6} arcs={} interior={interior} covered={covered} window_failures={bad}{}",
            parts.len(),
            partition.err().map(|e| format!(" partition_error=\"{e}\"")).unwrap_or_default()
        ),
    ))
}

/// Max over arcs and `n` of `|e(f(n)) - e(C) e(nl/q) n^{-iT} e(f(n) - g(n))|`.
pub fn check_factorized_identity(n: u64, gamma: f64, j: f64, levels: &[QPolicy], tol: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut arcs = 0usize;
    for &q in levels {
        let req = SumRequest::new(CoefficientSequence::unit(), SumPhase::power(j, gamma)?, n, 2 * n).with_q(q);
        let res = farey_decomposed_sum(&req)?;
        for d in res.per_arc.unwrap_or_default() {
            worst = worst.max(d.identity_error);
            arcs += 1;
        }
    }
    Ok(Check::new(
        "factorized-identity",
        worst <= tol,
        worst,
        tol,
        format!("N={n} gamma={gamma} j={j} levels={} arcs={arcs}", levels.len()),
    ))
}

/// `count` random requests with `N <= n_max`: Farey regrouping against direct summation.
pub fn check_regrouping(table: &Arc<TauTable>, count: usize, n_max: u64, seed: u64, tol: f64) -> Result<Check> {
    need_table(Some(table), 2 * n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let n = rng.gen_range(100..=n_max);
        let n_prime = rng.gen_range(n + 1..=2 * n);
        let gamma = rng.gen_range(0.9..0.99);
        let j = rng.gen_range(0.5..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let kind = if rng.gen_bool(0.5) {
            CoefficientKind::Unit
        } else {
            CoefficientKind::Hecke
        };
        let amp = PowerAmplitude::new(j, gamma)?;
        let nf = n as f64;
        let q_lo = (nf.powf(1.01) / amp.value(nf).abs()).max(2.0);
        let q_hi = nf.min(1000.0);
        let q = if rng.gen_bool(0.3) || q_lo >= q_hi {
            QPolicy::DefaultLevel
        } else {
            QPolicy::Explicit {
                q: (q_lo.ln() + rng.gen::<f64>() * (q_hi.ln() - q_lo.ln())).exp(),
            }
        };
        let req = SumRequest::new(
            CoefficientSequence::with_kind(kind, Some(table.clone()))?,
            SumPhase::Power(amp),
            n,
            n_prime,
        )
        .prime_only(rng.gen_bool(0.5))
        .with_q(q);
        let d = direct_sum(&req)?.value;
        let f = farey_decomposed_sum(&req)?.value;
        worst = worst.max((d - f).norm() / (1.0 + d.norm()));
    }
    Ok(Check::new(
        "farey-regrouping",
        worst <= tol,
        worst,
        tol,
        format!("requests={count} n_max={n_max} seed={seed}"),
    ))
}

/// Mean Perron error ratio between `T0` and `2 T0` on the seeded battery.
pub fn check_perron_scaling(count: usize, seed: u64, t0: f64) -> Result<Check> {
    let battery = perron_battery(count, seed);
    let s = perron_scaling(&battery, t0, &QuadOptions::with_tol(1e-10))?;
    Ok(Check::new(
        "perron-scaling",
        (1.5..=3.0).contains(&s.factor),
        s.factor,
        1.5,
        format!(
            "cases={} T0={t0} mean_error={:.6e} mean_error_2T0={:.6e} window=[1.5,3]",
            battery.len(),
            s.mean_error,
            s.mean_error_doubled
        ),
    ))
}

/// Absolute Perron error on the two fixed setups at `T0`.
pub fn check_perron_fixtures(t0: f64, tol: f64) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (setup, u) in perron_battery(0, 0) {
        let s = setup.with_t0(t0);
        let approx = perron_truncated(&s, u, &QuadOptions::with_tol(1e-10))?.re;
        let exact = exact_partial_sum(&s.coeffs, s.x1, u);
        worst = worst.max((approx - exact).abs());
        parts.push(format!("{approx:.6}/{exact}"));
    }
    Ok(Check::new(
        "perron-fixtures",
        worst <= tol,
        worst,
        tol,
        format!("T0={t0} truncated/exact={}", parts.join(",")),
    ))
}

/// `|∫ e(phi)| Lambda^{1/k} <= c_k` on `count` seeded cases.
pub fn check_vdc_battery(k: usize, count: usize, seed: u64) -> Result<Check> {
    let c = vdc_constant(k).ok_or_else(|| Error::invalid(format!("no constant for k = {k}")))?;
    let mut worst = 0.0f64;
    for case in vdc_battery(k, count, seed) {
        let r = vdc_bound_check(&case.phase, k, case.a, case.b, &QuadOptions::with_tol(1e-10))?;
        worst = worst.max(r.ratio);
    }
    Ok(Check::new(
        &format!("vdc-k{k}"),
        worst <= c,
        worst,
        c,
        format!("cases={count} seed={seed}"),
    ))
}

#[derive(Debug, Clone, Copy, Default)]
struct ArcStats {
    /// `max |∫| f(N)^{1/3} / N` at the default level.
    scaled_default: f64,
    /// The same at the extra levels.
    scaled_extra: f64,
    /// `max |∫| Lambda^{1/3}`.
    lemma: f64,
    integrals: usize,
    degenerate: usize,
}

/// Arc integrals `∫_I e(f - g + (t / 2 pi) log u) du` over the projected
/// intervals, at the default level and at `extra_levels`.
fn arc_integrals(cases: &[(u64, f64, f64)], extra_levels: &[f64], ts: &[f64]) -> Result<ArcStats> {
    let mut st = ArcStats::default();
    for &(n, gamma, j) in cases {
        let amp = PowerAmplitude::new(j, gamma)?;
        let nf = n as f64;
        let scale = nf / amp.value(nf).abs().cbrt();
        let default = default_level(&amp, nf);
        for level in std::iter::once(default).chain(extra_levels.iter().copied()) {
            for (arc, iv) in dissect_and_project(&amp, nf, 2.0 * nf, level)? {
                let (a, b) = (iv.lo.max(nf), iv.hi.min(2.0 * nf));
                if !(a < b) {
                    continue;
                }
                let approx = approximation_at(&amp, iv.x0, arc.l, arc.q);
                for &t in ts {
                    let phase = ArcPhase { f: &amp, approx, t };
                    // f - g cancels ~N^gamma, so the integrand carries ~1e-12
                    // noise per unit length; the scales tested are ~1e2 and up
                    let opts = QuadOptions::with_tol(1e-9 * (1.0 + b - a));
                    let v = integrate(&phase, a, b, &opts)?.value.norm() / scale;
                    if level == default {
                        st.scaled_default = st.scaled_default.max(v);
                    } else {
                        st.scaled_extra = st.scaled_extra.max(v);
                    }
                    match vdc_bound_check(&phase, 3, a, b, &opts) {
                        Ok(r) => st.lemma = st.lemma.max(r.ratio),
                        Err(Error::DegeneratePhase { .. }) => st.degenerate += 1,
                        Err(e) => return Err(e),
                    }
                    st.integrals += 1;
                }
            }
        }
    }
    Ok(st)
}

/// `|∫_I e(f - g + (t / 2 pi) log u)| <= c_3 N / f(N)^{1/3}` on every arc of
/// the default level `Q = N^{1/2} / f(N)^{1/3}`.
pub fn check_vdc_arc_instance(n: u64, gamma: f64, j: f64, ts: &[f64]) -> Result<Check> {
    let st = arc_integrals(&[(n, gamma, j)], &[], ts)?;
    Ok(Check::new(
        "vdc-arc-instance",
        st.scaled_default <= VDC_C3,
        st.scaled_default,
        VDC_C3,
        format!(
            "N={n} gamma={gamma} j={j} t={ts:?} integrals={} lemma_ratio_max={:.6}",
            st.integrals, st.lemma
        ),
    ))
}

/// `|∫| Lambda^{1/3} <= c_3` for the arc phases over several `(N, gamma, j)`
/// and levels; the `N / f(N)^{1/3}`-scaled sizes are reported alongside.
pub fn check_vdc_arc_sweep(cases: &[(u64, f64, f64)], extra_levels: &[f64], ts: &[f64]) -> Result<Check> {
    let st = arc_integrals(cases, extra_levels, ts)?;
    Ok(Check::new(
        "vdc-arc-sweep",
        st.lemma <= VDC_C3,
        st.lemma,
        VDC_C3,
        format!(
            "cases={} extra_levels={extra_levels:?} integrals={} degenerate={} \
             scaled_max_default_level={:.6} scaled_max_extra_levels={:.6}",
            cases.len(),
            st.integrals,
            st.degenerate,
            st.scaled_default,
            st.scaled_extra
        ),
    ))
}

/// Interior counting-identity discrepancy at `(c, N)`.
pub fn check_counting_identity(c: f64, n: u64) -> Result<Check> {
    let rep = counting_identity_check(&PSConfig::new(c, n)?)?;
    Ok(Check::new(
        "ps-counting-identity",
        rep.max_discrepancy == 0,
        rep.max_discrepancy as f64,
        0.0,
        format!(
            "c={c} N={n} interior_primes={} boundary_flagged={} hits={}",
            rep.interior_primes,
            rep.boundary.len(),
            rep.hits
        ),
    ))
}

/// `sum lambda([n^c])^2 / (N / (c log N))` on a grid: in `[0.7, 1.3]` at the
/// top and `|ratio - 1|` non-increasing.
pub fn check_theorem5(table: &TauTable, c: f64, grid: &[u64]) -> Result<Check> {
    let mut ratios = Vec::new();
    let mut identity = 0.0f64;
    for &n in grid {
        let rep = theorem5_ratio(&PSConfig::new(c, n)?, table)?;
        ratios.push(rep.ratio);
        identity = identity.max(rep.identity_error);
    }
    let last = *ratios.last().ok_or_else(|| Error::invalid("empty grid"))?;
    let monotone = ratios.windows(2).all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs());
    let pass = (0.7..=1.3).contains(&last) && monotone && identity <= 1e-10;
    Ok(Check::new(
        "ps-theorem5-ratio",
        pass,
        last,
        1.0,
        format!(
            "c={c} N={grid:?} ratios=[{}] abs_dev_non_increasing={monotone} identity_route_error={identity:.3e}",
            ratios.iter().map(|r| format!("{r:.6}")).collect::<Vec<_>>().join(",")
        ),
    ))
}

/// Bound ratios `|S| / (N^{3/4} f(N)^{1/6})` over the theorem grid.
pub fn check_bound_grid(table: &Arc<TauTable>, grid: &[u64]) -> Result<Check> {
    let mut maxima = Vec::new();
    let mut not_applicable = 0usize;
    for &n in grid {
        let mut worst = 0.0f64;
        for kind in [CoefficientKind::Unit, CoefficientKind::Hecke] {
            for prime_only in [false, true] {
                for gamma in [0.92, 0.95] {
                    for j in [1.0, 2.0] {
                        let coeff = CoefficientSequence::with_kind(kind, Some(table.clone()))?;
                        let req = SumRequest::new(coeff, SumPhase::power(j, gamma)?, n, 2 * n).prime_only(prime_only);
                        match direct_sum(&req)?.bound_ratio {
                            Some(r) => worst = worst.max(r),
                            None => not_applicable += 1,
                        }
                    }
                }
            }
        }
        maxima.push(worst);
    }
    let top = maxima.iter().copied().fold(0.0, f64::max);
    let non_growing = maxima.windows(2).all(|w| w[1] <= w[0]);
    Ok(Check::new(
        "bound-ratio-grid",
        top <= BOUND_CEILING && non_growing,
        top,
        BOUND_CEILING,
        format!(
            "N={grid:?} max_per_N=[{}] non_growing={non_growing} not_applicable={not_applicable}",
            maxima.iter().map(|r| format!("{r:.6}")).collect::<Vec<_>>().join(",")
        ),
    ))
}

/// `(N, gamma, j)` for the arc-integral sweep.
pub const ARC_CASES: [(u64, f64, f64); 6] = [
    (1_000, 0.95, 1.0),
    (10_000, 0.95, 1.0),
    (100_000, 0.95, 1.0),
    (10_000, 0.92, 1.0),
    (10_000, 0.95, 2.0),
    (100_000, 0.92, 2.0),
];
pub const ARC_TS: [f64; 5] = [0.0, 10.0, -10.0, 100.0, -100.0];

const EXPLICIT_LEVELS: [f64; 4] = [20.0, 100.0, 300.0, 1000.0];

fn levels() -> Vec<QPolicy> {
    std::iter::once(QPolicy::DefaultLevel)
        .chain(EXPLICIT_LEVELS.iter().map(|&q| QPolicy::Explicit { q }))
        .collect()
}

/// Runs every check of `suite`; `table` must cover [`VerifyConfig::required_table`].
pub fn run_suite(suite: Suite, cfg: &VerifyConfig, table: Option<&Arc<TauTable>>) -> Result<SuiteReport> {
    let full = cfg.scale == Scale::Full;
    let mut checks = Vec::new();
    match suite {
        Suite::Identities => {
            let t = need_table(table, cfg.required_table(suite))?;
            checks.push(check_hecke_exact(t, 1000, if full { 10_000 } else { 1000 }, cfg.seed)?);
            checks.push(check_lambda_square(t, 1000, 1e-10)?);
            checks.push(check_character_decomposition(if full { 60 } else { 30 }, 1e-10)?);
            checks.push(check_gauss_sums(if full { 200 } else { 60 }, 1e-9)?);
        }
        Suite::Farey => {
            let t = need_table(table, cfg.required_table(suite))?;
            for q in levels() {
                checks.push(check_farey_dissection(10_000, 0.95, 1.0, q)?);
            }
            checks.push(check_factorized_identity(10_000, 0.95, 1.0, &levels(), 1e-10)?);
            checks.push(check_regrouping(t, if full { 50 } else { 10 }, 10_000, cfg.seed, 1e-9)?);
        }
        Suite::Oscillatory => {
            let (count, t0) = if full { (100, 500.0) } else { (20, 250.0) };
            checks.push(check_perron_scaling(count, cfg.seed, t0)?);
            checks.push(check_perron_fixtures(if full { 1e4 } else { 2e3 }, 2e-2)?);
            for k in 1..=3 {
                checks.push(check_vdc_battery(k, if full { 100 } else { 20 }, cfg.seed)?);
            }
            checks.push(check_vdc_arc_instance(10_000, 0.95, 1.0, &ARC_TS)?);
            checks.push(check_vdc_arc_sweep(&ARC_CASES, &[100.0], &ARC_TS)?);
        }
        Suite::Bounds => {
            let t = need_table(table, cfg.required_table(suite))?;
            checks.push(check_bound_grid(t, &cfg.bounds_grid())?);
        }
        Suite::Ps => {
            let t = need_table(table, cfg.required_table(suite))?;
            checks.push(check_counting_identity(cfg.ps_c, cfg.ps_n)?);
            checks.push(check_theorem5(t, cfg.ps_c, &cfg.theorem5_grid())?);
        }
    }
    Ok(SuiteReport {
        suite,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenforms::compute_tau;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("full".parse::<Scale>().unwrap(), Scale::Full);
    }

    #[test]
    fn identities_small() {
        let t = Arc::new(compute_tau(10_000).unwrap());
        let c = check_hecke_exact(&t, 1000, 200, 3).unwrap();
        assert!(c.pass, "{}", c.line());
        assert!(c.detail.contains("primes=25"));
        assert!(check_lambda_square(&t, 100, 1e-10).unwrap().pass);
        assert!(check_character_decomposition(12, 1e-10).unwrap().pass);
        assert!(check_gauss_sums(30, 1e-9).unwrap().pass);
    }

    #[test]
    fn missing_table_is_out_of_range() {
        let t = Arc::new(compute_tau(100).unwrap());
        let cfg = VerifyConfig::default();
        assert!(matches!(
            run_suite(Suite::Bounds, &cfg, Some(&t)),
            Err(Error::OutOfRange { value: 20_000, .. })
        ));
        assert!(run_suite(Suite::Identities, &cfg, None).is_err());
    }

    #[test]
    fn check_line_format() {
        let c = Check::new("x", false, 1.0, 2.0, "d".into());
        assert_eq!(c.line(), "FAIL x: value=1.000000e0 limit=2.000000e0 d");
    }
}
