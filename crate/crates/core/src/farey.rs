//! Farey dissection of an interval of frequencies and projection of the arcs
//! back to `n`-space through `h^-1`.
//!
//! Arc endpoints are exact: either the mediant of two Farey neighbours, kept
//! as an integer pair, or one of the two ends of the dissected interval.
//! Disjointness and cover are therefore exact properties of the output, and
//! floats only appear once an endpoint is pushed through `h^-1`.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::float::FloatCore;
use serde::Serialize;

use crate::amplitude::Amplitude;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest Farey order accepted by [`dissect`].
pub const MAX_ORDER: u64 = 10_000_000;
/// Upper limit on the number of arcs one dissection may produce.
pub const MAX_ARCS: usize = 50_000_000;

/// `m1, m2 <= K N^2 / (q Q f(N))` for interior arcs of the power family.
///
/// Frozen from a sweep at `N = 1e4`, `gamma = 0.95`, `Q` up to `1e3`: the
/// largest normalized `m` was 45.46, against the analytic ceiling
/// `2^(2 - gamma) / (gamma^2 (1 - gamma)) = 45.7`.
pub const M_WINDOW_K: f64 = 48.0;
/// Slack on `M1, M2 in [1/2, 1]`.
pub const M_WINDOW_DELTA: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Endpoint<F: Real> {
    /// The mediant `num/den` of two consecutive Farey fractions.
    Mediant { num: i64, den: u64 },
    /// The left end `a` of the dissected interval.
    Lower { value: F },
    /// The right end `b` of the dissected interval.
    Upper { value: F },
}

impl<F: Real> Endpoint<F> {
    pub fn value(&self) -> F {
        match *self {
            Endpoint::Mediant { num, den } => F::from_i64(num).unwrap() / F::from_u64_lossy(den),
            Endpoint::Lower { value } | Endpoint::Upper { value } => value,
        }
    }

    pub fn is_clip(&self) -> bool {
        !matches!(self, Endpoint::Mediant { .. })
    }
}

/// The arc `[left, right)` owned by the reduced fraction `l/q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FareyArc<F: Real> {
    pub l: i64,
    pub q: u64,
    pub left: Endpoint<F>,
    pub right: Endpoint<F>,
    /// Dissection level `Q`.
    pub level: F,
}

impl<F: Real> FareyArc<F> {
    pub fn center(&self) -> F {
        F::from_i64(self.l).unwrap() / F::from_u64_lossy(self.q)
    }

    pub fn arc_left(&self) -> F {
        self.left.value()
    }

    pub fn arc_right(&self) -> F {
        self.right.value()
    }

    pub fn length(&self) -> F {
        self.arc_right() - self.arc_left()
    }

    /// `M1 = (l/q - left) q Q`.
    pub fn m1(&self) -> F {
        (self.center() - self.arc_left()) * F::from_u64_lossy(self.q) * self.level
    }

    /// `M2 = (right - l/q) q Q`.
    pub fn m2(&self) -> F {
        (self.arc_right() - self.center()) * F::from_u64_lossy(self.q) * self.level
    }

    pub fn is_clipped(&self) -> bool {
        self.left.is_clip() || self.right.is_clip()
    }

    pub fn is_interior(&self) -> bool {
        !self.is_clipped()
    }

    /// `M1` and `M2` within `[1/2 - delta, 1 + delta]`.
    pub fn m_window_holds(&self, delta: f64) -> bool {
        let (lo, hi) = (F::lit(0.5 - delta), F::lit(1.0 + delta));
        let (m1, m2) = (self.m1(), self.m2());
        m1 >= lo && m1 <= hi && m2 >= lo && m2 <= hi
    }
}

/// Exact ordering of `num/den` against a float.
pub fn cmp_fraction<F: Real>(num: i64, den: u64, x: F) -> Ordering {
    let xf = x.to_f64_lossy();
    if xf == 0.0 {
        return num.cmp(&0);
    }
    let (mant, exp, sign) = FloatCore::integer_decode(xf);
    let a = num as i128;
    let b = den as i128;
    let m = sign as i128 * mant as i128;
    if exp >= 0 {
        match shl_checked(b * m, exp as u32) {
            Some(rhs) => a.cmp(&rhs),
            // |rhs| >= 2^126 > |a|
            None => 0.cmp(&m),
        }
    } else {
        match shl_checked(a, (-exp) as u32) {
            Some(lhs) => lhs.cmp(&(b * m)),
            // |lhs| >= 2^126 > |b m|
            None => a.cmp(&0),
        }
    }
}

fn shl_checked(v: i128, s: u32) -> Option<i128> {
    if v == 0 {
        return Some(0);
    }
    if s >= 126 {
        return None;
    }
    let r = v << s;
    (r >> s == v).then_some(r)
}

fn cmp_fractions(a: (i64, u64), b: (i64, u64)) -> Ordering {
    (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128))
}

fn order_of(level: f64) -> Result<u64> {
    if !(level >= 1.0) || !level.is_finite() {
        return Err(Error::invalid(format!("Q = {level} must be at least 1")));
    }
    let n = level.floor() as u64;
    if n > MAX_ORDER {
        return Err(Error::ResourceLimit(format!(
            "Farey order {n} exceeds {MAX_ORDER}"
        )));
    }
    Ok(n)
}

/// Successor of `l/q` in the Farey sequence of order `floor(Q)`, extended to
/// all of the real line.
pub fn next_farey(l: i64, q: u64, level: f64) -> Result<(i64, u64)> {
    let n = order_of(level)?;
    if q == 0 || q > n {
        return Err(Error::Precondition(format!("q = {q} not in [1, {n}]")));
    }
    if Integer::gcd(&l.unsigned_abs(), &q) != 1 {
        return Err(Error::Precondition(format!("{l}/{q} is not reduced")));
    }
    let (qi, ni) = (q as i128, n as i128);
    // the successor x/y has x q - l y = 1, i.e. l y = -1 mod q, with y maximal
    let inv = Integer::extended_gcd(&(l as i128).rem_euclid(qi), &qi).x;
    let y0 = (-inv).rem_euclid(qi);
    // y0 < q <= n, so the quotient is already a floor
    let y = y0 + qi * ((ni - y0) / qi);
    let x = (1 + l as i128 * y) / qi;
    Ok((x as i64, y as u64))
}

/// Largest fraction of order `n` that is `<= a`.
fn floor_fraction<F: Real>(a: F, n: u64) -> (i64, u64) {
    let mut best = (i64::MIN, 1u64);
    for q in 1..=n {
        let mut l = (a * F::from_u64_lossy(q)).floor().to_f64_lossy() as i64;
        while cmp_fraction(l, q, a) == Ordering::Greater {
            l -= 1;
        }
        while cmp_fraction(l + 1, q, a) != Ordering::Greater {
            l += 1;
        }
        if best.0 == i64::MIN || cmp_fractions((l, q), best) == Ordering::Greater {
            best = (l, q);
        }
    }
    let g = Integer::gcd(&best.0.unsigned_abs(), &best.1);
    (best.0 / g as i64, best.1 / g)
}

/// Farey dissection of level `Q` of `[a, b)`.
///
/// Every reduced `l/q` with `q <= Q` owns the arc between its mediants with
/// its two neighbours; arcs are intersected with `[a, b)` and those left
/// empty are dropped. Arcs come back in increasing order.
pub fn dissect<F: Real>(a: F, b: F, level: F) -> Result<Vec<FareyArc<F>>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("interval ends must be finite"));
    }
    if b <= a {
        return Err(Error::invalid(format!("empty interval [{a}, {b})")));
    }
    let n = order_of(level.to_f64_lossy())?;
    let reach = a.abs().max(b.abs()).to_f64_lossy() * n as f64;
    if reach > 1e17 {
        return Err(Error::invalid("interval too far from the origin for this order"));
    }
    let lf = level.to_f64_lossy();
    let mediant = |x: (i64, u64), y: (i64, u64)| (x.0 + y.0, x.1 + y.1);

    let lower = floor_fraction(a, n);
    let upper = next_farey(lower.0, lower.1, lf)?;
    let m = mediant(lower, upper);
    let (mut cur, mut succ) = if cmp_fraction(m.0, m.1, a) == Ordering::Greater {
        (lower, upper)
    } else {
        (upper, next_farey(upper.0, upper.1, lf)?)
    };

    let mut arcs = Vec::new();
    let mut left = Endpoint::Lower { value: a };
    loop {
        let m = mediant(cur, succ);
        let done = cmp_fraction(m.0, m.1, b) != Ordering::Less;
        let right = if done {
            Endpoint::Upper { value: b }
        } else {
            Endpoint::Mediant { num: m.0, den: m.1 }
        };
        arcs.push(FareyArc {
            l: cur.0,
            q: cur.1,
            left,
            right,
            level,
        });
        if done {
            break;
        }
        if arcs.len() >= MAX_ARCS {
            return Err(Error::ResourceLimit(format!(
                "dissection needs more than {MAX_ARCS} arcs"
            )));
        }
        left = right;
        cur = succ;
        succ = next_farey(succ.0, succ.1, lf)?;
    }
    Ok(arcs)
}

/// Direction of `h` on the working interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Decreasing,
    Increasing,
}

pub fn orientation<F: Real, A: Amplitude<F> + ?Sized>(f: &A, n: F, n_prime: F) -> Orientation {
    if f.h(n) > f.h(n_prime) {
        Orientation::Decreasing
    } else {
        Orientation::Increasing
    }
}

/// The image `(lo, hi]` of an arc under `h^-1`, anchored at `x0 = h^-1(l/q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectedInterval<F: Real> {
    pub l: i64,
    pub q: u64,
    pub x0: F,
    /// False when `l/q` lies outside the range of `h` (clipped arcs only);
    /// `x0` is then the nearer interval end.
    pub anchored: bool,
    pub lo: F,
    pub hi: F,
}

impl<F: Real> ProjectedInterval<F> {
    /// `x0 - lo`; negative when a clipped arc's anchor falls outside.
    pub fn m1(&self) -> F {
        self.x0 - self.lo
    }

    /// `hi - x0`; negative when a clipped arc's anchor falls outside.
    pub fn m2(&self) -> F {
        self.hi - self.x0
    }

    pub fn contains(&self, x: F) -> bool {
        x > self.lo && x <= self.hi
    }

    /// Integers in `(lo, hi]`, as an inclusive range that may be empty.
    pub fn integers(&self) -> std::ops::RangeInclusive<u64> {
        let first = self.lo.floor().to_f64_lossy().max(-1.0) as i64 + 1;
        let last = self.hi.floor().to_f64_lossy() as i64;
        if last < first || last < 0 {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        first.max(0) as u64..=last as u64
    }

    /// `(m1, m2) q Q f(N) / N^2`.
    pub fn normalized_m(&self, level: F, n: F, f_n: F) -> (F, F) {
        let s = F::from_u64_lossy(self.q) * level * f_n / (n * n);
        (self.m1() * s, self.m2() * s)
    }
}

/// Projects an arc of `[h(N'), h(N))` (or `[h(N), h(N'))` when `h` increases)
/// back to a sub-interval of `(N, N']`.
pub fn project<F: Real, A: Amplitude<F> + ?Sized>(
    arc: &FareyArc<F>,
    f: &A,
    n: F,
    n_prime: F,
) -> Result<ProjectedInterval<F>> {
    let orient = orientation(f, n, n_prime);
    let map = |e: &Endpoint<F>| -> Result<F> {
        Ok(match (e, orient) {
            (Endpoint::Lower { .. }, Orientation::Decreasing) => n_prime,
            (Endpoint::Lower { .. }, Orientation::Increasing) => n,
            (Endpoint::Upper { .. }, Orientation::Decreasing) => n,
            (Endpoint::Upper { .. }, Orientation::Increasing) => n_prime,
            (Endpoint::Mediant { .. }, _) => f.invert_h(e.value())?,
        })
    };
    let (xl, xr) = (map(&arc.left)?, map(&arc.right)?);
    let (lo, hi) = match orient {
        Orientation::Decreasing => (xr, xl),
        Orientation::Increasing => (xl, xr),
    };
    let (x0, anchored) = match f.invert_h(arc.center()) {
        Ok(x) => (x, true),
        Err(err) if arc.is_interior() => return Err(err),
        Err(_) => {
            let below = arc.center() < arc.arc_left();
            let near_lo = below == (orient == Orientation::Decreasing);
            (if near_lo { hi } else { lo }, false)
        }
    };
    Ok(ProjectedInterval {
        l: arc.l,
        q: arc.q,
        x0,
        anchored,
        lo,
        hi,
    })
}

/// `Q = N^{1/2} / f(N)^{1/3}`.
pub fn default_level<F: Real, A: Amplitude<F> + ?Sized>(f: &A, n: F) -> F {
    n.sqrt() / f.value(n).abs().cbrt()
}

/// The `h`-image of `(N, N']` as a half-open interval `[a, b)`.
pub fn frequency_interval<F: Real, A: Amplitude<F> + ?Sized>(f: &A, n: F, n_prime: F) -> (F, F) {
    let (hn, hp) = (f.h(n), f.h(n_prime));
    if hn > hp {
        (hp, hn)
    } else {
        (hn, hp)
    }
}

/// Dissects the `h`-image of `(N, N']` and projects every arc, in order of
/// increasing frequency.
pub fn dissect_and_project<F: Real, A: Amplitude<F> + ?Sized>(
    f: &A,
    n: F,
    n_prime: F,
    level: F,
) -> Result<Vec<(FareyArc<F>, ProjectedInterval<F>)>> {
    if n_prime <= n {
        return Err(Error::invalid("need N < N'"));
    }
    let (a, b) = frequency_interval(f, n, n_prime);
    if !(a < b) {
        return Err(Error::invalid("h is constant on the working interval"));
    }
    let arcs = dissect(a, b, level)?;
    arcs.into_iter()
        .map(|arc| project(&arc, f, n, n_prime).map(|p| (arc, p)))
        .collect()
}

/// Integer owner table for `(N, N']`: errors if any integer is claimed by
/// zero or by two intervals.
pub fn check_partition<F: Real>(
    intervals: &[ProjectedInterval<F>],
    n: u64,
    n_prime: u64,
) -> Result<()> {
    let len = (n_prime - n) as usize;
    let mut owner = vec![usize::MAX; len];
    for (i, p) in intervals.iter().enumerate() {
        for m in p.integers() {
            if m <= n || m > n_prime {
                return Err(Error::InternalConsistency(format!(
                    "interval {i} claims {m} outside ({n}, {n_prime}]"
                )));
            }
            let slot = &mut owner[(m - n - 1) as usize];
            if *slot != usize::MAX {
                return Err(Error::InternalConsistency(format!(
                    "{m} claimed by intervals {} and {i}",
                    *slot
                )));
            }
            *slot = i;
        }
    }
    if let Some(k) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InternalConsistency(format!(
            "{} claimed by no interval",
            n + 1 + k as u64
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::PowerAmplitude;

    /// All reduced fractions of order `n` in `[lo, hi]`, sorted, by brute force.
    fn farey_brute(n: u64, lo: i64, hi: i64) -> Vec<(i64, u64)> {
        let mut v = Vec::new();
        for q in 1..=n {
            for l in lo * q as i64..=hi * q as i64 {
                if Integer::gcd(&l.unsigned_abs(), &q) == 1 {
                    v.push((l, q));
                }
            }
        }
        v.sort_by(|&a, &b| cmp_fractions(a, b));
        v
    }

    #[test]
    fn next_farey_examples() {
        assert_eq!(next_farey(1, 3, 5.0).unwrap(), (2, 5));
        assert_eq!(next_farey(0, 1, 3.0).unwrap(), (1, 3));
        assert_eq!(next_farey(1, 1, 1.0).unwrap(), (2, 1));
        assert_eq!(next_farey(-1, 2, 3.0).unwrap(), (-1, 3));
        assert!(next_farey(2, 4, 5.0).is_err());
        assert!(next_farey(1, 7, 5.0).is_err());
    }

    #[test]
    fn next_farey_matches_enumeration() {
        for n in [1u64, 2, 5, 17, 100] {
            let f = farey_brute(n, -1, 2);
            for w in f.windows(2) {
                assert_eq!(next_farey(w[0].0, w[0].1, n as f64 + 0.5).unwrap(), w[1]);
                if n == 100 {
                    // neighbours: |l'q - lq'| = 1 and q + q' > n
                    let det = w[1].0 as i128 * w[0].1 as i128 - w[0].0 as i128 * w[1].1 as i128;
                    assert_eq!(det, 1);
                    assert!(w[1].1 > n - w[0].1 && w[1].1 <= n);
                }
            }
        }
    }

    #[test]
    fn exact_float_comparison() {
        assert_eq!(cmp_fraction(1, 3, 1.0f64 / 3.0), Ordering::Greater);
        assert_eq!(cmp_fraction(1, 4, 0.25f64), Ordering::Equal);
        assert_eq!(cmp_fraction(-1, 4, -0.25f32), Ordering::Equal);
        assert_eq!(cmp_fraction(1, 10, 0.1f64), Ordering::Less);
        assert_eq!(cmp_fraction(0, 1, 1e-300f64), Ordering::Less);
        assert_eq!(cmp_fraction(5, 1, 1e300f64), Ordering::Less);
        assert_eq!(cmp_fraction(-5, 1, -1e300f64), Ordering::Greater);
        assert_eq!(cmp_fraction(i64::MAX, 1, 1e-300f64), Ordering::Greater);
    }

    #[test]
    fn dissect_level_three() {
        let arcs = dissect(0.25f64, 0.75, 3.0).unwrap();
        let owners: Vec<_> = arcs.iter().map(|a| (a.l, a.q)).collect();
        assert_eq!(owners, vec![(1, 3), (1, 2), (2, 3)]);
        assert_eq!(arcs[0].right, Endpoint::Mediant { num: 2, den: 5 });
        assert_eq!(arcs[1].left, Endpoint::Mediant { num: 2, den: 5 });
        assert_eq!(arcs[1].right, Endpoint::Mediant { num: 3, den: 5 });
        assert_eq!(arcs[0].left, Endpoint::Lower { value: 0.25 });
        assert_eq!(arcs[2].right, Endpoint::Upper { value: 0.75 });
        assert!(arcs[1].is_interior() && arcs[0].is_clipped());
    }

    #[test]
    fn dissect_level_one() {
        let arcs = dissect(0.2f64, 0.8, 1.0).unwrap();
        let owners: Vec<_> = arcs.iter().map(|a| (a.l, a.q)).collect();
        assert_eq!(owners, vec![(0, 1), (1, 1)]);
        let total: f64 = arcs.iter().map(|a| a.length()).sum();
        assert!((total - 0.6).abs() < 1e-15);
        assert!(arcs.iter().all(|a| a.is_clipped()));
        assert_eq!(arcs[0].right, Endpoint::Mediant { num: 1, den: 2 });
    }

    #[test]
    fn dissect_owners_match_brute_force() {
        for &(a, b, lev) in &[(0.1f64, 0.9, 50.0), (0.57, 0.61, 30.5), (-1.3, 0.4, 12.0), (2.0, 2.5, 7.0)] {
            let arcs = dissect(a, b, lev).unwrap();
            let total: f64 = arcs.iter().map(|x| x.length()).sum();
            assert!((total - (b - a)).abs() < 1e-12);
            // endpoints chain exactly
            assert_eq!(arcs[0].left, Endpoint::Lower { value: a });
            assert_eq!(arcs.last().unwrap().right, Endpoint::Upper { value: b });
            for w in arcs.windows(2) {
                assert_eq!(w[0].right, w[1].left);
                assert!(w[0].arc_left() < w[0].arc_right());
                let det = w[1].l as i128 * w[0].q as i128 - w[0].l as i128 * w[1].q as i128;
                assert_eq!(det, 1);
            }
            // every fraction of order floor(Q) inside [a, b) owns an arc
            let inside: Vec<_> = farey_brute(lev as u64, -2, 3)
                .into_iter()
                .filter(|&(l, q)| cmp_fraction(l, q, a) != Ordering::Less && cmp_fraction(l, q, b) == Ordering::Less)
                .collect();
            let owners: Vec<_> = arcs.iter().map(|x| (x.l, x.q)).collect();
            for fr in &inside {
                assert_eq!(owners.iter().filter(|&&o| o == *fr).count(), 1);
            }
            assert!(owners.len() <= inside.len() + 2);
            for arc in arcs.iter().filter(|x| x.is_interior()) {
                assert!(arc.m_window_holds(M_WINDOW_DELTA), "{arc:?}");
                assert!(arc.arc_left() <= arc.center() && arc.center() < arc.arc_right());
            }
        }
    }

    #[test]
    fn dissect_errors() {
        assert!(matches!(dissect(0.5f64, 0.5, 3.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(dissect(0.6f64, 0.5, 3.0), Err(Error::InvalidArgument(_))));
        assert!(dissect(0.1f64, 0.5, 0.5).is_err());
        assert!(matches!(dissect(0.1f64, 0.5, 2e7), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn boundary_on_mediant() {
        // a lands exactly on the mediant 2/5 of 1/3 and 1/2
        let arcs = dissect(0.4f64, 0.5, 3.0).unwrap();
        assert_eq!(arcs.len(), 1);
        assert_eq!((arcs[0].l, arcs[0].q), (1, 2));
        let arcs = dissect(0.375f64, 0.5, 3.0).unwrap();
        assert_eq!(arcs.len(), 2);
    }

    fn partition_setup(n: u64, level: f64, gamma: f64, j: f64) -> Vec<(FareyArc<f64>, ProjectedInterval<f64>)> {
        let f = PowerAmplitude::new(j, gamma).unwrap();
        dissect_and_project(&f, n as f64, 2.0 * n as f64, level).unwrap()
    }

    #[test]
    fn projection_partitions_integers() {
        for &(n, lev, g, j) in &[(10_000u64, 5.41, 0.95, 1.0), (10_000, 60.0, 0.95, 1.0), (3_000, 200.0, 0.92, 2.0), (5_000, 40.0, 0.9, -3.0)] {
            let parts = partition_setup(n, lev, g, j);
            let ints: Vec<_> = parts.iter().map(|p| p.1).collect();
            check_partition(&ints, n, 2 * n).unwrap();
            let f = PowerAmplitude::new(j, g).unwrap();
            for (arc, p) in &parts {
                if p.anchored {
                    let c = arc.center();
                    assert!((f.h(p.x0) - c).abs() <= 1e-12 * c.abs());
                }
                if arc.is_interior() {
                    assert!(p.m1() > 0.0 && p.m2() > 0.0);
                }
            }
        }
    }

    #[test]
    fn partition_trap_fires() {
        let parts = partition_setup(1000, 20.0, 0.95, 1.0);
        let mut ints: Vec<_> = parts.iter().map(|p| p.1).collect();
        ints.push(ints[0]);
        assert!(matches!(check_partition(&ints, 1000, 2000), Err(Error::InternalConsistency(_))));
        ints.truncate(ints.len() - 2);
        assert!(check_partition(&ints, 1000, 2000).is_err());
    }

    #[test]
    fn default_level_value() {
        let f = PowerAmplitude::new(1.0f64, 0.95).unwrap();
        let q = default_level(&f, 1e4);
        assert!((q - 100.0 / 1e4f64.powf(0.95 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn owners_scale_with_frequency() {
        let f = PowerAmplitude::new(1.0f64, 0.95).unwrap();
        let n = 1e4;
        let parts = partition_setup(10_000, 300.0, 0.95, 1.0);
        for (arc, _) in parts.iter().filter(|p| p.0.is_interior()) {
            let r = arc.l as f64 * n / (arc.q as f64 * f.value(n));
            assert!((0.25..=4.0).contains(&r));
        }
    }

    #[test]
    fn m_window_interior_arcs() {
        let f = PowerAmplitude::new(1.0f64, 0.95).unwrap();
        let n = 1e4;
        for lev in [20.0, 50.0, 100.0, 300.0, 1000.0] {
            let parts = dissect_and_project(&f, n, 2.0 * n, lev).unwrap();
            let mut worst = 0.0f64;
            for (arc, p) in parts.iter().filter(|p| p.0.is_interior()) {
                let (a, b) = p.normalized_m(lev, n, f.value(n));
                assert!(a > 0.0 && b > 0.0);
                worst = worst.max(a).max(b);
                assert!(arc.m_window_holds(M_WINDOW_DELTA));
            }
            assert!(worst <= M_WINDOW_K, "Q = {lev}: {worst}");
            // the ceiling is nearly reached, so the window is not loose
            assert!(worst > 0.5 * M_WINDOW_K || lev < 50.0);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn arcs_tile_interval(a in -3.0f64..3.0, w in 1e-4f64..2.0, lev in 1.0f64..80.0) {
                let arcs = dissect(a, a + w, lev).unwrap();
                prop_assert_eq!(arcs[0].left, Endpoint::Lower { value: a });
                prop_assert_eq!(arcs.last().unwrap().right, Endpoint::Upper { value: a + w });
                for x in arcs.windows(2) {
                    prop_assert_eq!(x[0].right, x[1].left);
                    prop_assert!(x[0].q as f64 <= lev && x[1].q as f64 <= lev);
                }
            }

            #[test]
            fn cmp_fraction_agrees_with_rational(num in -1000i64..1000, den in 1u64..1000, x in -5.0f64..5.0) {
                use num_rational::BigRational;
                use num_bigint::BigInt;
                let lhs = BigRational::new(BigInt::from(num), BigInt::from(den));
                let rhs = BigRational::from_float(x).unwrap();
                prop_assert_eq!(cmp_fraction(num, den, x), lhs.cmp(&rhs));
            }
        }
    }
}
