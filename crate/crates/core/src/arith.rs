//! Elementary number theory: segmented sieve, deterministic primality,
//! factorization and the totient.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Segment length of the sieve, in odd-and-even entries.
pub const SEGMENT_LEN: u64 = 1 << 20;

/// Largest `hi` accepted by [`primes_in`].
pub const SIEVE_CEILING: u64 = 1 << 50;

/// The primes in the half-open range `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
    pub primes: Vec<u64>,
}

impl PrimeRange {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Canonical factorization `n = prod p^e`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Recomputes the product of the prime powers, `None` on overflow.
    pub fn product(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// Number of ordered factorizations into three factors, `d_3(n)`.
    pub fn divisor_count3(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(_, e)| {
                let e = e as u64;
                (e + 1) * (e + 2) / 2
            })
            .product()
    }
}

/// Plain sieve of Eratosthenes on `[0, limit]`.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Exactly the primes in `(lo, hi]`, ascending.
///
/// Memory is `O(sqrt(hi) + SEGMENT_LEN)` per worker; segments are sieved in
/// parallel and concatenated in order.
pub fn primes_in(lo: u64, hi: u64) -> Result<PrimeRange> {
    if lo < 1 || hi <= lo {
        return Err(Error::invalid(format!(
            "prime range needs 1 <= lo < hi, got ({lo}, {hi}]"
        )));
    }
    if hi > SIEVE_CEILING {
        return Err(Error::invalid(format!(
            "hi = {hi} exceeds the sieve ceiling 2^50"
        )));
    }
    let base = small_primes(isqrt(hi));
    let start = lo + 1;
    let n_segments = (hi - start) / SEGMENT_LEN + 1;
    let chunks: Vec<Vec<u64>> = (0..n_segments)
        .into_par_iter()
        .map(|s| {
            let seg_lo = start + s * SEGMENT_LEN;
            let seg_hi = (seg_lo + SEGMENT_LEN - 1).min(hi);
            sieve_segment(seg_lo, seg_hi, &base)
        })
        .collect();
    let primes = chunks.into_iter().flatten().collect();
    Ok(PrimeRange { lo, hi, primes })
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let first = (lo.div_ceil(p) * p).max(p * p);
        let mut m = first;
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter_map(|(i, &c)| {
            let n = lo + i as u64;
            (!c && n >= 2).then_some(n)
        })
        .collect()
}

/// Floor of the square root, exact for all `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
///
/// The seven bases of Jim Sinclair are a proven witness set below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Canonical prime factorization. `factorize(1)` has no factors.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::invalid("cannot factorize 0"));
    }
    let mut primes = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5] {
        while m.is_multiple_of(p) {
            primes.push(p);
            m /= p;
        }
    }
    // wheel mod 30
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0;
    while p <= 1 << 16 && p * p <= m {
        while m.is_multiple_of(p) {
            primes.push(p);
            m /= p;
        }
        p += STEPS[i];
        i = (i + 1) % 8;
    }
    if m > 1 {
        split_large(m, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    let r = isqrt(m);
    if r * r == m {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    let d = pollard_brent(m);
    split_large(d, out);
    split_large(m / d, out);
}

/// A non-trivial divisor of composite `n` (Brent's variant of rho).
fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BLOCK: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BLOCK.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = num_integer::gcd(q, n);
                k += BLOCK;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = num_integer::gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Euler's totient.
pub fn totient(q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::invalid("totient of 0"));
    }
    let fac = factorize(q)?;
    Ok(fac
        .factors
        .iter()
        .fold(q, |acc, &(p, _)| acc / p * (p - 1)))
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let fac = factorize(n)?;
    let mut out = vec![1u64];
    for &(p, e) in &fac.factors {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}
