//! Exact integer squaring of truncated power series by multi-prime NTT + CRT.

use rayon::prelude::*;

use crate::arith::{factorize, pow_mod};
use crate::error::{Error, Result};

/// NTT-friendly primes below 2^31; their product is about 2^147.
const PRIMES: [u64; 5] = [2013265921, 1811939329, 469762049, 167772161, 754974721];

/// Every prime above supports transforms of this length.
pub const MAX_LEN: usize = 1 << 24;

fn primitive_root(p: u64) -> u64 {
    let fac = factorize(p - 1).expect("p - 1 > 0");
    (2..p)
        .find(|&g| fac.primes().all(|r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("primes have primitive roots")
}

fn ntt(a: &mut [u64], p: u64, g: u64, invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(g, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        let mut tw = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            tw.push(cur);
            cur = cur * w % p;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &t) in lo.iter_mut().zip(hi.iter_mut()).zip(&tw) {
                let x = *u;
                let y = *v * t % p;
                *u = if x + y >= p { x + y - p } else { x + y };
                *v = if x >= y { x - y } else { x + p - y };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv_n % p;
        }
    }
}

/// `(a * a) mod x^len` with exact integer coefficients.
///
/// Every output coefficient is bounded by `sum a_i^2` (Cauchy-Schwarz); the
/// call fails with a resource-limit error if that bound could leave `i128`.
pub fn square_truncated(a: &[i128], len: usize) -> Result<Vec<i128>> {
    let len = len.min(2 * a.len().saturating_sub(1) + 1);
    let a = &a[..a.len().min(len)];
    if a.is_empty() {
        return Ok(vec![0; len]);
    }
    let bound = a
        .iter()
        .try_fold(0u128, |acc, x| {
            let m = x.unsigned_abs();
            m.checked_mul(m).and_then(|sq| acc.checked_add(sq))
        })
        .filter(|&b| b < 1u128 << 126)
        .ok_or_else(|| Error::ResourceLimit("series coefficients too large for exact i128 squaring".into()))?;
    let size = (2 * a.len() - 1).next_power_of_two();
    if size > MAX_LEN {
        return Err(Error::ResourceLimit(format!(
            "transform length {size} exceeds {MAX_LEN}"
        )));
    }
    let residues: Vec<Vec<u64>> = PRIMES
        .par_iter()
        .map(|&p| {
            let g = primitive_root(p);
            let pi = p as i128;
            let mut v = vec![0u64; size];
            for (dst, &x) in v.iter_mut().zip(a) {
                *dst = x.rem_euclid(pi) as u64;
            }
            ntt(&mut v, p, g, false);
            for x in v.iter_mut() {
                *x = *x * *x % p;
            }
            ntt(&mut v, p, g, true);
            // shift by the bound so the value to reconstruct is non-negative
            let shift = (bound % p as u128) as u64;
            v.truncate(len);
            for x in v.iter_mut() {
                *x = (*x + shift) % p;
            }
            v
        })
        .collect();
    Ok(garner(&residues, len, bound))
}

fn garner(residues: &[Vec<u64>], len: usize, bound: u128) -> Vec<i128> {
    let k = PRIMES.len();
    // inv[i][j] = PRIMES[j]^-1 mod PRIMES[i], j < i
    let inv: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            (0..i)
                .map(|j| pow_mod(PRIMES[j] % PRIMES[i], PRIMES[i] - 2, PRIMES[i]))
                .collect()
        })
        .collect();
    (0..len)
        .into_par_iter()
        .map(|idx| {
            let mut digits = [0u64; 5];
            for i in 0..k {
                let p = PRIMES[i];
                let mut x = residues[i][idx];
                for j in 0..i {
                    let d = digits[j] % p;
                    x = (x + p - d) % p * inv[i][j] % p;
                }
                digits[i] = x;
            }
            // value < 2^127 by the bound, so wrapping u128 arithmetic is exact
            let mut y: u128 = 0;
            let mut radix: u128 = 1;
            for i in 0..k {
                y = y.wrapping_add(radix.wrapping_mul(digits[i] as u128));
                radix = radix.wrapping_mul(PRIMES[i] as u128);
            }
            y as i128 - bound as i128
        })
        .collect()
}
