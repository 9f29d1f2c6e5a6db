use crate::error::{Error, Result};

use super::ntt::square_truncated;

/// Default largest `n_max` accepted by [`compute_tau`].
pub const DEFAULT_TAU_CEILING: u64 = 1_000_000;

/// Exact Ramanujan tau values `tau(1..=n_max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTable {
    n_max: u64,
    // tau[n - 1]
    values: Vec<i128>,
}

impl TauTable {
    pub(crate) fn from_values(values: Vec<i128>) -> Self {
        Self {
            n_max: values.len() as u64,
            values,
        }
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn values(&self) -> &[i128] {
        &self.values
    }

    /// Exact `tau(n)`.
    pub fn tau(&self, n: u64) -> Result<i128> {
        if n == 0 || n > self.n_max {
            return Err(Error::OutOfRange {
                what: "n",
                value: n,
                limit: self.n_max,
            });
        }
        Ok(self.values[(n - 1) as usize])
    }

    /// Normalized Hecke eigenvalue `lambda(n) = tau(n) / n^(11/2)`.
    pub fn lambda(&self, n: u64) -> Result<f64> {
        let t = self.tau(n)?;
        Ok(t as f64 / n_pow_11_2(n))
    }

    /// `lambda(n^2)`, the prime coefficients of the symmetric square.
    pub fn lambda_of_square(&self, n: u64) -> Result<f64> {
        let sq = n
            .checked_mul(n)
            .filter(|&s| s <= self.n_max)
            .ok_or(Error::OutOfRange {
                what: "n^2",
                value: n.saturating_mul(n),
                limit: self.n_max,
            })?;
        self.lambda(sq)
    }

    /// `(lambda(p)^2, 1 + lambda(p^2))`, equal by the Hecke relation at `p`.
    pub fn lambda_square_identity(&self, p: u64) -> Result<(f64, f64)> {
        if !crate::arith::is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let lp = self.lambda(p)?;
        let lp2 = self.lambda_of_square(p)?;
        Ok((lp * lp, 1.0 + lp2))
    }
}

/// `n^(11/2)` as `n^5 * sqrt(n)`, each factor correctly rounded or nearly so.
pub(crate) fn n_pow_11_2(n: u64) -> f64 {
    let x = n as f64;
    x.powi(5) * x.sqrt()
}

/// Exact `tau(n)` for `1 <= n <= n_max`.
///
/// `prod (1 - q^n)^3` is Jacobi's sparse series
/// `sum_k (-1)^k (2k + 1) q^(k(k+1)/2)`; squaring it (sparse), then twice more
/// (dense, exact NTT) gives `prod (1 - q^n)^24`, and `tau(n)` is its
/// coefficient of `q^(n-1)`.
pub fn compute_tau(n_max: u64) -> Result<TauTable> {
    compute_tau_with_ceiling(n_max, DEFAULT_TAU_CEILING)
}

pub fn compute_tau_with_ceiling(n_max: u64, ceiling: u64) -> Result<TauTable> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    if n_max > ceiling {
        return Err(Error::ResourceLimit(format!(
            "n_max = {n_max} exceeds the tau ceiling {ceiling}"
        )));
    }
    let len = n_max as usize;

    let mut sparse: Vec<(usize, i64)> = Vec::new();
    for k in 0usize.. {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let c = (2 * k + 1) as i64;
        sparse.push((e, if k % 2 == 0 { c } else { -c }));
    }

    let mut sixth = vec![0i128; len];
    for &(e1, c1) in &sparse {
        for &(e2, c2) in &sparse {
            if e1 + e2 >= len {
                break;
            }
            sixth[e1 + e2] += (c1 * c2) as i128;
        }
    }

    let twelfth = square_truncated(&sixth, len)?;
    let values = square_truncated(&twelfth, len)?;
    Ok(TauTable::from_values(values))
}

#[cfg(test)]
pub(crate) fn divisor_count(n: u64) -> u64 {
    crate::arith::factorize(n).map(|f| f.divisor_count()).unwrap_or(0)
}
