use std::sync::Arc;

use crate::arith::{divisors, factorize};
use crate::error::{Error, Result};

use super::tau::TauTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientKind {
    /// `a_n = 1`: the Riemann zeta function.
    Unit,
    /// `a_n = lambda(n)`.
    Hecke,
    /// `a_n = lambda(n^2)`; at primes these are the symmetric-square coefficients.
    HeckeSquareAtPrimes,
    /// Full symmetric-square Dirichlet coefficients, `sum_{d^2 | n} lambda((n/d^2)^2)`.
    Sym2Full,
}

impl std::str::FromStr for CoefficientKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Self::Unit),
            "hecke" => Ok(Self::Hecke),
            "hecke-square-at-primes" => Ok(Self::HeckeSquareAtPrimes),
            "sym2-full" => Ok(Self::Sym2Full),
            other => Err(Error::invalid(format!("unknown coefficient kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for CoefficientKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Unit => "unit",
            Self::Hecke => "hecke",
            Self::HeckeSquareAtPrimes => "hecke-square-at-primes",
            Self::Sym2Full => "sym2-full",
        })
    }
}

/// A real coefficient stream `a_n` backed (where needed) by a tau table.
#[derive(Debug, Clone)]
pub struct CoefficientSequence {
    kind: CoefficientKind,
    table: Option<Arc<TauTable>>,
}

impl CoefficientSequence {
    pub fn unit() -> Self {
        Self {
            kind: CoefficientKind::Unit,
            table: None,
        }
    }

    pub fn new(kind: CoefficientKind, table: Arc<TauTable>) -> Self {
        Self {
            kind,
            table: Some(table),
        }
    }

    /// Builds a sequence; `table` may be omitted only for [`CoefficientKind::Unit`].
    pub fn with_kind(kind: CoefficientKind, table: Option<Arc<TauTable>>) -> Result<Self> {
        match (kind, table) {
            (CoefficientKind::Unit, _) => Ok(Self::unit()),
            (kind, Some(t)) => Ok(Self::new(kind, t)),
            (kind, None) => Err(Error::invalid(format!("{kind} coefficients need a tau table"))),
        }
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn table(&self) -> Option<&Arc<TauTable>> {
        self.table.as_ref()
    }

    /// Largest `n` for which `a_n` is available.
    pub fn n_max(&self) -> u64 {
        match (&self.kind, &self.table) {
            (CoefficientKind::Unit, _) => u64::MAX,
            (CoefficientKind::Hecke, Some(t)) => t.n_max(),
            (_, Some(t)) => crate::arith::isqrt(t.n_max()),
            (_, None) => 0,
        }
    }

    /// Required tau-table size so that `a_n` is available for `n <= n`.
    pub fn required_table_size(kind: CoefficientKind, n: u64) -> u64 {
        match kind {
            CoefficientKind::Unit => 0,
            CoefficientKind::Hecke => n,
            _ => n.saturating_mul(n),
        }
    }

    pub fn get(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::invalid("coefficients start at n = 1"));
        }
        match (&self.kind, &self.table) {
            (CoefficientKind::Unit, _) => Ok(1.0),
            (CoefficientKind::Hecke, Some(t)) => t.lambda(n),
            (CoefficientKind::HeckeSquareAtPrimes, Some(t)) => t.lambda_of_square(n),
            (CoefficientKind::Sym2Full, Some(t)) => sym2_coefficient(t, n),
            (_, None) => unreachable!("constructor guarantees a table"),
        }
    }

    /// The Ramanujan-hypothesis surrogate `|a_n| <= d_k(n) n^eps`, with
    /// `k = 2` for degree-two and `k = 3` for symmetric-square coefficients.
    pub fn ramanujan_surrogate_holds(&self, n: u64, eps: f64) -> Result<bool> {
        let a = self.get(n)?;
        let fac = factorize(n)?;
        let d = match self.kind {
            CoefficientKind::Unit | CoefficientKind::Hecke => fac.divisor_count(),
            _ => fac.divisor_count3(),
        } as f64;
        Ok(a.abs() <= d * (n as f64).powf(eps) * (1.0 + 1e-12))
    }
}

/// Coefficients of `L(Sym^2 G, s) = zeta(2s) sum lambda(n^2) n^-s`:
/// `sum_{d^2 | n} lambda((n / d^2)^2)`. For prime `n` this is `lambda(n^2)`.
pub fn sym2_coefficient(table: &TauTable, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("coefficients start at n = 1"));
    }
    if n.checked_mul(n).is_none_or(|s| s > table.n_max()) {
        return Err(Error::OutOfRange {
            what: "n^2",
            value: n.saturating_mul(n),
            limit: table.n_max(),
        });
    }
    let mut acc = 0.0;
    for d in divisors(n)? {
        let dd = d * d;
        if dd > n {
            break;
        }
        if n.is_multiple_of(dd) {
            acc += table.lambda_of_square(n / dd)?;
        }
    }
    Ok(acc)
}
