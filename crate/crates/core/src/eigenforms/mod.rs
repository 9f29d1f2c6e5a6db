//! Ramanujan tau, normalized Hecke eigenvalues of the weight-12 cusp form,
//! Satake parameters, Euler-log coefficients and coefficient streams.

mod cache;
mod coeffs;
mod ntt;
mod satake;
mod tau;

pub use cache::{decode_table, encode_table, load_table, save_table};
pub use coeffs::{sym2_coefficient, CoefficientKind, CoefficientSequence};
pub use ntt::square_truncated;
pub use satake::{euler_log_coeffs, SatakeAngle};
pub use tau::{compute_tau, compute_tau_with_ceiling, TauTable, DEFAULT_TAU_CEILING};

#[cfg(test)]
pub(crate) use tau::{divisor_count, n_pow_11_2};

/// `lambda(n)` from a table; free-function form of [`TauTable::lambda`].
pub fn lambda(table: &TauTable, n: u64) -> crate::Result<f64> {
    table.lambda(n)
}

/// `(lambda(p)^2, 1 + lambda(p^2))`.
pub fn lambda_square_identity(table: &TauTable, p: u64) -> crate::Result<(f64, f64)> {
    table.lambda_square_identity(p)
}

/// Satake parameter of the table's form at `p`.
pub fn satake_angle(table: &TauTable, p: u64) -> crate::Result<SatakeAngle<f64>> {
    SatakeAngle::from_lambda(p, table.lambda(p)?)
}

/// `p^11` exactly.
pub fn p_pow_11(p: u64) -> i128 {
    (p as i128).pow(11)
}
