//! Dirichlet characters as value tables, Gauss sums, and the expansion of an
//! additive character into multiplicative ones:
//!
//! `e(n l / q) = (1 / phi(q)) sum_{chi mod q} chi(l) tau(conj chi) chi(n)` for `(nl, q) = 1`.

use num_complex::Complex;

use crate::arith::{factorize, gcd, pow_mod, totient};
use crate::error::{Error, Result};
use crate::scalar::{e, Real};

/// Largest modulus [`all_characters`] will tabulate.
pub const MAX_MODULUS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter<F: Real> {
    modulus: u64,
    values: Vec<Complex<F>>,
    /// Exponent of the character on each cyclic generator, `(exponent, order)`.
    signature: Vec<(u64, u64)>,
    conductor: u64,
}

impl<F: Real> DirichletCharacter<F> {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `chi(n)`, periodic in `n` with period `q`.
    pub fn value(&self, n: i64) -> Complex<F> {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// Values at residues `0..q`.
    pub fn values(&self) -> &[Complex<F>] {
        &self.values
    }

    pub fn is_principal(&self) -> bool {
        self.signature.iter().all(|&(a, _)| a == 0)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn conj(&self) -> Self {
        Self {
            modulus: self.modulus,
            values: self.values.iter().map(|v| v.conj()).collect(),
            signature: self
                .signature
                .iter()
                .map(|&(a, m)| ((m - a) % m, m))
                .collect(),
            conductor: self.conductor,
        }
    }

    /// `chi(-1)`, which is `+1` or `-1`.
    pub fn parity(&self) -> F {
        self.value(-1).re
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussSum<F: Real> {
    pub modulus: u64,
    pub value: Complex<F>,
}

/// One cyclic factor of `(Z/q)^*`: a generator, its order, and the discrete
/// log of every residue mod `q` that is a unit (as seen through the CRT
/// projection to this factor).
struct CyclicFactor {
    order: u64,
    // prime-power component this factor lives in, and its index among components
    component: usize,
    logs: Vec<u64>,
}

struct Component {
    p: u64,
    pe: u64,
}

/// Discrete logarithms to base `g` on a cyclic group of order `order` mod `m`,
/// by walking the powers of `g`. Returns a table indexed by residue mod `m`;
/// non-units map to `u64::MAX`.
fn log_table(g: u64, order: u64, m: u64) -> Vec<u64> {
    let mut logs = vec![u64::MAX; m as usize];
    let mut x = 1 % m;
    for k in 0..order {
        logs[x as usize] = k;
        x = x * g % m;
    }
    logs
}

fn primitive_root_prime(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fac = factorize(p - 1).expect("p > 1");
    (2..p)
        .find(|&g| fac.primes().all(|r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("prime moduli have primitive roots")
}

/// Generators of `(Z/p^e)^*` as cyclic factors, each with a log table mod `p^e`.
fn cyclic_factors(p: u64, e: u32, component: usize) -> Vec<CyclicFactor> {
    let pe = p.pow(e);
    if p == 2 {
        return match e {
            1 => vec![],
            2 => vec![CyclicFactor {
                order: 2,
                component,
                logs: log_table(3, 2, 4),
            }],
            _ => {
                // n = (-1)^a 5^b mod 2^e
                let half = pe / 4;
                let five = log_table(5, half, pe);
                let mut sign = vec![u64::MAX; pe as usize];
                let mut b_log = vec![u64::MAX; pe as usize];
                for n in (1..pe).step_by(2) {
                    let (a, b) = if five[n as usize] != u64::MAX {
                        (0, five[n as usize])
                    } else {
                        (1, five[(pe - n) as usize])
                    };
                    sign[n as usize] = a;
                    b_log[n as usize] = b;
                }
                vec![
                    CyclicFactor {
                        order: 2,
                        component,
                        logs: sign,
                    },
                    CyclicFactor {
                        order: half,
                        component,
                        logs: b_log,
                    },
                ]
            }
        };
    }
    let mut g = primitive_root_prime(p);
    if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    let order = pe / p * (p - 1);
    vec![CyclicFactor {
        order,
        component,
        logs: log_table(g % pe, order, pe),
    }]
}

/// All `phi(q)` characters mod `q`, principal first.
///
/// Built from the CRT decomposition of `(Z/q)^*` into cyclic factors; a
/// character is a vector of exponents, one per factor, and its values are
/// roots of unity `e(k / L)` for the group exponent `L`, each evaluated from
/// its reduced integer exponent.
pub fn all_characters<F: Real>(q: u64) -> Result<Vec<DirichletCharacter<F>>> {
    if q == 0 {
        return Err(Error::invalid("modulus must be at least 1"));
    }
    if q > MAX_MODULUS {
        return Err(Error::invalid(format!("modulus {q} exceeds {MAX_MODULUS}")));
    }
    let fac = factorize(q)?;
    let components: Vec<Component> = fac
        .factors
        .iter()
        .map(|&(p, e)| Component { p, pe: p.pow(e) })
        .collect();
    let factors: Vec<CyclicFactor> = fac
        .factors
        .iter()
        .enumerate()
        .flat_map(|(i, &(p, e))| cyclic_factors(p, e, i))
        .collect();

    let exponent = factors
        .iter()
        .fold(1u64, |acc, f| num_integer::lcm(acc, f.order));
    let roots: Vec<Complex<F>> = (0..exponent)
        .map(|k| e(F::from_u64_lossy(k) / F::from_u64_lossy(exponent)))
        .collect();

    // per residue: its log on every factor (None for non-units)
    let residue_logs: Vec<Option<Vec<u64>>> = (0..q)
        .map(|n| {
            if gcd(n, q) != 1 {
                return None;
            }
            Some(
                factors
                    .iter()
                    .map(|f| f.logs[(n % components[f.component].pe) as usize])
                    .collect(),
            )
        })
        .collect();

    let count = totient(q)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut exps = vec![0u64; factors.len()];
    loop {
        let values: Vec<Complex<F>> = residue_logs
            .iter()
            .map(|logs| match logs {
                None => Complex::new(F::zero(), F::zero()),
                Some(logs) => {
                    let k = factors.iter().zip(logs).zip(&exps).fold(
                        0u64,
                        |acc, ((f, &lg), &a)| {
                            let step = exponent / f.order;
                            (acc + (a * lg % f.order) * step) % exponent
                        },
                    );
                    roots[k as usize]
                }
            })
            .collect();
        let signature: Vec<(u64, u64)> =
            exps.iter().zip(&factors).map(|(&a, f)| (a, f.order)).collect();
        let conductor = conductor_of(&values, q, &components);
        out.push(DirichletCharacter {
            modulus: q,
            values,
            signature,
            conductor,
        });

        // odometer over exponent vectors
        let mut i = 0;
        loop {
            if i == exps.len() {
                debug_assert_eq!(out.len() as u64, count);
                return Ok(out);
            }
            exps[i] += 1;
            if exps[i] < factors[i].order {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Conductor as a product over prime-power components: for each `p^e || q`
/// the least `p^f` such that the character is trivial on units
/// `n = 1 (mod p^f)` that are `1` modulo the other components.
fn conductor_of<F: Real>(values: &[Complex<F>], q: u64, components: &[Component]) -> u64 {
    let tol = F::lit(1e-6);
    let mut conductor = 1u64;
    for c in components {
        let rest = q / c.pe;
        // CRT lift: residue mod q congruent to x mod p^e and 1 mod rest
        let lift = |x: u64| -> u64 {
            if rest == 1 {
                return x % q;
            }
            // u = rest * (rest^-1 mod pe)
            let inv = crate::arith::pow_mod(rest % c.pe, totient(c.pe).unwrap() - 1, c.pe);
            let e1 = rest * inv % q;
            let e2 = (q + 1 - e1) % q;
            ((x % c.pe) as u128 * e1 as u128 % q as u128 + e2 as u128) as u64 % q
        };
        let mut pf = 1u64;
        loop {
            if pf == c.pe {
                break;
            }
            let trivial = (0..c.pe / pf).all(|t| {
                let x = 1 + t * pf;
                if gcd(x, c.p) != 1 {
                    return true;
                }
                let v = values[lift(x) as usize];
                (v.re - F::one()).abs() < tol && v.im.abs() < tol
            });
            if trivial {
                break;
            }
            pf *= c.p;
        }
        conductor *= pf;
    }
    conductor
}

/// `tau(chi) = sum_{a mod q} chi(a) e(a / q)`, by direct summation.
pub fn gauss_sum<F: Real>(chi: &DirichletCharacter<F>) -> GaussSum<F> {
    let q = chi.modulus;
    let value = chi
        .values
        .iter()
        .enumerate()
        .fold(Complex::new(F::zero(), F::zero()), |acc, (a, &v)| {
            if v.re == F::zero() && v.im == F::zero() {
                acc
            } else {
                acc + v * e(F::from_u64_lossy(a as u64) / F::from_u64_lossy(q))
            }
        });
    GaussSum { modulus: q, value }
}

/// `(e(n l / q), (1/phi(q)) sum_chi chi(l) tau(conj chi) chi(n))`.
///
/// Both components are equal whenever `gcd(nl, q) = 1`; outside that the
/// expansion is not valid and the call is refused.
pub fn additive_decomposition<F: Real>(n: i64, l: i64, q: u64) -> Result<(Complex<F>, Complex<F>)> {
    let chars = all_characters::<F>(q)?;
    additive_decomposition_with(&chars, n, l)
}

/// [`additive_decomposition`] against a precomputed character list mod `q`.
pub fn additive_decomposition_with<F: Real>(
    chars: &[DirichletCharacter<F>],
    n: i64,
    l: i64,
) -> Result<(Complex<F>, Complex<F>)> {
    let q = chars
        .first()
        .map(|c| c.modulus)
        .ok_or_else(|| Error::invalid("empty character list"))?;
    let nl = (n as i128 * l as i128).rem_euclid(q as i128) as u64;
    if gcd(nl, q) != 1 {
        return Err(Error::Precondition(format!(
            "gcd(n l, q) = gcd({n} * {l}, {q}) != 1"
        )));
    }
    let direct = e(F::from_u64_lossy(nl) / F::from_u64_lossy(q));
    let sum = chars.iter().fold(Complex::new(F::zero(), F::zero()), |acc, chi| {
        let tau_bar = gauss_sum(&chi.conj()).value;
        acc + chi.value(l) * tau_bar * chi.value(n)
    });
    let phi = F::from_u64_lossy(chars.len() as u64);
    Ok((direct, sum / phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::totient;

    fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn trivial_modulus() {
        let chars = all_characters::<f64>(1).unwrap();
        assert_eq!(chars.len(), 1);
        assert!(chars[0].is_principal() && chars[0].is_primitive());
        for n in -5..5 {
            assert_eq!(chars[0].value(n), Complex::new(1.0, 0.0));
        }
        assert!(close(gauss_sum(&chars[0]).value, Complex::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn modulus_four() {
        let chars = all_characters::<f64>(4).unwrap();
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_principal());
        assert!(close(chars[1].value(3), Complex::new(-1.0, 0.0), 1e-15));
        assert_eq!(chars[1].conductor(), 4);
        assert_eq!(chars[0].conductor(), 1);
    }

    #[test]
    fn modulus_five_orthogonality() {
        let chars = all_characters::<f64>(5).unwrap();
        assert_eq!(chars.len(), 4);
        for chi in &chars[1..] {
            let s: Complex<f64> = (0..5).map(|n| chi.value(n)).sum();
            assert!(s.norm() < 1e-14);
        }
        // the quadratic one (values +-1) has Gauss sum sqrt 5
        let quad = chars
            .iter()
            .find(|c| !c.is_principal() && (1..5).all(|n| c.value(n).im.abs() < 1e-14))
            .unwrap();
        let direct: Complex<f64> = (1..5)
            .map(|a| quad.value(a) * Complex::from_polar(1.0, std::f64::consts::TAU * a as f64 / 5.0))
            .sum();
        let g = gauss_sum(quad).value;
        assert!(close(g, Complex::new(5f64.sqrt(), 0.0), 1e-14));
        assert!(close(g, direct, 1e-14));
    }

    #[test]
    fn character_axioms() {
        for q in 1..=120u64 {
            let chars = all_characters::<f64>(q).unwrap();
            assert_eq!(chars.len() as u64, totient(q).unwrap());
            for chi in &chars {
                assert!(close(chi.value(1), Complex::new(1.0, 0.0), 1e-12));
                for m in 0..q as i64 {
                    let unit = gcd(m as u64, q) == 1;
                    assert_eq!(chi.value(m).norm() > 0.5, unit);
                    assert_eq!(chi.value(m), chi.value(m + q as i64));
                    for n in 0..q as i64 {
                        assert!(close(chi.value(m * n), chi.value(m) * chi.value(n), 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn completeness_and_distinctness() {
        for q in 1..=500u64 {
            let chars = all_characters::<f64>(q).unwrap();
            assert_eq!(chars.len() as u64, totient(q).unwrap(), "q = {q}");
            // values are roots of unity, so rounded tables separate distinct characters
            let keys: std::collections::HashSet<Vec<(i64, i64)>> = chars
                .iter()
                .map(|c| {
                    c.values()
                        .iter()
                        .map(|v| ((v.re * 1e6).round() as i64, (v.im * 1e6).round() as i64))
                        .collect()
                })
                .collect();
            assert_eq!(keys.len(), chars.len(), "q = {q}");
        }
    }

    #[test]
    fn orthogonality_relation() {
        for q in 1..=100u64 {
            let chars = all_characters::<f64>(q).unwrap();
            let phi = chars.len() as f64;
            for m in 0..q as i64 {
                for n in 0..q as i64 {
                    let s: Complex<f64> =
                        chars.iter().map(|c| c.value(m) * c.value(n).conj()).sum::<Complex<f64>>() / phi;
                    let want = if m == n && gcd(m as u64, q) == 1 { 1.0 } else { 0.0 };
                    assert!(close(s, Complex::new(want, 0.0), 1e-10), "q={q} m={m} n={n}");
                }
            }
        }
    }

    /// Conductor by brute force: least d | q such that chi is 1 on units = 1 mod d.
    fn brute_conductor(chi: &DirichletCharacter<f64>) -> u64 {
        let q = chi.modulus();
        (1..=q)
            .filter(|d| q.is_multiple_of(*d))
            .find(|&d| {
                (0..q).all(|n| {
                    gcd(n, q) != 1 || n % d != 1 % d || close(chi.value(n as i64), Complex::new(1.0, 0.0), 1e-9)
                })
            })
            .unwrap()
    }

    #[test]
    fn conductors_match_brute_force() {
        for q in 1..=200u64 {
            for chi in all_characters::<f64>(q).unwrap() {
                assert_eq!(chi.conductor(), brute_conductor(&chi), "q = {q}");
            }
        }
    }

    #[test]
    fn gauss_sums_of_primitive_characters() {
        for q in 1..=200u64 {
            for chi in all_characters::<f64>(q).unwrap() {
                let g = gauss_sum(&chi);
                let sq = (q as f64).sqrt();
                assert!(g.value.norm() <= sq + 1e-9);
                if chi.is_primitive() {
                    assert!((g.value.norm() - sq).abs() < 1e-9, "q = {q}");
                    // tau(conj chi) = chi(-1) conj(tau(chi))
                    let lhs = gauss_sum(&chi.conj()).value;
                    let rhs = g.value.conj() * chi.parity();
                    assert!(close(lhs, rhs, 1e-9));
                }
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let (a, b) = additive_decomposition::<f64>(7, 3, 1).unwrap();
        assert!(close(a, Complex::new(1.0, 0.0), 1e-15) && close(b, Complex::new(1.0, 0.0), 1e-12));
        let (a, b) = additive_decomposition::<f64>(3, 2, 5).unwrap();
        let fifth = Complex::from_polar(1.0, std::f64::consts::TAU / 5.0);
        assert!(close(a, fifth, 1e-15) && close(b, fifth, 1e-12));
        let (a, b) = additive_decomposition::<f64>(7, 5, 12).unwrap();
        assert!(close(a, b, 1e-10));
        assert!(matches!(
            additive_decomposition::<f64>(2, 3, 12),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn decomposition_identity_up_to_60() {
        for q in 1..=60u64 {
            let chars = all_characters::<f64>(q).unwrap();
            for n in 0..q as i64 {
                for l in 0..q as i64 {
                    if gcd((n * l) as u64 % q, q) != 1 {
                        continue;
                    }
                    let (a, b) = additive_decomposition_with(&chars, n, l).unwrap();
                    assert!(close(a, b, 1e-10), "n={n} l={l} q={q}");
                }
            }
        }
    }

    #[test]
    fn single_precision_tables() {
        let chars = all_characters::<f32>(13).unwrap();
        assert_eq!(chars.len(), 12);
        for chi in chars.iter().filter(|c| !c.is_principal()) {
            assert!((gauss_sum(chi).value.norm() - 13f32.sqrt()).abs() < 1e-4);
        }
    }
}
