use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

use expsum_core::characters::{additive_decomposition, all_characters};
use expsum_core::ddouble::DoubleDouble;
use expsum_core::eigenforms::{compute_tau, p_pow_11, CoefficientKind, CoefficientSequence, TauTable};
use expsum_core::expsum::{direct_sum, farey_decomposed_sum, QPolicy, SumPhase, SumRequest};
use expsum_core::piatetski::{floor_pow, ps_enumerate, sawtooth, sawtooth_fourier, sawtooth_tail_bound, PSConfig};

const N_MAX: u64 = 100_000;

fn table() -> &'static Arc<TauTable> {
    static T: OnceLock<Arc<TauTable>> = OnceLock::new();
    T.get_or_init(|| Arc::new(compute_tau(N_MAX).unwrap()))
}

fn primes_below(limit: u64) -> Vec<u64> {
    (2..limit).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tau_multiplicative(m in 1u64..400, n in 1u64..250) {
        prop_assume!(m.gcd(&n) == 1);
        let t = table();
        prop_assert_eq!(t.tau(m * n).unwrap(), t.tau(m).unwrap() * t.tau(n).unwrap());
    }

    #[test]
    fn hecke_recursion(p in prop::sample::select(primes_below(300)), n in 1u64..300) {
        let t = table();
        let lhs = t.tau(p).unwrap() * t.tau(n).unwrap();
        let rest = if n % p == 0 { p_pow_11(p) * t.tau(n / p).unwrap() } else { 0 };
        prop_assert_eq!(lhs, t.tau(p * n).unwrap() + rest);
    }

    #[test]
    fn characters_completely_multiplicative(q in 1u64..150, m in -500i64..500, n in -500i64..500) {
        for chi in all_characters::<f64>(q).unwrap() {
            let d = chi.value(m * n) - chi.value(m) * chi.value(n);
            prop_assert!(d.norm() < 1e-12);
        }
    }

    #[test]
    fn additive_decomposition_identity(q in 1u64..300, n in -10_000i64..10_000, l in -10_000i64..10_000) {
        prop_assume!((n * l).rem_euclid(q as i64).gcd(&(q as i64)) == 1);
        let (lhs, rhs) = additive_decomposition::<f64>(n, l, q).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn dd_arithmetic_round_trips(a in -1e12f64..1e12, b in 1e-3f64..1e9) {
        let (x, y) = (DoubleDouble::from_f64(a) / DoubleDouble::from_f64(3.0), DoubleDouble::from_f64(b));
        let back = (x + y) - y;
        prop_assert!((back - x).abs().to_f64() <= 1e-28 * (x.abs().to_f64() + b));
        let back = (x * y) / y;
        prop_assert!((back - x).abs().to_f64() <= 1e-30 * x.abs().to_f64());
    }

    /// With c = (b + 1) / b the floor is pinned down by p^b <= n^(b+1) < (p+1)^b.
    #[test]
    fn floor_pow_exact(n in 2u64..5_000_000, b in 12u32..40) {
        let root = (n as f64).powf(1.0 / b as f64).round() as u64;
        prop_assume!(BigUint::from(root).pow(b) != BigUint::from(n));
        let c = (b + 1) as f64 / b as f64;
        let p = floor_pow(n, c).unwrap();
        let target = BigUint::from(n).pow(b + 1);
        prop_assert!(BigUint::from(p).pow(b) <= target);
        prop_assert!(BigUint::from(p + 1).pow(b) > target);
    }

    #[test]
    fn ps_enumeration_appends(n1 in 1u64..3000, extra in 0u64..3000, c in 1.001f64..1.09) {
        let small = ps_enumerate(&PSConfig::new(c, n1).unwrap()).unwrap();
        let large = ps_enumerate(&PSConfig::new(c, n1 + extra).unwrap()).unwrap();
        prop_assert_eq!(&large[..small.len()], &small[..]);
    }

    #[test]
    fn sawtooth_fourier_within_tail(x in -1e3f64..1e3, j in 1u64..500) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let err = (sawtooth_fourier(x, j).unwrap() - sawtooth(x)).abs();
        prop_assert!(err <= sawtooth_tail_bound(x, j) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn farey_regrouping_matches_direct(
        n in 200u64..5000,
        frac in 0.0f64..=1.0,
        gamma in 0.9f64..0.97,
        j in prop::sample::select(vec![-2.0, -1.0, 1.0, 3.0]),
        q in prop::option::of(5.0f64..400.0),
        hecke in any::<bool>(),
        prime_only in any::<bool>(),
    ) {
        let n_prime = n + (frac * n as f64) as u64;
        let kind = if hecke { CoefficientKind::Hecke } else { CoefficientKind::Unit };
        let coeff = CoefficientSequence::with_kind(kind, Some(table().clone())).unwrap();
        let policy = q.map_or(QPolicy::DefaultLevel, |q| QPolicy::Explicit { q });
        let req = SumRequest::new(coeff, SumPhase::power(j, gamma).unwrap(), n, n_prime)
            .prime_only(prime_only)
            .with_q(policy);
        let d = direct_sum(&req).unwrap();
        let f = farey_decomposed_sum(&req).unwrap();
        prop_assert_eq!(d.n_terms, f.n_terms);
        prop_assert!((d.value - f.value).norm() <= 1e-9 * d.abs_sum.max(1.0));
    }
}
