//! Exact integer foundations: primes, factorization, totient, `p`-adic
//! valuations, factorials and floors over `Z[sqrt(p^m)]`.

mod algnum;
mod factor;
mod factored;
pub mod interval;
mod primes;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;

pub use algnum::AlgNum;
pub use factor::{factor, factor_u64, factor_with_cap, DEFAULT_FACTOR_CAP_BITS};
pub use factored::FactoredNat;
pub use interval::Interval;
pub use primes::{
    is_prime, is_prime_u64, primes_up_to, primes_up_to_with_cap, DEFAULT_SIEVE_CAP,
    MR_DETERMINISTIC_LIMIT,
};

use crate::{Error, Result};

/// Exact rationals, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Largest argument accepted by [`factorial_factored`].
pub const FACTORIAL_CAP: u64 = 1_000_000;

/// Euler's totient `φ(n) = ∏ p^(e-1)(p - 1)`.
pub fn totient(n: &BigUint) -> Result<BigUint> {
    let f = factor(n)?;
    Ok(totient_of(&f))
}

/// Totient of an already factored value.
pub fn totient_of(f: &FactoredNat) -> BigUint {
    f.factors()
        .iter()
        .map(|(p, e)| {
            let e = e.to_u32().expect("exponent too large for totient");
            p.pow(e - 1) * (p - 1u32)
        })
        .product()
}

pub fn totient_u64(n: u64) -> u64 {
    totient_of(&factor_u64(n)).to_u64().unwrap()
}

/// Exponent of `p` in a positive integer.
pub fn vp_uint(p: u64, n: &BigUint) -> u64 {
    assert!(p >= 2 && !n.is_zero());
    let mut k = 0;
    let mut rest = n.clone();
    while (&rest % p).is_zero() {
        rest /= p;
        k += 1;
    }
    k
}

/// Exponent of `p` in a machine word, `n > 0`.
pub fn vp_u64(p: u64, mut n: u64) -> u64 {
    assert!(p >= 2 && n > 0);
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// `p`-adic valuation of a nonzero rational, normalized by `v_p(p) = 1`.
pub fn vp(p: u64, x: &Rational) -> Result<i64> {
    if p < 2 || !is_prime_u64(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let num = vp_uint(p, x.numer().magnitude()) as i64;
    let den = vp_uint(p, x.denom().magnitude()) as i64;
    Ok(num - den)
}

/// `n!` in factored form via Legendre's formula.
pub fn factorial_factored(n: u64) -> Result<FactoredNat> {
    if n > FACTORIAL_CAP {
        return Err(Error::cap("factorial argument", n, FACTORIAL_CAP));
    }
    let factors = primes_up_to(n)?
        .into_iter()
        .map(|p| {
            let mut e = 0u64;
            let mut q = n / p;
            while q > 0 {
                e += q;
                q /= p;
            }
            (BigUint::from(p), BigUint::from(e))
        })
        .collect();
    Ok(FactoredNat::from_sorted(factors))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(())
}

/// `⌊(1 + sqrt(p^m))^e⌋`, exactly.
pub fn alg_floor(p: u64, m: u32, e: u32) -> Result<BigUint> {
    check_prime(p)?;
    if m == 0 || e == 0 {
        return Err(Error::invalid("m and e must be positive"));
    }
    Ok(AlgNum::one_plus_root(p, m).pow(e).floor())
}

/// Largest `L` with `p^L <= (1 + sqrt(p^m))^e`.
pub fn floor_log_pow(p: u64, m: u32, e: u32) -> Result<u64> {
    check_prime(p)?;
    if m == 0 || e == 0 {
        return Err(Error::invalid("m and e must be positive"));
    }
    let x = AlgNum::one_plus_root(p, m).pow(e);
    // p^L is an integer, so p^L <= x iff p^L <= floor(x)
    let floor = x.floor();
    let bp = BigUint::from(p);
    let mut l = ((floor.bits() - 1) as f64 / (p as f64).log2()).floor() as u64;
    l = l.saturating_sub(1);
    let mut pow = bp.pow(l as u32);
    while &pow * &bp <= floor {
        pow *= &bp;
        l += 1;
    }
    while pow > floor {
        pow /= &bp;
        l -= 1;
    }
    debug_assert_ne!(x.cmp_int(&pow), Ordering::Less);
    debug_assert_eq!(x.cmp_int(&(&pow * &bp)), Ordering::Less);
    Ok(l)
}

/// `true` when `p^l <= (1 + sqrt(p^m))^e`, decided by the sign test alone.
pub fn pow_le_alg(p: u64, l: u32, m: u32, e: u32) -> bool {
    let x = AlgNum::one_plus_root(p, m).pow(e);
    x.cmp_int(&BigUint::from(p).pow(l)) != Ordering::Less
}

#[cfg(test)]
pub(crate) fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub(crate) fn rational_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(&big(1)).unwrap(), big(1));
        assert_eq!(totient(&big(12)).unwrap(), big(4));
        for p in [2u64, 3, 97, 1_000_000_007] {
            assert_eq!(totient(&big(p)).unwrap(), big(p - 1));
        }
    }

    #[test]
    fn totient_brute_force() {
        use num_integer::Integer;
        for n in 1..=10_000u64 {
            let count = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(totient_u64(n), count, "φ({n})");
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(2, &q(48, 1)).unwrap(), 4);
        assert_eq!(vp(3, &q(1, 9)).unwrap(), -2);
        assert_eq!(vp(5, &q(48, 1)).unwrap(), 0);
        assert_eq!(vp(2, &q(0, 1)), Err(Error::ZeroValuation));
        assert!(vp(4, &q(8, 1)).is_err());
    }

    #[test]
    fn factorial_examples() {
        assert!(factorial_factored(0).unwrap().is_one());
        assert_eq!(
            factorial_factored(4).unwrap(),
            FactoredNat::from_u64_pairs(&[(2, 3), (3, 1)]).unwrap()
        );
        assert_eq!(factorial_factored(24).unwrap().exponent_of_u64(2), big(22));
        for n in 0..30 {
            assert_eq!(factorial_factored(n).unwrap().to_biguint(), factorial(n));
        }
        assert!(factorial_factored(FACTORIAL_CAP + 1).is_err());
    }

    #[test]
    fn alg_floor_examples() {
        assert_eq!(alg_floor(2, 2, 1).unwrap(), big(3));
        assert_eq!(alg_floor(2, 2, 2).unwrap(), big(9));
        assert_eq!(alg_floor(2, 1, 2).unwrap(), big(5));
        assert_eq!(alg_floor(2, 1, 4).unwrap(), big(33));
        assert!(alg_floor(4, 1, 1).is_err());
    }

    #[test]
    fn floor_log_examples() {
        assert_eq!(floor_log_pow(2, 1, 2).unwrap(), 2);
        assert_eq!(floor_log_pow(3, 1, 4).unwrap(), 3);
        assert_eq!(floor_log_pow(2, 8, 2).unwrap(), 8);
        assert_eq!(floor_log_pow(5, 2, 2).unwrap(), 2);
        assert_eq!(floor_log_pow(2, 2, 2).unwrap(), 3);
    }

    #[test]
    fn even_m_is_an_integer_power() {
        for p in [2u64, 3, 5, 7, 11] {
            for half in 1..6u32 {
                for e in 1..9u32 {
                    let exact = (BigUint::from(p).pow(half) + 1u32).pow(e);
                    assert_eq!(alg_floor(p, 2 * half, e).unwrap(), exact);
                }
            }
        }
    }

    #[test]
    fn floor_log_brackets_by_sign_test() {
        for p in [2u64, 3, 5, 7] {
            for m in 1..40u32 {
                for e in [1u32, 2, 4, 6, 8, 16] {
                    let l = floor_log_pow(p, m, e).unwrap() as u32;
                    assert!(pow_le_alg(p, l, m, e));
                    assert!(!pow_le_alg(p, l + 1, m, e));
                }
            }
        }
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (1i64..1_000_000, 1i64..1_000_000, any::<bool>())
            .prop_map(|(n, d, neg)| q(if neg { -n } else { n }, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn factor_round_trips(n in 1u64..u64::MAX) {
            let f = factor_u64(n);
            prop_assert_eq!(f.to_biguint(), BigUint::from(n));
            for (p, _) in f.factors() {
                prop_assert!(is_prime_u64(p.to_u64().unwrap()));
            }
        }
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in rational(), b in rational(), pi in 0usize..5) {
            let p = [2u64, 3, 5, 7, 11][pi];
            let lhs = vp(p, &(&a * &b)).unwrap();
            prop_assert_eq!(lhs, vp(p, &a).unwrap() + vp(p, &b).unwrap());
        }
    }
}
