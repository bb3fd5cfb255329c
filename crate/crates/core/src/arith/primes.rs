//! Prime generation and deterministic primality.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::{Error, Result};

/// Default upper limit accepted by [`primes_up_to`].
pub const DEFAULT_SIEVE_CAP: u64 = 1 << 34;

/// Miller-Rabin with the first thirteen prime bases is deterministic below
/// this bound (3.317 * 10^24).
pub const MR_DETERMINISTIC_LIMIT: &str = "3317044064679887385961981";

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const SEGMENT: u64 = 1 << 18;

/// All primes `<= limit`, ascending, with the default cap.
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>> {
    primes_up_to_with_cap(limit, DEFAULT_SIEVE_CAP)
}

/// Segmented sieve of Eratosthenes. Errors if `limit > cap`.
pub fn primes_up_to_with_cap(limit: u64, cap: u64) -> Result<Vec<u64>> {
    if limit > cap {
        return Err(Error::cap("sieve limit", limit, cap));
    }
    if limit < 2 {
        return Ok(Vec::new());
    }
    let root = limit.isqrt();
    let base = simple_sieve(root);
    let mut out = Vec::new();
    let mut flags = vec![true; SEGMENT as usize];
    let mut low = 0u64;
    while low <= limit {
        let high = low.saturating_add(SEGMENT - 1).min(limit);
        let len = (high - low + 1) as usize;
        flags[..len].fill(true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let mut start = (p * p).max(low.div_ceil(p) * p);
            while start <= high {
                flags[(start - low) as usize] = false;
                start += p;
            }
        }
        for (i, &is_p) in flags[..len].iter().enumerate() {
            let v = low + i as u64;
            if is_p && v >= 2 {
                out.push(v);
            }
        }
        if high == u64::MAX {
            break;
        }
        low = high + 1;
    }
    Ok(out)
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes below 2^16, used for trial division.
pub(crate) fn small_primes() -> &'static [u64] {
    static SMALL: OnceLock<Vec<u64>> = OnceLock::new();
    SMALL.get_or_init(|| simple_sieve(1 << 16))
}

pub(crate) fn mr_limit() -> &'static BigUint {
    static LIMIT: OnceLock<BigUint> = OnceLock::new();
    LIMIT.get_or_init(|| MR_DETERMINISTIC_LIMIT.parse().unwrap())
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES[..12] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic Miller-Rabin. Inputs at or above 3.317 * 10^24 are refused
/// rather than answered probabilistically.
pub fn is_prime(n: &BigUint) -> Result<bool> {
    if let Some(small) = n.to_u64() {
        return Ok(is_prime_u64(small));
    }
    if n >= mr_limit() {
        return Err(Error::cap(
            "primality test input",
            n,
            MR_DETERMINISTIC_LIMIT,
        ));
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return Ok(false);
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn small_limits() {
        assert!(primes_up_to(0).unwrap().is_empty());
        assert!(primes_up_to(1).unwrap().is_empty());
        assert_eq!(primes_up_to(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(5).unwrap(), vec![2, 3, 5]);
    }

    #[test]
    fn segments_agree_with_trial_division() {
        for limit in [
            2,
            3,
            100,
            1000,
            SEGMENT - 1,
            SEGMENT,
            SEGMENT + 1,
            3 * SEGMENT + 17,
        ] {
            assert_eq!(primes_up_to(limit).unwrap(), naive(limit), "limit {limit}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            primes_up_to_with_cap(101, 100),
            Err(Error::CapExceeded { .. })
        ));
        assert!(primes_up_to(DEFAULT_SIEVE_CAP + 1).is_err());
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let sieve = primes_up_to(100_000).unwrap();
        let mut it = sieve.iter().peekable();
        for n in 0..=100_000u64 {
            let expected = it.peek() == Some(&&n);
            if expected {
                it.next();
            }
            assert_eq!(is_prime_u64(n), expected, "{n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for n in [
            2047u64,
            1373653,
            25326001,
            3215031751,
            2152302898747,
            3474749660383,
            341550071728321,
        ] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_inputs() {
        let m61: BigUint = (BigUint::one() << 61u32) - 1u32;
        let m89: BigUint = (BigUint::one() << 89u32) - 1u32;
        assert!(is_prime(&m61).unwrap());
        // 2^89 - 1 is prime but above the deterministic range
        assert!(is_prime(&m89).is_err());
        let m67: BigUint = (BigUint::one() << 67u32) - 1u32;
        assert!(!is_prime(&m67).unwrap());
        let p: BigUint = "170141183460469231731687303715884105727".parse().unwrap();
        assert!(is_prime(&p).is_err());
        let q: BigUint = "1000000000000000000000007".parse::<BigUint>().unwrap();
        assert!(is_prime(&q).is_ok());
    }
}
