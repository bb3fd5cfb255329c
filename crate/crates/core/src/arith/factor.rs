//! Integer factorization: trial division followed by Brent's variant of
//! Pollard rho, with every reported prime certified by deterministic
//! Miller-Rabin.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

use super::primes::{is_prime, is_prime_u64, mr_limit, mulmod, small_primes};
use super::FactoredNat;
use crate::{Error, Result};

/// Inputs wider than this many bits are refused by [`factor`].
pub const DEFAULT_FACTOR_CAP_BITS: u64 = 96;

/// Polynomial steps tried on a cofactor that cannot be certified prime.
const RHO_BUDGET: u64 = 1 << 22;

pub fn factor(n: &BigUint) -> Result<FactoredNat> {
    factor_with_cap(n, DEFAULT_FACTOR_CAP_BITS)
}

pub fn factor_with_cap(n: &BigUint, cap_bits: u64) -> Result<FactoredNat> {
    if n.is_zero() {
        return Err(Error::invalid("cannot factor zero"));
    }
    if n.bits() > cap_bits {
        return Err(Error::FactorizationTooHard(n.to_string()));
    }
    if let Some(small) = n.to_u64() {
        return Ok(factor_u64(small));
    }
    let mut acc: BTreeMap<BigUint, u64> = BTreeMap::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        if (&rest % p).is_zero() {
            let mut k = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                k += 1;
            }
            *acc.entry(BigUint::from(p)).or_default() += k;
        }
        if rest.is_one() {
            break;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            for (p, e) in factor_u64(small).factors() {
                *acc.entry(p.clone()).or_default() += e.to_u64().unwrap();
            }
            continue;
        }
        let d = if &m >= mr_limit() {
            // no primality certificate available: a split is the only way forward
            rho_big(&m, Some(RHO_BUDGET))
                .ok_or_else(|| Error::FactorizationTooHard(n.to_string()))?
        } else if is_prime(&m)? {
            *acc.entry(m).or_default() += 1;
            continue;
        } else {
            rho_big(&m, None).expect("unbounded rho always splits a composite")
        };
        stack.push(&m / &d);
        stack.push(d);
    }
    Ok(FactoredNat::from_sorted(
        acc.into_iter()
            .map(|(p, e)| (p, BigUint::from(e)))
            .collect(),
    ))
}

/// Complete factorization of a machine word; never fails for `n >= 1`.
pub fn factor_u64(n: u64) -> FactoredNat {
    assert!(n > 0, "cannot factor zero");
    let mut acc: BTreeMap<u64, u64> = BTreeMap::new();
    let mut rest = n;
    for &p in small_primes().iter().take(1000) {
        if p * p > rest {
            break;
        }
        while rest.is_multiple_of(p) {
            rest /= p;
            *acc.entry(p).or_default() += 1;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            *acc.entry(m).or_default() += 1;
            continue;
        }
        let d = rho_u64(m);
        stack.push(m / d);
        stack.push(d);
    }
    FactoredNat::from_sorted(
        acc.into_iter()
            .map(|(p, e)| (BigUint::from(p), BigUint::from(e)))
            .collect(),
    )
}

/// A nontrivial divisor of the odd composite `n`.
fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let step = |x: u64, c: u64| ((mulmod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    for c in 1u64.. {
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y, c);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..128.min(r - k) {
                    y = step(y, c);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = step(ys, c);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_big(n: &BigUint, budget: Option<u64>) -> Option<BigUint> {
    let one = BigUint::one();
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut spent = 0u64;
    for c in 1u32.. {
        let step = |x: &BigUint| (x * x + c) % n;
        let (mut y, mut r, mut q, mut g) = (BigUint::from(2u32), 1u64, one.clone(), one.clone());
        let (mut x, mut ys) = (BigUint::zero(), BigUint::zero());
        while g.is_one() {
            if budget.is_some_and(|b| spent > b) {
                return None;
            }
            spent += 2 * r;
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..128.min(r - k) {
                    y = step(&y);
                    q = q * abs_diff(&x, &y) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = step(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(f: &FactoredNat) -> BigUint {
        f.to_biguint()
    }

    #[test]
    fn examples() {
        assert!(factor(&BigUint::one()).unwrap().is_one());
        assert_eq!(
            factor(&BigUint::from(48u32)).unwrap(),
            FactoredNat::from_u64_pairs(&[(2, 4), (3, 1)]).unwrap()
        );
        assert_eq!(
            factor(&BigUint::from(11520u32)).unwrap(),
            FactoredNat::from_u64_pairs(&[(2, 8), (3, 2), (5, 1)]).unwrap()
        );
    }

    #[test]
    fn semiprimes_and_powers() {
        let cases: [u64; 6] = [
            4294967291 * 4294967279,
            1_000_000_007 * 998_244_353,
            3u64.pow(40),
            (1 << 61) - 1,
            999_999_000_001 * 7,
            65537 * 65537 * 65537,
        ];
        for n in cases {
            let f = factor_u64(n);
            assert_eq!(expand(&f), BigUint::from(n), "{n}");
            assert!(f.primes().all(|p| is_prime_u64(p.to_u64().unwrap())));
        }
    }

    #[test]
    fn beyond_u64() {
        // (2^61 - 1) * (2^31 - 1)
        let n = BigUint::from((1u64 << 61) - 1) * BigUint::from((1u64 << 31) - 1);
        let f = factor(&n).unwrap();
        assert_eq!(f.factors().len(), 2);
        assert_eq!(expand(&f), n);
        let n = BigUint::from(1099511627791u64) * BigUint::from(549755826239u64);
        let f = factor(&n).unwrap();
        assert_eq!(f.factors().len(), 2);
        // 3^59 - 1 = 2 · 14425532687 · 489769993189671059; the cofactor after
        // trial division lies above the primality range but still splits
        let m = BigUint::from(3u32).pow(59) - 1u32;
        let f = factor(&m).unwrap();
        assert_eq!(expand(&f), m);
        assert_eq!(f.factors().len(), 3);
    }

    #[test]
    fn caps() {
        // a prime above the deterministic Miller-Rabin range cannot be certified
        let p89 = (BigUint::one() << 89u32) - 1u32;
        assert!(matches!(factor(&p89), Err(Error::FactorizationTooHard(_))));
        let big = BigUint::one() << 100u32;
        assert!(matches!(factor(&big), Err(Error::FactorizationTooHard(_))));
        assert!(factor_with_cap(&big, 128).is_ok());
        assert!(factor(&BigUint::zero()).is_err());
    }
}
