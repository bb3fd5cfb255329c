//! Orders of `GL_n`, `GSp_2n` and `Sp_2n` over `Z/NZ`.
//!
//! The closed forms are multiplicative over the prime powers of `N` and lift
//! from the residue field by the dimension of the group scheme:
//!
//! * `#GL_n(Z/p^k) = p^((k-1)n²) · ∏_{i<n} (p^n - p^i)`
//! * `#GSp_2n(Z/p^k) = p^((k-1)(2n²+n+1)) · (p-1) p^(n²) ∏_{i=1..n} (p^(2i) - 1)`
//! * `#Sp_2n(Z/p^k) = p^((k-1)(2n²+n)) · p^(n²) ∏_{i=1..n} (p^(2i) - 1)`
//!
//! The `*_bruteforce` functions count matrices directly and serve as oracles
//! for the formulas on tiny instances.

use num_bigint::BigUint;
use num_integer::Integer;
use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::arith::{factor, factor_u64, FactoredNat};
use crate::{Error, Result};

/// Candidate-matrix limit for the enumeration oracles.
pub const ENUMERATION_LIMIT: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `n × n` invertible matrices.
    GL,
    /// `2n × 2n` symplectic similitudes.
    GSp,
    /// `2n × 2n` symplectic matrices.
    Sp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::GL => "GL",
            Family::GSp => "GSp",
            Family::Sp => "Sp",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub family: Family,
    pub n: u32,
    pub modulus: u64,
}

impl GroupSpec {
    pub fn new(family: Family, n: u32, modulus: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("matrix size parameter n must be >= 1"));
        }
        if modulus < 2 {
            return Err(Error::invalid("modulus must be >= 2"));
        }
        Ok(Self { family, n, modulus })
    }

    /// Side length of the matrices.
    pub fn dim(&self) -> u32 {
        match self.family {
            Family::GL => self.n,
            Family::GSp | Family::Sp => 2 * self.n,
        }
    }

    pub fn order(&self) -> Result<FactoredNat> {
        match self.family {
            Family::GL => gl_order(self.n, self.modulus),
            Family::GSp => gsp_order(self.n, self.modulus),
            Family::Sp => sp_order(self.n, self.modulus),
        }
    }

    pub fn order_bruteforce(&self) -> Result<u64> {
        match self.family {
            Family::GL => gl_order_bruteforce(self.n, self.modulus),
            Family::GSp => gsp_order_bruteforce(self.n, self.modulus),
            Family::Sp => sp_order_bruteforce(self.n, self.modulus),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}(Z/{}Z)", self.family, self.dim(), self.modulus)
    }
}

fn mobius(n: u64) -> i32 {
    let f = factor_u64(n);
    if f.factors().iter().any(|(_, e)| *e > BigUint::from(1u32)) {
        0
    } else if f.factors().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n.isqrt())
        .filter(|d| n.is_multiple_of(*d))
        .flat_map(|d| [d, n / d])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

thread_local! {
    static CYCLOTOMIC: RefCell<HashMap<(u64, u64), FactoredNat>> = RefCell::new(HashMap::new());
}

/// `Φ_d(p)` factored, via `Φ_d(x) = ∏_{k | d} (x^k - 1)^μ(d/k)`.
fn cyclotomic_value(p: u64, d: u64) -> Result<FactoredNat> {
    if let Some(hit) = CYCLOTOMIC.with(|c| c.borrow().get(&(p, d)).cloned()) {
        return Ok(hit);
    }
    let x = BigUint::from(p);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for k in divisors(d) {
        let term = x.pow(k as u32) - 1u32;
        match mobius(d / k) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    let (value, rem) = num.div_rem(&den);
    debug_assert!(rem == BigUint::ZERO);
    let f = factor(&value)?;
    CYCLOTOMIC.with(|c| c.borrow_mut().insert((p, d), f.clone()));
    Ok(f)
}

/// `p^j - 1` factored through its cyclotomic pieces.
fn pow_minus_one(p: u64, j: u64) -> Result<FactoredNat> {
    divisors(j)
        .into_iter()
        .map(|d| cyclotomic_value(p, d))
        .product()
}

fn per_prime_power(
    modulus: u64,
    local: impl Fn(u64, u64) -> Result<FactoredNat>,
) -> Result<FactoredNat> {
    if modulus < 2 {
        return Err(Error::invalid("modulus must be >= 2"));
    }
    factor_u64(modulus)
        .factors()
        .iter()
        .map(|(p, k)| {
            use num_traits::ToPrimitive;
            local(p.to_u64().unwrap(), k.to_u64().unwrap())
        })
        .product()
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("matrix size parameter n must be >= 1"));
    }
    Ok(())
}

/// `#GL_n(Z/NZ)`.
pub fn gl_order(n: u32, modulus: u64) -> Result<FactoredNat> {
    check_n(n)?;
    let n = n as u64;
    per_prime_power(modulus, |p, k| {
        // ∏_{i<n}(p^n - p^i) = p^(n(n-1)/2) ∏_{j=1..n}(p^j - 1)
        let exp = (k - 1) * n * n + n * (n - 1) / 2;
        let mut acc = FactoredNat::prime_power(p, exp);
        for j in 1..=n {
            acc = &acc * &pow_minus_one(p, j)?;
        }
        Ok(acc)
    })
}

/// `#GSp_2n(Z/NZ)`, the symplectic similitude group.
pub fn gsp_order(n: u32, modulus: u64) -> Result<FactoredNat> {
    check_n(n)?;
    let n = n as u64;
    per_prime_power(modulus, |p, k| {
        let exp = (k - 1) * (2 * n * n + n + 1) + n * n;
        let mut acc = &FactoredNat::prime_power(p, exp) * &pow_minus_one(p, 1)?;
        for i in 1..=n {
            acc = &acc * &pow_minus_one(p, 2 * i)?;
        }
        Ok(acc)
    })
}

/// `#Sp_2n(Z/NZ)`.
pub fn sp_order(n: u32, modulus: u64) -> Result<FactoredNat> {
    check_n(n)?;
    let n = n as u64;
    per_prime_power(modulus, |p, k| {
        let exp = (k - 1) * (2 * n * n + n) + n * n;
        let mut acc = FactoredNat::prime_power(p, exp);
        for i in 1..=n {
            acc = &acc * &pow_minus_one(p, 2 * i)?;
        }
        Ok(acc)
    })
}

fn candidate_count(modulus: u64, entries: u32) -> Result<u64> {
    let count = (modulus as u128).checked_pow(entries);
    match count {
        Some(c) if c <= ENUMERATION_LIMIT as u128 => Ok(c as u64),
        _ => Err(Error::TooLargeForEnumeration {
            candidates: format!("{modulus}^{entries}"),
            limit: ENUMERATION_LIMIT.to_string(),
        }),
    }
}

/// Fraction-free Gaussian elimination; exact integer determinant.
fn bareiss_det(mut a: Vec<i128>, n: usize) -> i128 {
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k] == 0 {
            match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                Some(r) => {
                    for c in 0..n {
                        a.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = a[k * n + k];
    }
    sign * a[n * n - 1]
}

/// Counts `n × n` matrices over `Z/NZ` with unit determinant.
pub fn gl_order_bruteforce(n: u32, modulus: u64) -> Result<u64> {
    check_n(n)?;
    if modulus < 2 {
        return Err(Error::invalid("modulus must be >= 2"));
    }
    candidate_count(modulus, n * n)?;
    let size = (n * n) as usize;
    let mut digits = vec![0u64; size];
    let mut count = 0u64;
    let m = modulus as i128;
    loop {
        let det = bareiss_det(digits.iter().map(|&d| d as i128).collect(), n as usize);
        if (det.rem_euclid(m) as u64).gcd(&modulus) == 1 {
            count += 1;
        }
        // odometer
        let mut i = 0;
        loop {
            if i == size {
                return Ok(count);
            }
            digits[i] += 1;
            if digits[i] < modulus {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Counts `2n × 2n` matrices `M` over `Z/NZ` with `MᵀJM = λJ` for some
/// `λ` in `lambdas`, `J = [[0, I], [-I, 0]]`.
///
/// Column `c_i` of `M` satisfies `ω(c_i, c_j) = λ J_ij` where `ω(x, y) =
/// xᵀJy`, so the candidate space is walked column by column and a partial
/// matrix is abandoned as soon as one pairing is violated. Every matrix is
/// still accounted for; λ is determined by `M`, so summing over λ counts
/// each similitude once.
fn count_similitudes(n: u32, modulus: u64, lambdas: &[u64]) -> Result<u64> {
    check_n(n)?;
    if modulus < 2 {
        return Err(Error::invalid("modulus must be >= 2"));
    }
    let dim = 2 * n as usize;
    candidate_count(modulus, (dim * dim) as u32)?;
    let nn = n as usize;
    let vectors: Vec<Vec<u64>> = {
        let total = modulus.pow(dim as u32);
        (0..total)
            .map(|mut idx| {
                (0..dim)
                    .map(|_| {
                        let d = idx % modulus;
                        idx /= modulus;
                        d
                    })
                    .collect()
            })
            .collect()
    };
    let omega = |x: &[u64], y: &[u64]| -> u64 {
        let mut s: u128 = 0;
        for i in 0..nn {
            s += x[i] as u128 * y[nn + i] as u128;
            s += (modulus - x[nn + i]) as u128 * y[i] as u128;
        }
        (s % modulus as u128) as u64
    };

    fn walk(
        depth: usize,
        chosen: &mut Vec<usize>,
        vectors: &[Vec<u64>],
        dim: usize,
        nn: usize,
        lambda: u64,
        omega: &dyn Fn(&[u64], &[u64]) -> u64,
    ) -> u64 {
        if depth == dim {
            return 1;
        }
        let mut total = 0;
        for (idx, v) in vectors.iter().enumerate() {
            let ok = chosen.iter().enumerate().all(|(j, &cj)| {
                let want = if depth == j + nn { lambda } else { 0 };
                omega(&vectors[cj], v) == want
            });
            if ok {
                chosen.push(idx);
                total += walk(depth + 1, chosen, vectors, dim, nn, lambda, omega);
                chosen.pop();
            }
        }
        total
    }

    let mut count = 0;
    for &lambda in lambdas {
        let mut chosen = Vec::with_capacity(dim);
        count += walk(0, &mut chosen, &vectors, dim, nn, lambda % modulus, &omega);
    }
    Ok(count)
}

/// Counts symplectic similitudes over `Z/NZ` by enumeration.
pub fn gsp_order_bruteforce(n: u32, modulus: u64) -> Result<u64> {
    let units: Vec<u64> = (1..modulus).filter(|l| l.gcd(&modulus) == 1).collect();
    count_similitudes(n, modulus, &units)
}

/// Counts symplectic matrices over `Z/NZ` by enumeration.
pub fn sp_order_bruteforce(n: u32, modulus: u64) -> Result<u64> {
    count_similitudes(n, modulus, &[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn value(f: &FactoredNat) -> u64 {
        f.to_biguint().to_u64().unwrap()
    }

    #[test]
    fn gl_examples() {
        for n in 2..40u64 {
            let units = (1..n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(value(&gl_order(1, n).unwrap()), units);
        }
        assert_eq!(
            gl_order(2, 3).unwrap(),
            FactoredNat::from_u64_pairs(&[(2, 4), (3, 1)]).unwrap()
        );
        assert_eq!(value(&gl_order(2, 4).unwrap()), 96);
    }

    #[test]
    fn gsp_examples() {
        for n in 2..30 {
            assert_eq!(gsp_order(1, n).unwrap(), gl_order(2, n).unwrap());
        }
        assert_eq!(value(&gsp_order(2, 2).unwrap()), 720);
        assert_eq!(value(&gsp_order(2, 3).unwrap()), 103_680);
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(gl_order_bruteforce(1, 5).unwrap(), 4);
        assert_eq!(gl_order_bruteforce(2, 3).unwrap(), 48);
        assert_eq!(gl_order_bruteforce(2, 4).unwrap(), 96);
        assert_eq!(gsp_order_bruteforce(1, 4).unwrap(), 96);
        assert_eq!(gsp_order_bruteforce(2, 2).unwrap(), 720);
        assert_eq!(sp_order_bruteforce(1, 3).unwrap(), 24);
    }

    #[test]
    fn lifting_exponent_pinned_by_enumeration() {
        for modulus in [4u64, 8, 9] {
            assert_eq!(
                value(&gsp_order(1, modulus).unwrap()),
                gsp_order_bruteforce(1, modulus).unwrap(),
                "GSp_2(Z/{modulus}Z)"
            );
            assert_eq!(
                value(&sp_order(1, modulus).unwrap()),
                sp_order_bruteforce(1, modulus).unwrap(),
                "Sp_2(Z/{modulus}Z)"
            );
        }
    }

    #[test]
    fn enumeration_limits() {
        assert!(matches!(
            gsp_order_bruteforce(2, 4),
            Err(Error::TooLargeForEnumeration { .. })
        ));
        assert!(matches!(
            gl_order_bruteforce(4, 4),
            Err(Error::TooLargeForEnumeration { .. })
        ));
        assert!(gl_order(0, 3).is_err());
        assert!(gsp_order(1, 1).is_err());
        assert!(GroupSpec::new(Family::GL, 1, 1).is_err());
    }

    #[test]
    fn determinant() {
        assert_eq!(bareiss_det(vec![2, 0, 1, 1, 3, 2, 1, 1, 2], 3), 6);
        assert_eq!(bareiss_det(vec![0, 0, 1, 0, 1, 0, 1, 0, 0], 3), -1);
        assert_eq!(bareiss_det(vec![0, 1, 1, 0], 2), -1);
        assert_eq!(bareiss_det(vec![1, 2, 2, 4], 2), 0);
        assert_eq!(bareiss_det(vec![7], 1), 7);
    }

    #[test]
    fn spec_display() {
        let s = GroupSpec::new(Family::GSp, 2, 3).unwrap();
        assert_eq!(s.to_string(), "GSp_4(Z/3Z)");
        assert_eq!(value(&s.order().unwrap()), 103_680);
    }
}
