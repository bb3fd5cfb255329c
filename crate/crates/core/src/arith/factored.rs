use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use super::primes::{is_prime, mr_limit};
use crate::{Error, Result};

/// A positive integer held as its prime factorization.
///
/// Primes are strictly increasing and every exponent is at least one; the
/// empty factorization is `1`. Exponents are unbounded so that caps like
/// `5^2312` or `(2*3*5)^1156` stay cheap to build and compare.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactoredNat {
    factors: Vec<(BigUint, BigUint)>,
}

impl FactoredNat {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a factorization from `(prime, exponent)` pairs, checking every
    /// invariant. Primes beyond the deterministic primality range are
    /// rejected.
    pub fn new(factors: Vec<(BigUint, BigUint)>) -> Result<Self> {
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::invalid(format!(
                    "primes must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        for (p, e) in &factors {
            if e.is_zero() {
                return Err(Error::invalid(format!("zero exponent on {p}")));
            }
            if p >= mr_limit() || !is_prime(p)? {
                return Err(Error::invalid(format!("{p} is not a certified prime")));
            }
        }
        Ok(Self { factors })
    }

    /// `p^e` for a prime `p` (not re-checked). `e = 0` gives one.
    pub fn prime_power(p: impl Into<BigUint>, e: impl Into<BigUint>) -> Self {
        let e = e.into();
        if e.is_zero() {
            return Self::one();
        }
        Self {
            factors: vec![(p.into(), e)],
        }
    }

    pub(crate) fn from_sorted(factors: Vec<(BigUint, BigUint)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|(_, e)| !e.is_zero()));
        Self { factors }
    }

    /// Convenience constructor from small pairs; checks invariants.
    pub fn from_u64_pairs(pairs: &[(u64, u64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(p, e)| (BigUint::from(p), BigUint::from(e)))
                .collect(),
        )
    }

    pub fn factors(&self) -> &[(BigUint, BigUint)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigUint) -> BigUint {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1.clone())
            .unwrap_or_default()
    }

    pub fn exponent_of_u64(&self, p: u64) -> BigUint {
        self.exponent_of(&BigUint::from(p))
    }

    pub fn largest_prime(&self) -> Option<&BigUint> {
        self.factors.last().map(|(p, _)| p)
    }

    /// Sum of the two factorizations' exponents, prime by prime.
    fn merge(
        &self,
        other: &Self,
        keep: impl Fn(Option<&BigUint>, Option<&BigUint>) -> Option<BigUint>,
    ) -> Self {
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len().max(b.len()));
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (p, e) = match ord {
                Ordering::Less => {
                    i += 1;
                    (&a[i - 1].0, keep(Some(&a[i - 1].1), None))
                }
                Ordering::Greater => {
                    j += 1;
                    (&b[j - 1].0, keep(None, Some(&b[j - 1].1)))
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (&a[i - 1].0, keep(Some(&a[i - 1].1), Some(&b[j - 1].1)))
                }
            };
            if let Some(e) = e.filter(|e| !e.is_zero()) {
                out.push((p.clone(), e));
            }
        }
        Self { factors: out }
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        if e.is_zero() {
            return Self::one();
        }
        Self {
            factors: self
                .factors
                .iter()
                .map(|(p, k)| (p.clone(), k * e))
                .collect(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.merge(other, |x, y| match (x, y) {
            (Some(x), Some(y)) => Some(x.min(y).clone()),
            _ => None,
        })
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.merge(other, |x, y| match (x, y) {
            (Some(x), Some(y)) => Some(x.max(y).clone()),
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            _ => None,
        })
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.factors.iter().all(|(p, e)| other.exponent_of(p) >= *e)
    }

    /// `self / other`, failing unless the division is exact.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        if !other.divides(self) {
            return Err(Error::DivisibilityViolation {
                divisor: other.to_string(),
                dividend: self.to_string(),
            });
        }
        Ok(self.merge(other, |x, y| match (x, y) {
            (Some(x), Some(y)) => Some(x - y),
            (Some(x), None) => Some(x.clone()),
            _ => None,
        }))
    }

    /// Approximate `log2` of the represented value.
    pub fn log2(&self) -> f64 {
        self.factors
            .iter()
            .map(|(p, e)| {
                let lp = p.to_f64().unwrap_or(f64::INFINITY).log2();
                lp * e.to_f64().unwrap_or(f64::INFINITY)
            })
            .sum()
    }

    /// Expands the product, or `None` when it would exceed `max_bits` bits.
    pub fn to_biguint_within(&self, max_bits: u64) -> Option<BigUint> {
        if self.log2() > max_bits as f64 + 1.0 {
            return None;
        }
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(e.to_u32()?);
        }
        Some(acc)
    }

    /// Expands the product. Panics on values too large to hold (beyond
    /// 2^32 bits); use [`FactoredNat::to_biguint_within`] for untrusted sizes.
    pub fn to_biguint(&self) -> BigUint {
        self.to_biguint_within(u32::MAX as u64)
            .expect("factored value too large to expand")
    }

    /// Exact comparison without expanding when the sizes are far apart.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let (a, b) = (self.log2(), other.log2());
        if (a - b).abs() > 2.0 + 1e-9 * a.max(b) {
            return a.partial_cmp(&b).unwrap();
        }
        self.to_biguint().cmp(&other.to_biguint())
    }
}

impl Mul for &FactoredNat {
    type Output = FactoredNat;

    fn mul(self, rhs: &FactoredNat) -> FactoredNat {
        self.merge(rhs, |x, y| match (x, y) {
            (Some(x), Some(y)) => Some(x + y),
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            _ => None,
        })
    }
}

impl Mul for FactoredNat {
    type Output = FactoredNat;

    fn mul(self, rhs: FactoredNat) -> FactoredNat {
        &self * &rhs
    }
}

impl std::iter::Product for FactoredNat {
    fn product<I: Iterator<Item = FactoredNat>>(iter: I) -> Self {
        iter.fold(FactoredNat::one(), |acc, x| &acc * &x)
    }
}

/// `2^4 · 3 · 5^2`; exponents of one are omitted and the empty product
/// prints as `1`.
impl fmt::Display for FactoredNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            if e.is_one() {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fnat(pairs: &[(u64, u64)]) -> FactoredNat {
        FactoredNat::from_u64_pairs(pairs).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(FactoredNat::from_u64_pairs(&[(3, 1), (2, 1)]).is_err());
        assert!(FactoredNat::from_u64_pairs(&[(2, 1), (2, 1)]).is_err());
        assert!(FactoredNat::from_u64_pairs(&[(2, 0)]).is_err());
        assert!(FactoredNat::from_u64_pairs(&[(4, 1)]).is_err());
        assert!(FactoredNat::from_u64_pairs(&[]).unwrap().is_one());
    }

    #[test]
    fn arithmetic() {
        let a = fnat(&[(2, 4), (3, 1)]);
        let b = fnat(&[(2, 1), (5, 2)]);
        assert_eq!(&a * &b, fnat(&[(2, 5), (3, 1), (5, 2)]));
        assert_eq!(a.gcd(&b), fnat(&[(2, 1)]));
        assert_eq!(a.lcm(&b), fnat(&[(2, 4), (3, 1), (5, 2)]));
        assert!(fnat(&[(2, 3)]).divides(&a));
        assert!(!b.divides(&a));
        assert_eq!(a.div_exact(&fnat(&[(3, 1)])).unwrap(), fnat(&[(2, 4)]));
        assert!(a.div_exact(&b).is_err());
        assert_eq!(a.pow(&BigUint::from(3u32)), fnat(&[(2, 12), (3, 3)]));
        assert_eq!(a.to_biguint(), BigUint::from(48u32));
        assert_eq!(a.exponent_of_u64(2), BigUint::from(4u32));
        assert_eq!(a.exponent_of_u64(7), BigUint::zero());
    }

    #[test]
    fn display() {
        assert_eq!(fnat(&[(2, 1), (11, 1)]).to_string(), "2 · 11");
        assert_eq!(fnat(&[(2, 4), (3, 1)]).to_string(), "2^4 · 3");
        assert_eq!(FactoredNat::one().to_string(), "1");
    }

    #[test]
    fn compare_values() {
        let a = fnat(&[(2, 10)]);
        let b = fnat(&[(3, 6), (5, 1)]);
        assert_eq!(a.cmp_value(&b), 1024u32.cmp(&3645));
        let huge = FactoredNat::prime_power(5u32, 2312u32);
        assert_eq!(huge.cmp_value(&a), Ordering::Greater);
        assert!(huge.to_biguint_within(100).is_none());
    }
}
