use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// `a + b·s` in `Z[s]/(s² - p^m)`, i.e. `a + b·sqrt(p^m)` with nonnegative
/// coordinates.
///
/// Comparisons against integers are decided exactly: for `F > a` the sign of
/// `F - (a + b·s)` is the sign of `(F - a)² - b²·p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgNum {
    a: BigUint,
    b: BigUint,
    p: u64,
    m: u32,
    radicand: BigUint,
}

impl AlgNum {
    pub fn new(a: BigUint, b: BigUint, p: u64, m: u32) -> Self {
        let radicand = BigUint::from(p).pow(m);
        Self {
            a,
            b,
            p,
            m,
            radicand,
        }
    }

    /// `1 + sqrt(p^m)`.
    pub fn one_plus_root(p: u64, m: u32) -> Self {
        Self::new(BigUint::one(), BigUint::one(), p, m)
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    /// `p^m`, the square of the adjoined root.
    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn same_ring(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m
    }

    /// `(a₁ + b₁s)(a₂ + b₂s) = (a₁a₂ + b₁b₂p^m) + (a₁b₂ + a₂b₁)s`.
    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.same_ring(other), "AlgNum values from different rings");
        Self {
            a: &self.a * &other.a + &self.b * &other.b * &self.radicand,
            b: &self.a * &other.b + &other.a * &self.b,
            p: self.p,
            m: self.m,
            radicand: self.radicand.clone(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::new(BigUint::one(), BigUint::zero(), self.p, self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Ordering of `self` relative to the integer `f`.
    pub fn cmp_int(&self, f: &BigUint) -> Ordering {
        if f <= &self.a {
            if f == &self.a && (self.b.is_zero() || self.radicand.is_zero()) {
                return Ordering::Equal;
            }
            return Ordering::Greater;
        }
        // f > a: compare b·s with f - a
        let gap = f - &self.a;
        let lhs = &self.b * &self.b * &self.radicand;
        lhs.cmp(&(&gap * &gap))
    }

    /// `⌊a + b·s⌋`. The candidate `a + ⌊sqrt(b²p^m)⌋` is confirmed by the
    /// exact sign tests `F <= self < F + 1`.
    pub fn floor(&self) -> BigUint {
        let f = &self.a + (&self.b * &self.b * &self.radicand).sqrt();
        assert_ne!(self.cmp_int(&f), Ordering::Less);
        assert_eq!(self.cmp_int(&(&f + 1u32)), Ordering::Less);
        f
    }
}
