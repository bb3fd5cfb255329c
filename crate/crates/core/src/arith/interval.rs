//! Outward-rounded dyadic interval arithmetic.
//!
//! An [`Interval`] is `[lo, hi] · 2^-prec` with integer endpoints. Every
//! operation rounds the lower endpoint toward -inf and the upper endpoint
//! toward +inf, so the true value of any expression built from exact inputs
//! stays inside the result.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

fn shift_floor(a: &BigInt, bits: u32) -> BigInt {
    a >> bits as usize
}

fn shift_ceil(a: &BigInt, bits: u32) -> BigInt {
    -((-a) >> bits as usize)
}

impl Interval {
    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Self::hull(r, r, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        let v = n.into() << prec as usize;
        Self {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    /// Smallest dyadic interval containing the rational range `[lo, hi]`.
    pub fn hull(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        assert!(lo <= hi);
        let scale = BigInt::one() << prec as usize;
        Self {
            lo: floor_div(&(lo.numer() * &scale), lo.denom()),
            hi: ceil_div(&(hi.numer() * &scale), hi.denom()),
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> Rational {
        Rational::new(self.lo.clone(), BigInt::one() << self.prec as usize)
    }

    pub fn upper(&self) -> Rational {
        Rational::new(self.hi.clone(), BigInt::one() << self.prec as usize)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// `Some(ordering of self vs r)` when the interval lies strictly on one
    /// side of `r`, `None` when it straddles it.
    pub fn cmp_rational(&self, r: &Rational) -> Option<Ordering> {
        if self.upper() < *r {
            Some(Ordering::Less)
        } else if self.lower() > *r {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Midpoint as `f64`, for display only.
    pub fn midpoint_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let mid = Rational::new(&self.lo + &self.hi, BigInt::from(2) << self.prec as usize);
        mid.to_f64().unwrap_or(f64::NAN)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.prec, other.prec, "interval precision mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let prods = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = prods.iter().min().unwrap();
        let max = prods.iter().max().unwrap();
        Self {
            lo: shift_floor(min, self.prec),
            hi: shift_ceil(max, self.prec),
            prec: self.prec,
        }
    }

    /// `None` if the divisor contains zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        self.check(other);
        if other.contains_zero() {
            return None;
        }
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            let scaled = a << self.prec as usize;
            for b in [&other.lo, &other.hi] {
                let f = floor_div(&scaled, b);
                let c = ceil_div(&scaled, b);
                if lo.as_ref().is_none_or(|l| f < *l) {
                    lo = Some(f);
                }
                if hi.as_ref().is_none_or(|h| c > *h) {
                    hi = Some(c);
                }
            }
        }
        Some(Self {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            prec: self.prec,
        })
    }

    /// Square root of a nonnegative interval.
    pub fn sqrt(&self) -> Self {
        assert!(!self.lo.is_negative(), "sqrt of negative interval");
        // sqrt(x / 2^P) · 2^P = sqrt(x · 2^P)
        let lo = (self.lo.magnitude() << self.prec as usize).sqrt();
        let hi_sq = self.hi.magnitude() << self.prec as usize;
        let mut hi = hi_sq.sqrt();
        if &hi * &hi < hi_sq {
            hi += 1u32;
        }
        Self {
            lo: BigInt::from(lo),
            hi: BigInt::from(hi),
            prec: self.prec,
        }
    }

    /// Natural logarithm of a strictly positive interval.
    pub fn ln(&self) -> Self {
        assert!(self.lo.is_positive(), "ln of non-positive interval");
        let scale = BigInt::one() << self.prec as usize;
        let lo = ln_enclosure(&Rational::new(self.lo.clone(), scale.clone()), self.prec).0;
        let hi = ln_enclosure(&Rational::new(self.hi.clone(), scale), self.prec).1;
        Self {
            lo,
            hi,
            prec: self.prec,
        }
    }
}

const GUARD_BITS: u32 = 24;

/// Lower and upper bounds of `atanh(z)·2^w` for `0 <= z < 1/2` given as
/// fixed-point enclosures `zl <= z·2^w <= zh`.
fn atanh_series(zl: &BigUint, zh: &BigUint, w: u32) -> (BigUint, BigUint) {
    let w = w as usize;
    let lower = {
        let z2 = (zl * zl) >> w;
        let mut t = zl.clone();
        let mut sum = BigUint::zero();
        let mut k = 1u32;
        while !t.is_zero() {
            sum += &t / k;
            t = (&t * &z2) >> w;
            k += 2;
        }
        sum
    };
    let upper = {
        let z2sq = zh * zh;
        let mut z2 = &z2sq >> w;
        if (&z2 << w) < z2sq {
            z2 += 1u32;
        }
        let mut t = zh.clone();
        let mut sum = BigUint::zero();
        let mut k = 1u32;
        while t > BigUint::from(2u32) {
            sum += (&t + (k - 1)) / k;
            let prod = &t * &z2;
            t = &prod >> w;
            if (&t << w) < prod {
                t += 1u32;
            }
            k += 2;
        }
        // remaining terms are bounded by t·(1 + z² + z⁴ + ...) <= 2t for z² <= 1/2
        sum + 2u32 * t + 1u32
    };
    (lower, upper)
}

thread_local! {
    static LN2: RefCell<HashMap<u32, (BigUint, BigUint)>> = RefCell::new(HashMap::new());
}

/// `ln 2 · 2^w` enclosure, via `ln 2 = 2·atanh(1/3)`.
fn ln2_fixed(w: u32) -> (BigUint, BigUint) {
    LN2.with(|cache| {
        cache
            .borrow_mut()
            .entry(w)
            .or_insert_with(|| {
                let scaled = BigUint::one() << w as usize;
                let zl = &scaled / 3u32;
                let zh = &zl + 1u32;
                let (l, h) = atanh_series(&zl, &zh, w);
                (l << 1u32, h << 1u32)
            })
            .clone()
    })
}

/// Enclosure `(lo, hi)` of `ln(x)·2^prec` for a positive rational `x`.
pub(crate) fn ln_enclosure(x: &Rational, prec: u32) -> (BigInt, BigInt) {
    assert!(x.is_positive());
    let w = prec + GUARD_BITS;
    let num = x.numer().magnitude().clone();
    let den = x.denom().magnitude().clone();
    // k with 2^k <= x < 2^(k+1)
    let mut k = num.bits() as i64 - den.bits() as i64;
    let pow2 = |e: i64| BigUint::one() << e as usize;
    let ge = |k: i64| -> bool {
        if k >= 0 {
            num >= &den * pow2(k)
        } else {
            &num * pow2(-k) >= den
        }
    };
    while !ge(k) {
        k -= 1;
    }
    while ge(k + 1) {
        k += 1;
    }
    // y = x / 2^k in [1, 2); z = (y - 1)/(y + 1) = (num - den·2^k)/(num + den·2^k)
    let (a, b) = if k >= 0 {
        (num.clone(), &den * pow2(k))
    } else {
        (&num * pow2(-k), den.clone())
    };
    let znum = (&a - &b) << w as usize;
    let zden = &a + &b;
    let zl = &znum / &zden;
    let zh = if (&zl * &zden) == znum {
        zl.clone()
    } else {
        &zl + 1u32
    };
    let (sl, sh) = atanh_series(&zl, &zh, w);
    let (l2l, l2h) = ln2_fixed(w);
    let (l2l, l2h) = (BigInt::from(l2l), BigInt::from(l2h));
    let kb = BigInt::from(k);
    let (klo, khi) = if k >= 0 {
        (&kb * &l2l, &kb * &l2h)
    } else {
        (&kb * &l2h, &kb * &l2l)
    };
    let lo = klo + (BigInt::from(sl) << 1u32);
    let hi = khi + (BigInt::from(sh) << 1u32);
    (shift_floor(&lo, GUARD_BITS), shift_ceil(&hi, GUARD_BITS))
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use num_traits::ToPrimitive;
        let lo = self.lower().to_f64().unwrap_or(f64::NAN);
        let hi = self.upper().to_f64().unwrap_or(f64::NAN);
        write!(f, "[{lo:.12}, {hi:.12}]")
    }
}
