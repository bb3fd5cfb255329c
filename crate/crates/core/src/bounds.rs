//! The extremal functions `Φ(n)`, `Ψ(n)`, `H(n)`, `G(n)` and the inequalities
//! they satisfy.
//!
//! * `Φ(n) = max { m : φ(m) | 2n }`
//! * `Ψ(n) = max { m : φ(m) <= 2n }`
//! * `H(n) = gcd { #GSp_2n(Z/NZ) : N >= 3 }`
//! * `G(n) = #GL_2n(Z/3Z)`, or `#GL_2n(Z/4Z)` when the residue characteristic is 3.
//!
//! `Φ` and `Ψ` are computed by enumerating every `m` in the relevant inverse
//! totient set prime by prime. The plain scan over `m <= 8n²` is kept as
//! [`phi_cap_exhaustive`] / [`psi_cap_exhaustive`]; the cutoff is sound
//! because `φ(m) >= sqrt(m/2)`.

use num_bigint::{BigInt, BigUint};
use std::cmp::Ordering;
use std::fmt;

use crate::arith::{
    factor_u64, is_prime_u64, primes_up_to, totient_u64, vp_u64, FactoredNat, Interval, Rational,
};
use crate::group_orders::{gl_order, gsp_order};
use crate::{Error, Result};

/// Largest `n` accepted by [`phi_cap`] and [`psi_cap`].
pub const CAP_N_MAX: u64 = 1_000_000;
/// Largest `n` accepted by the exhaustive oracles (`8n²` totients are sieved).
pub const EXHAUSTIVE_N_MAX: u64 = 2_000;
pub const H_EXACT_N_MAX: u64 = 10_000;
pub const H_ORACLE_N_MAX: u32 = 8;
pub const H_ORACLE_MODULUS_MAX: u64 = 500;
/// Default upper modulus for the gcd definition of `H`.
pub const DEFAULT_H_ORACLE_MODULUS: u64 = 200;
pub const G_N_MAX: u32 = 1_000;
pub const H_BOUND_N_MAX: u64 = 1_000;

/// Precisions tried, in order, by the interval-based checks.
pub const PRECISION_LADDER: [u32; 4] = [64, 128, 256, 512];

fn check_cap_n(n: u64, max: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    if n > max {
        return Err(Error::cap("n", n, max));
    }
    Ok(())
}

/// `8n²`: every `m` with `φ(m) <= 2n` lies at or below it.
pub fn search_bound(n: u64) -> u64 {
    8 * n * n
}

fn phi_cap_value(n: u64) -> u64 {
    let target = 2 * n;
    let mut candidates: Vec<u64> = (1..=target.isqrt())
        .filter(|d| target.is_multiple_of(*d))
        .flat_map(|d| [d, target / d])
        .map(|d| d + 1)
        .filter(|&p| is_prime_u64(p))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    fn walk(primes: &[u64], from: usize, phi: u64, m: u64, target: u64, best: &mut u64) {
        *best = (*best).max(m);
        for (j, &p) in primes.iter().enumerate().skip(from) {
            let mut phi_next = phi * (p - 1);
            if !target.is_multiple_of(phi_next) {
                continue;
            }
            let mut m_next = m * p;
            loop {
                walk(primes, j + 1, phi_next, m_next, target, best);
                phi_next *= p;
                if !target.is_multiple_of(phi_next) {
                    break;
                }
                m_next *= p;
            }
        }
    }

    let mut best = 1;
    walk(&candidates, 0, 1, 1, target, &mut best);
    best
}

fn psi_cap_value(n: u64) -> Result<u64> {
    let target = 2 * n;
    let primes = primes_up_to(target + 1)?;

    fn walk(primes: &[u64], from: usize, phi: u64, m: u64, target: u64, best: &mut u64) {
        *best = (*best).max(m);
        for (j, &p) in primes.iter().enumerate().skip(from) {
            let mut phi_next = phi * (p - 1);
            if phi_next > target {
                break;
            }
            let mut m_next = m * p;
            while phi_next <= target {
                walk(primes, j + 1, phi_next, m_next, target, best);
                phi_next *= p;
                m_next *= p;
            }
        }
    }

    let mut best = 1;
    walk(&primes, 0, 1, 1, target, &mut best);
    Ok(best)
}

/// `Φ(n)`, factored.
pub fn phi_cap(n: u64) -> Result<FactoredNat> {
    check_cap_n(n, CAP_N_MAX)?;
    Ok(factor_u64(phi_cap_value(n)))
}

/// `Ψ(n)`, factored.
pub fn psi_cap(n: u64) -> Result<FactoredNat> {
    check_cap_n(n, CAP_N_MAX)?;
    Ok(factor_u64(psi_cap_value(n)?))
}

/// `φ(0..=limit)` by a sieve (`φ(0)` is stored as 0).
pub fn totient_table(limit: u64) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit).collect();
    for i in 2..=limit as usize {
        if phi[i] == i as u64 {
            for j in (i..=limit as usize).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi
}

/// `Φ(n)` by scanning every `m <= 8n²`.
pub fn phi_cap_exhaustive(n: u64) -> Result<u64> {
    check_cap_n(n, EXHAUSTIVE_N_MAX)?;
    let phi = totient_table(search_bound(n));
    Ok((1..phi.len() as u64)
        .rev()
        .find(|&m| (2 * n).is_multiple_of(phi[m as usize]))
        .unwrap())
}

/// `Ψ(n)` by scanning every `m <= 8n²`.
pub fn psi_cap_exhaustive(n: u64) -> Result<u64> {
    check_cap_n(n, EXHAUSTIVE_N_MAX)?;
    let phi = totient_table(search_bound(n));
    Ok((1..phi.len() as u64)
        .rev()
        .find(|&m| phi[m as usize] <= 2 * n)
        .unwrap())
}

/// `H(n) = 2^-(n-1) ∏_{q <= 2n+1} q^r(q)` with
/// `r(2) = n + Σ_j ⌊2n/2^j⌋` and `r(q) = Σ_j ⌊2n/(q^j(q-1))⌋` for odd `q`.
pub fn h_exact(n: u64) -> Result<FactoredNat> {
    check_cap_n(n, H_EXACT_N_MAX)?;
    let two_n = 2 * n;
    let mut factors = Vec::new();
    for q in primes_up_to(two_n + 1)? {
        let mut r = if q == 2 { n } else { 0 };
        let mut denom = if q == 2 { 1 } else { q - 1 };
        while denom <= two_n {
            r += two_n / denom;
            denom *= q;
        }
        if q == 2 {
            r = r.checked_sub(n - 1).ok_or_else(|| {
                Error::InternalInconsistency(format!(
                    "2-exponent {r} of the H({n}) product is below {}",
                    n - 1
                ))
            })?;
        }
        if r > 0 {
            factors.push((BigUint::from(q), BigUint::from(r)));
        }
    }
    FactoredNat::new(factors)
}

/// `gcd { #GSp_2n(Z/NZ) : 3 <= N <= n_max }`.
pub fn h_gcd_oracle(n: u32, n_max: u64) -> Result<FactoredNat> {
    if n == 0 || n > H_ORACLE_N_MAX {
        return Err(Error::invalid(format!("n must be in 1..={H_ORACLE_N_MAX}")));
    }
    if !(3..=H_ORACLE_MODULUS_MAX).contains(&n_max) {
        return Err(Error::invalid(format!(
            "n_max must be in 3..={H_ORACLE_MODULUS_MAX}"
        )));
    }
    let mut acc = gsp_order(n, 3)?;
    for modulus in 4..=n_max {
        acc = acc.gcd(&gsp_order(n, modulus)?);
    }
    Ok(acc)
}

/// `G(n)`: `#GL_2n(Z/3Z)`, or `#GL_2n(Z/4Z)` when `p = 3`.
pub fn g_order_bound(n: u32, p_equals_3: bool) -> Result<FactoredNat> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    if n > G_N_MAX {
        return Err(Error::cap("n", n, G_N_MAX));
    }
    gl_order(2 * n, if p_equals_3 { 4 } else { 3 })
}

/// `3` or `4`, the modulus used by [`g_order_bound`].
pub fn g_modulus(p_equals_3: bool) -> u64 {
    if p_equals_3 {
        4
    } else {
        3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three elementary bounds on `Φ(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiBoundsReport {
    pub n: u64,
    pub phi: u64,
    /// `Φ(1) = 6`, and `6 <= Φ(n)` with `Φ(n)³ < 216n⁴` for `n > 1`.
    pub growth: Verdict,
    /// `Φ(n) <= 2n ∏_{i<=t} p_i/(p_i - 1)` with `t = v_2(n) + 2`.
    pub prime_product: Verdict,
    pub prime_product_bound: Rational,
    /// For odd primes `n > 3`: `Φ(n) = 4n + 2` if `2n + 1` is prime, else 6.
    pub sophie_germain: Verdict,
    pub sophie_germain_expected: Option<u64>,
}

impl PhiBoundsReport {
    pub fn all_hold(&self) -> bool {
        [self.growth, self.prime_product, self.sophie_germain]
            .iter()
            .all(|v| *v != Verdict::Fails)
    }
}

pub fn check_phi_bounds(n: u64) -> Result<PhiBoundsReport> {
    check_cap_n(n, CAP_N_MAX)?;
    let phi = phi_cap_value(n);

    let growth = if n == 1 {
        Verdict::from_bool(phi == 6)
    } else {
        let lhs = (phi as u128).pow(3);
        let rhs = 216 * (n as u128).pow(4);
        Verdict::from_bool(phi >= 6 && lhs < rhs)
    };

    let t = vp_u64(2, n) as usize + 2;
    let mut bound = Rational::from_integer(BigInt::from(2 * n));
    let mut primes_seen = 0;
    let mut q = 2u64;
    while primes_seen < t {
        if is_prime_u64(q) {
            bound *= Rational::new(BigInt::from(q), BigInt::from(q - 1));
            primes_seen += 1;
        }
        q += 1;
    }
    let prime_product = Verdict::from_bool(Rational::from_integer(BigInt::from(phi)) <= bound);

    let (sophie_germain, sophie_germain_expected) = if n > 3 && n % 2 == 1 && is_prime_u64(n) {
        let expected = if is_prime_u64(2 * n + 1) {
            4 * n + 2
        } else {
            6
        };
        (Verdict::from_bool(phi == expected), Some(expected))
    } else {
        (Verdict::NotApplicable, None)
    };

    Ok(PhiBoundsReport {
        n,
        phi,
        growth,
        prime_product,
        prime_product_bound: bound,
        sophie_germain,
        sophie_germain_expected,
    })
}

/// `2(9n)^(2n)`.
pub fn h_upper_bound(n: u64) -> BigUint {
    BigUint::from(2u32) * BigUint::from(9 * n).pow((2 * n) as u32)
}

/// `H(n) < 2(9n)^(2n)`, by exact integer comparison.
pub fn check_h_bound(n: u64) -> Result<bool> {
    check_cap_n(n, H_BOUND_N_MAX)?;
    Ok(h_exact(n)?.to_biguint() < h_upper_bound(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RosserForm {
    /// `φ(m) > m / (e^γ log log m + 3 / log log m)` for all `m >= 3`.
    Three,
    /// The sharper `5 / (2 log log m)` variant, with one known exception.
    FiveHalves,
}

impl RosserForm {
    fn constant(&self) -> Rational {
        match self {
            RosserForm::Three => Rational::from_integer(3.into()),
            RosserForm::FiveHalves => Rational::new(5.into(), 2.into()),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RosserForm::Three => "3/loglog",
            RosserForm::FiveHalves => "5/(2loglog)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Holds,
    Fails,
    Undecided,
    NotApplicable,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::Holds => "holds",
            Decision::Fails => "fails",
            Decision::Undecided => "undecided",
            Decision::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `e^γ ∈ [1.781072417, 1.781072418]`.
pub fn exp_euler_gamma(prec: u32) -> Interval {
    let den = BigInt::from(1_000_000_000u64);
    Interval::hull(
        &Rational::new(BigInt::from(1_781_072_417u64), den.clone()),
        &Rational::new(BigInt::from(1_781_072_418u64), den),
        prec,
    )
}

#[derive(Clone, Debug)]
pub struct RosserReport {
    pub m: u64,
    pub phi: u64,
    pub form: RosserForm,
    pub decision: Decision,
    /// Precision (bits) at which the decision was reached.
    pub precision: u32,
    /// Enclosure of the right-hand side at that precision.
    pub rhs: Option<Interval>,
}

fn rosser_rhs(m: u64, form: RosserForm, prec: u32) -> Option<Interval> {
    let loglog = Interval::from_int(m, prec).ln().ln();
    if !loglog.is_positive() {
        return None;
    }
    let c = Interval::from_rational(&form.constant(), prec);
    let den = exp_euler_gamma(prec).mul(&loglog).add(&c.div(&loglog)?);
    Interval::from_int(m, prec).div(&den)
}

/// Decides `φ(m) > m / (e^γ log log m + c / log log m)` with outward-rounded
/// intervals at escalating precision.
pub fn rosser_schoenfeld_check(m: u64, form: RosserForm) -> Result<RosserReport> {
    rosser_with_phi(m, totient_u64(m.max(1)), form)
}

fn rosser_with_phi(m: u64, phi: u64, form: RosserForm) -> Result<RosserReport> {
    if m < 3 {
        return Err(Error::invalid("the totient lower bound needs m >= 3"));
    }
    let target = Rational::from_integer(BigInt::from(phi));
    let mut last = None;
    for prec in PRECISION_LADDER {
        let Some(rhs) = rosser_rhs(m, form, prec) else {
            return Ok(RosserReport {
                m,
                phi,
                form,
                decision: Decision::NotApplicable,
                precision: prec,
                rhs: None,
            });
        };
        let decision = match rhs.cmp_rational(&target) {
            Some(Ordering::Less) => Some(Decision::Holds),
            Some(Ordering::Greater) => Some(Decision::Fails),
            _ => None,
        };
        if let Some(decision) = decision {
            return Ok(RosserReport {
                m,
                phi,
                form,
                decision,
                precision: prec,
                rhs: Some(rhs),
            });
        }
        last = Some(rhs);
    }
    Ok(RosserReport {
        m,
        phi,
        form,
        decision: Decision::Undecided,
        precision: *PRECISION_LADDER.last().unwrap(),
        rhs: last,
    })
}

/// Aggregate of a Rosser-Schoenfeld sweep.
#[derive(Clone, Debug, Default)]
pub struct RosserSweep {
    pub checked: u64,
    pub holds: u64,
    pub failures: Vec<u64>,
    pub undecided: Vec<u64>,
    pub not_applicable: Vec<u64>,
}

/// Runs [`rosser_schoenfeld_check`] on every `m` in `lo..=hi`.
pub fn rosser_sweep(lo: u64, hi: u64, form: RosserForm) -> Result<RosserSweep> {
    if lo < 3 || hi < lo {
        return Err(Error::invalid("sweep range must satisfy 3 <= lo <= hi"));
    }
    let mut out = RosserSweep::default();
    let sieve = (hi <= 50_000_000).then(|| totient_table(hi));
    for m in lo..=hi {
        let phi = match &sieve {
            Some(t) => t[m as usize],
            None => totient_u64(m),
        };
        let r = rosser_with_phi(m, phi, form)?;
        out.checked += 1;
        match r.decision {
            Decision::Holds => out.holds += 1,
            Decision::Fails => out.failures.push(m),
            Decision::Undecided => out.undecided.push(m),
            Decision::NotApplicable => out.not_applicable.push(m),
        }
    }
    Ok(out)
}

/// Which side of `Ψ(n) < C n log log n` was observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiRelation {
    /// `Ψ(n)` is strictly below the bound.
    BelowBound,
    /// `Ψ(n)` is at or above the bound; expected for small `n`.
    BoundViolatedBelowThreshold,
    Undecided,
}

impl PsiRelation {
    pub fn as_str(&self) -> &'static str {
        match self {
            PsiRelation::BelowBound => "below-bound",
            PsiRelation::BoundViolatedBelowThreshold => "bound-violated-below-threshold",
            PsiRelation::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PsiReport {
    pub n: u64,
    pub c: Rational,
    pub psi: u64,
    pub bound: Interval,
    pub relation: PsiRelation,
    pub note: &'static str,
}

pub const PSI_THRESHOLD_NOTE: &str = "the asymptotic bound is only claimed for n beyond an \
     ineffective threshold when C > 2e^γ (for C = 4: n > exp((1.001e)^9)); small-n outcomes \
     carry no pass/fail meaning";

/// Compares `Ψ(n)` with an enclosure of `c·n·log log n`.
pub fn psi_analytic_report(n: u64, c: &Rational) -> Result<PsiReport> {
    if n < 3 {
        return Err(Error::invalid("n must be >= 3"));
    }
    if *c <= Rational::from_integer(0.into()) {
        return Err(Error::invalid("C must be positive"));
    }
    check_cap_n(n, CAP_N_MAX)?;
    let psi = psi_cap_value(n)?;
    let target = Rational::from_integer(BigInt::from(psi));
    let mut report = None;
    for prec in PRECISION_LADDER {
        let loglog = Interval::from_int(n, prec).ln().ln();
        let bound =
            Interval::from_rational(&(c * Rational::from_integer(n.into())), prec).mul(&loglog);
        let relation = match bound.cmp_rational(&target) {
            Some(Ordering::Greater) => PsiRelation::BelowBound,
            Some(_) => PsiRelation::BoundViolatedBelowThreshold,
            None => PsiRelation::Undecided,
        };
        let done = relation != PsiRelation::Undecided;
        report = Some(PsiReport {
            n,
            c: c.clone(),
            psi,
            bound,
            relation,
            note: PSI_THRESHOLD_NOTE,
        });
        if done {
            break;
        }
    }
    Ok(report.unwrap())
}

/// `Φ(g)·H(g)`.
pub fn phi_h_product(g: u64) -> Result<FactoredNat> {
    Ok(&phi_cap(g)? * &h_exact(g)?)
}

/// `m^(4n²)`, the crude bound on `G(n)`.
pub fn g_crude_bound(n: u32, p_equals_3: bool) -> BigUint {
    BigUint::from(g_modulus(p_equals_3)).pow(4 * n * n)
}
