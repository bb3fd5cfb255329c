//! Explicit torsion exponents for CM abelian varieties over infinite
//! p-adic extensions, and the auxiliary constants they are built from.
//!
//! Every bound calculator returns a [`BoundReport`]. Arithmetic hypotheses
//! that can be decided from the numeric inputs are checked; geometric ones
//! (CM, good reduction, field of definition of endomorphisms) are recorded
//! as not checkable. A failed check marks the report conditional.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

use crate::arith::{
    factorial, floor_log_pow, is_prime, is_prime_u64, primes_up_to_with_cap, rational_int, vp_u64,
    vp_uint, FactoredNat, Rational,
};
use crate::bounds::{h_exact, phi_cap};
use crate::{Error, Result};

/// Largest `g` accepted by the bound calculators.
pub const G_MAX: u32 = 1_000;
/// Default ceiling on the prime threshold in [`bound_number_field`].
pub const DEFAULT_NUMBER_FIELD_PRIME_CAP: u64 = 1 << 26;

fn check_g(g: u32) -> Result<()> {
    if g == 0 {
        return Err(Error::invalid("g must be >= 1"));
    }
    if g > G_MAX {
        return Err(Error::cap("g", g, G_MAX));
    }
    Ok(())
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    Ok(())
}

fn check_positive(name: &str, x: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::invalid(format!("{name} must be >= 1")));
    }
    Ok(())
}

/// `L_g(m) = ⌊log_p (1 + p^(m/2))^(2g)⌋`.
///
/// For `m >= 8g` the value is `mg`; below that it is computed exactly.
pub fn lg(g: u32, p: u64, m: &BigUint) -> Result<BigUint> {
    if g == 0 || m.is_zero() {
        return Err(Error::invalid("L_g(m) needs g >= 1 and m >= 1"));
    }
    check_prime(p)?;
    if *m >= BigUint::from(8 * g as u64) {
        return Ok(m * g);
    }
    let m = m.to_u32().expect("m < 8g fits in u32");
    Ok(BigUint::from(floor_log_pow(p, m, 2 * g)?))
}

/// `C(d, M, h) = v_p(d/d_M) + h + d_M/2·(d_M + v_p(e_M) - 1/e_M + v_p(2)(d_M - 1))`.
pub fn c_const(d: u64, d_m: u64, e_m: u64, h: u64, p: u64) -> Result<Rational> {
    check_prime(p)?;
    check_positive("d", d)?;
    check_positive("d_M", d_m)?;
    check_positive("e_M", e_m)?;
    if !d.is_multiple_of(d_m) {
        return Err(Error::DivisibilityViolation {
            divisor: d_m.to_string(),
            dividend: d.to_string(),
        });
    }
    if !d_m.is_multiple_of(e_m) {
        return Err(Error::DivisibilityViolation {
            divisor: e_m.to_string(),
            dividend: d_m.to_string(),
        });
    }
    let v2 = vp_u64(p, 2);
    let bracket = rational_int(d_m + vp_u64(p, e_m) + v2 * (d_m - 1))
        - Rational::new(BigInt::one(), BigInt::from(e_m));
    Ok(rational_int(vp_u64(p, d / d_m) + h)
        + Rational::new(BigInt::from(d_m), BigInt::from(2)) * bracket)
}

/// `δ_(i)`: 0 for `i = 1, 2`, and `2i - 5` from `i = 3` on.
pub fn delta(i: u64) -> u64 {
    if i <= 2 {
        0
    } else {
        2 * i - 5
    }
}

/// `12g² - 18g + 10`, the additive constant shared by every main bound.
pub fn additive_constant(g: u32) -> BigUint {
    let g = g as u64;
    BigUint::from(12 * g * g + 10 - 18 * g)
}

/// Numeric invariants of a p-adic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicInvariants {
    pub p: u64,
    /// Degree over `Q_p`.
    pub d: u64,
    /// Ramification index.
    pub e: u64,
    /// Residue degree.
    pub f: u64,
}

impl PAdicInvariants {
    pub fn new(p: u64, e: u64, f: u64) -> Result<Self> {
        check_prime(p)?;
        check_positive("e", e)?;
        check_positive("f", f)?;
        Ok(Self { p, d: e * f, e, f })
    }

    pub fn validate(&self) -> Result<()> {
        check_prime(self.p)?;
        check_positive("e", self.e)?;
        check_positive("f", self.f)?;
        if self.d != self.e * self.f {
            return Err(Error::invalid(format!(
                "degree {} is not e·f = {}·{}",
                self.d, self.e, self.f
            )));
        }
        Ok(())
    }
}

/// Inputs for the Lubin-Tate bound over `K k_π`.
#[derive(Clone, Debug, PartialEq)]
pub struct LubinTateInput {
    pub g: u32,
    /// The base field `k` carrying the uniformizer `π`.
    pub base: PAdicInvariants,
    /// Order of `q_k^-1 Nr(π)` (modulo `p'` on the refined route).
    pub mu: u64,
    /// `v_p((q_k^-1 Nr(π))^μ - 1)`, when known.
    pub v: Option<Rational>,
    /// Degree of the composite `Kk` over `Q_p`.
    pub degree_composite: u64,
    /// Degree of `K` over `Q_p`.
    pub degree_field: u64,
}

impl LubinTateInput {
    pub fn validate(&self) -> Result<()> {
        check_g(self.g)?;
        self.base.validate()?;
        check_positive("mu", self.mu)?;
        check_positive("d_Kk", self.degree_composite)?;
        check_positive("d_K", self.degree_field)?;
        for (name, d) in [("d_K", self.degree_field), ("d_k", self.base.d)] {
            if !self.degree_composite.is_multiple_of(d) {
                return Err(Error::invalid(format!(
                    "{name} = {d} does not divide d_Kk = {}",
                    self.degree_composite
                )));
            }
        }
        if self.degree_composite > self.degree_field * self.base.d {
            return Err(Error::invalid(format!(
                "d_Kk = {} exceeds d_K·d_k = {}",
                self.degree_composite,
                self.degree_field * self.base.d
            )));
        }
        if let Some(v) = &self.v {
            if *v < Rational::zero() {
                return Err(Error::invalid("v must be nonnegative"));
            }
        }
        Ok(())
    }

    /// `d_{Kk/k}`.
    pub fn relative_degree(&self) -> u64 {
        self.degree_composite / self.base.d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremId {
    LubinTate,
    LubinTateRefined,
    GoodReduction,
    Cyclotomic,
    Kummer,
    KummerGood,
    Ordinary,
    NumberField,
}

impl TheoremId {
    /// Stable identifier used in reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::LubinTate => "MT_CM",
            TheoremId::LubinTateRefined => "MT_CM_refined",
            TheoremId::GoodReduction => "MT_CM_good",
            TheoremId::Cyclotomic => "MT_CM_cycl",
            TheoremId::Kummer => "MT_CM_KT",
            TheoremId::KummerGood => "MT_CM_KT_good",
            TheoremId::Ordinary => "val_ord",
            TheoremId::NumberField => "gsurf2",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Passed,
    Failed,
    NotCheckable,
}

impl CheckStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Passed => "passed",
            CheckStatus::Failed => "failed",
            CheckStatus::NotCheckable => "not-checkable-from-inputs",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
}

impl Check {
    fn new(name: impl Into<String>, status: CheckStatus) -> Self {
        Self {
            name: name.into(),
            status,
        }
    }
}

/// Shape of the guaranteed cap on the torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsionCap {
    /// `#torsion <= p^exponent`.
    PrimePower { p: u64, exponent: BigUint },
    /// Torsion is killed by `N`, kept factored.
    Annihilator(FactoredNat),
}

impl TorsionCap {
    pub fn prime(&self) -> Option<u64> {
        match self {
            TorsionCap::PrimePower { p, .. } => Some(*p),
            TorsionCap::Annihilator(_) => None,
        }
    }

    pub fn factored(&self) -> FactoredNat {
        match self {
            TorsionCap::PrimePower { p, exponent } => {
                FactoredNat::prime_power(*p, exponent.clone())
            }
            TorsionCap::Annihilator(n) => n.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub inputs: Vec<(String, String)>,
    pub checks: Vec<Check>,
    /// The exponent `C` (`E` for the number-field bound).
    pub exponent_c: BigUint,
    /// Named intermediate values, in computation order.
    pub intermediates: Vec<(String, String)>,
    pub cap: TorsionCap,
    pub notes: Vec<String>,
}

impl BoundReport {
    /// True when some decidable hypothesis failed.
    pub fn conditional(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Failed)
    }

    /// The exponent of the cap (for [`TorsionCap::Annihilator`], the common
    /// exponent of its primes).
    pub fn cap_exponent(&self) -> BigUint {
        match &self.cap {
            TorsionCap::PrimePower { exponent, .. } => exponent.clone(),
            TorsionCap::Annihilator(_) => self.exponent_c.clone(),
        }
    }

    pub fn intermediate(&self, name: &str) -> Option<&str> {
        self.intermediates
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    fn new(theorem: TheoremId, p: u64, g: u32, exponent_c: BigUint) -> Self {
        let exponent = &exponent_c * (2 * g);
        Self {
            theorem,
            inputs: Vec::new(),
            checks: Vec::new(),
            exponent_c,
            intermediates: Vec::new(),
            cap: TorsionCap::PrimePower { p, exponent },
            notes: Vec::new(),
        }
    }

    fn input(mut self, name: &str, value: impl ToString) -> Self {
        self.inputs.push((name.into(), value.to_string()));
        self
    }

    fn value(mut self, name: &str, value: impl ToString) -> Self {
        self.intermediates.push((name.into(), value.to_string()));
        self
    }

    fn check(mut self, name: &str, status: CheckStatus) -> Self {
        self.checks.push(Check::new(name, status));
        self
    }

    fn note(mut self, text: &str) -> Self {
        self.notes.push(text.into());
        self
    }

    fn finish(mut self) -> Self {
        if self.conditional() {
            self.notes
                .push("a hypothesis failed: the bound is conditional".into());
        }
        self
    }
}

/// `Φ(g)·H(g)` and `(2g)!` as plain integers.
fn common_factors(g: u32) -> Result<(BigUint, BigUint, BigUint)> {
    let phi = phi_cap(g as u64)?.to_biguint();
    let h = h_exact(g as u64)?.to_biguint();
    Ok((phi, h, factorial(2 * g as u64)))
}

fn gcd_with_factorial(d: u64, g: u32) -> BigUint {
    BigUint::from(d).gcd(&factorial(2 * g as u64))
}

/// `(2g)!/2·((2g)! + v_p((2g)!) + v_p(2)((2g)! - 1))`.
fn factorial_block(g: u32, p: u64) -> BigUint {
    let fact = factorial(2 * g as u64);
    let v = vp_uint(p, &fact);
    let v2 = vp_u64(p, 2);
    let inner = &fact + v + (&fact - 1u32) * v2;
    (&fact >> 1usize) * inner
}

/// `C = 2g²·(2g)!·Φ(g)H(g)·μ·d_Kk + 12g² - 18g + 10` over `K k_π`.
///
/// With `refined`, the valuation hypothesis is checked against `v`;
/// otherwise the report checks `μ < p`.
pub fn bound_lubin_tate(input: &LubinTateInput, refined: bool) -> Result<BoundReport> {
    input.validate()?;
    let g = input.g;
    let p = input.base.p;
    let (phi, h, fact) = common_factors(g)?;
    let g2 = (g as u64) * (g as u64);
    let c = BigUint::from(2 * g2) * &fact * &phi * &h * input.mu * input.degree_composite
        + additive_constant(g);
    let threshold =
        BigUint::from(g) * &fact * &phi * &h * input.mu * input.relative_degree() * input.base.f;

    let id = if refined {
        TheoremId::LubinTateRefined
    } else {
        TheoremId::LubinTate
    };
    let mut report = BoundReport::new(id, p, g, c)
        .input("g", g)
        .input("p", p)
        .input("d_k", input.base.d)
        .input("e_k", input.base.e)
        .input("f_k", input.base.f)
        .input("mu", input.mu)
        .input("d_Kk", input.degree_composite)
        .input("d_K", input.degree_field);
    if let Some(v) = &input.v {
        report = report.input("v", v);
    }
    report = report
        .value("Phi(g)", &phi)
        .value("H(g)", &h)
        .value("(2g)!", &fact)
        .value("d_Kk/k", input.relative_degree());

    if refined {
        let status = match &input.v {
            Some(v) => {
                CheckStatus::from_bool(*v > Rational::from_integer(threshold.clone().into()))
            }
            None => CheckStatus::NotCheckable,
        };
        report = report
            .value("valuation_threshold", &threshold)
            .check("v > g·(2g)!·Phi(g)H(g)·mu·d_Kk/k·f_k", status);
    } else {
        report = report
            .check("0 < mu < p", CheckStatus::from_bool(input.mu < p))
            .check(
                "q_k^-1 Nr(pi) is a root of unity",
                CheckStatus::NotCheckable,
            );
    }
    let coprime = gcd_with_factorial(input.base.d, g).is_one();
    Ok(report
        .check("gcd(d_k, (2g)!) = 1", CheckStatus::from_bool(coprime))
        .check("A has complex multiplication", CheckStatus::NotCheckable)
        .finish())
}

/// Good reduction with all endomorphisms over `K`:
/// `C = 2g·max(C_g, L_g((2g)!·μ·d_{Kk/k}·f_k)) + 12g² - 18g + 10`.
///
/// `v`, when given, is checked against `L_g((2g)!·μ·d_{Kk/k}·f_k)`.
pub fn bound_good_reduction(
    g: u32,
    p: u64,
    mu: u64,
    d_k: u64,
    f_k: u64,
    d_kk: u64,
    v: Option<&Rational>,
) -> Result<BoundReport> {
    check_g(g)?;
    check_prime(p)?;
    for (name, x) in [("mu", mu), ("d_k", d_k), ("f_k", f_k), ("d_Kk", d_kk)] {
        check_positive(name, x)?;
    }
    if !d_kk.is_multiple_of(d_k) {
        return Err(Error::invalid(format!(
            "d_k = {d_k} does not divide d_Kk = {d_kk}"
        )));
    }
    if !d_k.is_multiple_of(f_k) {
        return Err(Error::invalid(format!(
            "f_k = {f_k} does not divide d_k = {d_k}"
        )));
    }
    let fact = factorial(2 * g as u64);
    let c_g = BigUint::from(vp_u64(p, d_kk)) + factorial_block(g, p);
    let lg_arg = &fact * mu * (d_kk / d_k) * f_k;
    let l = lg(g, p, &lg_arg)?;
    let delta = (&c_g).max(&l).clone();
    let c = &delta * (2 * g) + additive_constant(g);

    let valuation = match v {
        Some(v) => CheckStatus::from_bool(*v > Rational::from_integer(l.clone().into())),
        None => CheckStatus::NotCheckable,
    };
    let mut report = BoundReport::new(TheoremId::GoodReduction, p, g, c)
        .input("g", g)
        .input("p", p)
        .input("mu", mu)
        .input("d_k", d_k)
        .input("f_k", f_k)
        .input("d_Kk", d_kk);
    if let Some(v) = v {
        report = report.input("v", v);
    }
    Ok(report
        .value("C_g", &c_g)
        .value("L_g", &l)
        .value("Delta_g", &delta)
        .check("v > L_g((2g)!·mu·d_Kk/k·f_k)", valuation)
        .check(
            "gcd(d_k, (2g)!) = 1",
            CheckStatus::from_bool(gcd_with_factorial(d_k, g).is_one()),
        )
        .check("A has good reduction over K", CheckStatus::NotCheckable)
        .check(
            "all endomorphisms of A are defined over K",
            CheckStatus::NotCheckable,
        )
        .finish())
}

/// `C = 2g²·(2g)!·Φ(g)H(g)·d_K + 12g² - 18g + 10` over `K(μ_p^∞)`.
pub fn bound_cyclotomic(g: u32, p: u64, d_k: u64) -> Result<BoundReport> {
    check_g(g)?;
    check_prime(p)?;
    check_positive("d_K", d_k)?;
    let (phi, h, fact) = common_factors(g)?;
    let g2 = (g as u64) * (g as u64);
    let c = BigUint::from(2 * g2) * &fact * &phi * &h * d_k + additive_constant(g);
    Ok(BoundReport::new(TheoremId::Cyclotomic, p, g, c)
        .input("g", g)
        .input("p", p)
        .input("d_K", d_k)
        .value("Phi(g)", &phi)
        .value("H(g)", &h)
        .value("(2g)!", &fact)
        .check("A has complex multiplication", CheckStatus::NotCheckable)
        .note("Lubin-Tate bound specialised to k = Q_p, pi = p, mu = 1")
        .finish())
}

/// `C = 2g²·(2g)!·p^(1+v_p(2))·(Φ(g)H(g))²·p^(v_p(d_K))·d_K + 12g² - 18g + 10`
/// over `K(K^(1/p^∞))`.
pub fn bound_kummer(g: u32, p: u64, d_k: u64) -> Result<BoundReport> {
    check_g(g)?;
    check_prime(p)?;
    check_positive("d_K", d_k)?;
    let (phi, h, fact) = common_factors(g)?;
    let g2 = (g as u64) * (g as u64);
    let bp = BigUint::from(p);
    let ph = &phi * &h;
    let p_twist = bp.pow(1 + vp_u64(p, 2) as u32);
    let degree_factor = bp.pow(vp_u64(p, d_k) as u32) * d_k;
    let c = BigUint::from(2 * g2) * &fact * &p_twist * &ph * &ph * &degree_factor
        + additive_constant(g);
    Ok(BoundReport::new(TheoremId::Kummer, p, g, c)
        .input("g", g)
        .input("p", p)
        .input("d_K", d_k)
        .value("Phi(g)H(g)", &ph)
        .value("p^(1+v_p(2))", &p_twist)
        .value("p^(v_p(d_K))·d_K", &degree_factor)
        .check("A has complex multiplication", CheckStatus::NotCheckable)
        .finish())
}

/// The good-reduction step of the Kummer bound:
/// `ν = v_p(d_K) + 1 + v_p(2)`,
/// `C' = 2g·max(C_g(K), L_g((2g)!·p^ν·d_K)) + 12g² - 18g + 10`.
pub fn bound_kummer_good(g: u32, p: u64, d_k: u64) -> Result<BoundReport> {
    check_g(g)?;
    check_prime(p)?;
    check_positive("d_K", d_k)?;
    let vp_d = vp_u64(p, d_k);
    let nu = vp_d + 1 + vp_u64(p, 2);
    let c_g = BigUint::from(vp_d + nu) + factorial_block(g, p);
    let lg_arg = factorial(2 * g as u64) * BigUint::from(p).pow(nu as u32) * d_k;
    let l = lg(g, p, &lg_arg)?;
    let delta = (&c_g).max(&l).clone();
    let c = &delta * (2 * g) + additive_constant(g);
    Ok(BoundReport::new(TheoremId::KummerGood, p, g, c)
        .input("g", g)
        .input("p", p)
        .input("d_K", d_k)
        .value("nu", nu)
        .value("C_g(K)", &c_g)
        .value("L_g", &l)
        .value("Delta_g(K)", &delta)
        .check("A has good reduction over K", CheckStatus::NotCheckable)
        .check(
            "all endomorphisms of A are defined over K",
            CheckStatus::NotCheckable,
        )
        .note("valid only for good reduction with endomorphisms defined over K")
        .finish())
}

/// Good ordinary reduction: torsion over `K k_π` is killed by
/// `p^(2g·L_g(μ·d_{Kk/k}·f_k))`.
///
/// The reported exponent is `2g·L_g(...)`, so the order cap is
/// `p^(4g²·L_g(...))`, below the closed form `p^(4g³(μ·d_{Kk/k}·f_k + 1 + v_p(2)))`.
pub fn bound_ordinary(g: u32, p: u64, mu: u64, d_kk_over_k: u64, f_k: u64) -> Result<BoundReport> {
    check_g(g)?;
    check_prime(p)?;
    for (name, x) in [("mu", mu), ("d_Kk/k", d_kk_over_k), ("f_k", f_k)] {
        check_positive(name, x)?;
    }
    let m = BigUint::from(mu) * d_kk_over_k * f_k;
    let l = lg(g, p, &m)?;
    let exponent = &l * (2 * g);
    let g3 = BigUint::from(g).pow(3);
    let coarse = BigUint::from(4u32) * g3 * (&m + 1u32 + vp_u64(p, 2));
    let report = BoundReport::new(TheoremId::Ordinary, p, g, exponent);
    if report.cap_exponent() >= coarse {
        return Err(Error::InternalInconsistency(format!(
            "order exponent {} is not below the closed form {coarse}",
            report.cap_exponent()
        )));
    }
    Ok(report
        .input("g", g)
        .input("p", p)
        .input("mu", mu)
        .input("d_Kk/k", d_kk_over_k)
        .input("f_k", f_k)
        .value("L_g", &l)
        .value("closed_form_exponent", &coarse)
        .check("0 < mu < p", CheckStatus::from_bool(mu < p))
        .check(
            "q_k^-1 Nr(pi) is a root of unity",
            CheckStatus::NotCheckable,
        )
        .check("A has good ordinary reduction", CheckStatus::NotCheckable)
        .finish())
}

/// Number field of degree `d` and narrow class number `h`: torsion over
/// `K(μ_∞)` is killed by `N = (∏ p)^E` with
/// `E = 2g²·(2g)!·Φ(g)H(g)·dh + 12g² - 18g + 10`, the product running over
/// primes `p <= ⌊(1 + sqrt(2^dh))^(2g)⌋` and the primes ramified in `K`.
pub fn bound_number_field(
    g: u32,
    d: u64,
    h: u64,
    ramified: &[u64],
    prime_cap: u64,
) -> Result<BoundReport> {
    check_g(g)?;
    check_positive("d", d)?;
    check_positive("h", h)?;
    for &q in ramified {
        if !is_prime(&BigUint::from(q))? {
            return Err(Error::invalid(format!("ramified prime {q} is not prime")));
        }
    }
    let dh = d
        .checked_mul(h)
        .filter(|dh| dh.saturating_mul(g as u64) <= 64)
        .ok_or_else(|| {
            Error::cap(
                "prime threshold bits (d·h·g)",
                d.saturating_mul(h).saturating_mul(g as u64),
                64,
            )
        })?;
    let threshold = crate::arith::alg_floor(2, dh as u32, 2 * g)?;
    let threshold_u64 = threshold
        .to_u64()
        .filter(|t| *t <= prime_cap)
        .ok_or_else(|| Error::cap("prime threshold", &threshold, prime_cap))?;
    let mut primes = primes_up_to_with_cap(threshold_u64, prime_cap)?;
    primes.extend_from_slice(ramified);
    primes.sort_unstable();
    primes.dedup();

    let (phi, hg, fact) = common_factors(g)?;
    let g2 = (g as u64) * (g as u64);
    let e = BigUint::from(2 * g2) * &fact * &phi * &hg * dh + additive_constant(g);
    let n =
        FactoredNat::from_u64_pairs(&primes.iter().map(|&q| (q, 1)).collect::<Vec<_>>())?.pow(&e);
    let prime_list = primes
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let ramified_list = ramified
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    Ok(BoundReport {
        theorem: TheoremId::NumberField,
        inputs: Vec::new(),
        checks: Vec::new(),
        exponent_c: e,
        intermediates: Vec::new(),
        cap: TorsionCap::Annihilator(n),
        notes: Vec::new(),
    }
    .input("g", g)
    .input("d", d)
    .input("h", h)
    .input("ramified", format!("[{ramified_list}]"))
    .value("prime_threshold", &threshold)
    .value("primes", format!("[{prime_list}]"))
    .value("Phi(g)", &phi)
    .value("H(g)", &hg)
    .check("A has complex multiplication", CheckStatus::NotCheckable)
    .check("A has good reduction everywhere", CheckStatus::NotCheckable)
    .check(
        "h is the narrow class number of K",
        CheckStatus::NotCheckable,
    )
    .note("N is kept in factored form")
    .finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn unit_input(g: u32, p: u64) -> LubinTateInput {
        LubinTateInput {
            g,
            base: PAdicInvariants::new(p, 1, 1).unwrap(),
            mu: 1,
            v: None,
            degree_composite: 1,
            degree_field: 1,
        }
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn lg_examples() {
        assert_eq!(lg(1, 2, &big(1)).unwrap(), big(2));
        assert_eq!(lg(2, 3, &big(1)).unwrap(), big(3));
        assert_eq!(lg(1, 5, &big(2)).unwrap(), big(2));
        assert_eq!(lg(1, 2, &big(2)).unwrap(), big(3));
        assert_eq!(lg(3, 7, &big(24)).unwrap(), big(72));
        assert!(lg(0, 2, &big(1)).is_err());
        assert!(lg(1, 4, &big(1)).is_err());
    }

    #[test]
    fn lg_shortcut_agrees_with_exact_floor() {
        for g in 1..=6u32 {
            for p in [2, 3, 5] {
                for m in 8 * g..8 * g + 10 {
                    assert_eq!(
                        floor_log_pow(p, m, 2 * g).unwrap(),
                        (m * g) as u64,
                        "g={g} p={p} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn c_const_examples() {
        assert_eq!(c_const(4, 2, 2, 0, 2).unwrap(), q(9, 2));
        assert_eq!(c_const(6, 2, 1, 1, 3).unwrap(), q(3, 1));
        for (d, h, p) in [(9, 2, 3), (8, 0, 2), (10, 5, 7)] {
            let expected = vp_u64(p, d) + h;
            assert_eq!(c_const(d, 1, 1, h, p).unwrap(), q(expected as i64, 1));
        }
        assert!(matches!(
            c_const(5, 2, 1, 0, 2),
            Err(Error::DivisibilityViolation { .. })
        ));
        assert!(c_const(4, 2, 3, 0, 2).is_err());
    }

    #[test]
    fn delta_values() {
        let got: Vec<u64> = (1..=6).map(delta).collect();
        assert_eq!(got, [0, 0, 1, 3, 5, 7]);
    }

    #[test]
    fn lubin_tate_examples() {
        let r = bound_lubin_tate(&unit_input(1, 5), false).unwrap();
        assert_eq!(r.exponent_c, big(1156));
        assert_eq!(
            r.cap,
            TorsionCap::PrimePower {
                p: 5,
                exponent: big(2312)
            }
        );
        assert!(!r.conditional());

        let r = bound_lubin_tate(&unit_input(2, 5), false).unwrap();
        assert_eq!(r.exponent_c, big(26_542_102));

        let mut input = unit_input(1, 5);
        input.base = PAdicInvariants::new(5, 2, 1).unwrap();
        input.degree_composite = 2;
        let r = bound_lubin_tate(&input, false).unwrap();
        let ii = r.checks.iter().find(|c| c.name.starts_with("gcd")).unwrap();
        assert_eq!(ii.status, CheckStatus::Failed);
        assert!(r.conditional());
    }

    #[test]
    fn lubin_tate_refined_valuation_check() {
        let mut input = unit_input(1, 5);
        let r = bound_lubin_tate(&input, true).unwrap();
        assert_eq!(r.theorem, TheoremId::LubinTateRefined);
        assert_eq!(r.intermediate("valuation_threshold"), Some("576"));
        assert!(r
            .checks
            .iter()
            .any(|c| c.status == CheckStatus::NotCheckable && c.name.starts_with("v >")));
        input.v = Some(q(576, 1));
        let r = bound_lubin_tate(&input, true).unwrap();
        assert!(r.conditional());
        input.v = Some(q(1153, 2));
        assert!(!bound_lubin_tate(&input, true).unwrap().conditional());
    }

    #[test]
    fn lubin_tate_mu_check() {
        let mut input = unit_input(1, 3);
        input.mu = 3;
        let r = bound_lubin_tate(&input, false).unwrap();
        assert!(r.conditional());
        assert_eq!(r.exponent_c, big(2 * 2 * 288 * 3 + 4));
    }

    #[test]
    fn lubin_tate_rejects_bad_degrees() {
        let mut input = unit_input(1, 5);
        input.degree_field = 2;
        assert!(bound_lubin_tate(&input, false).is_err());
        input.degree_composite = 4;
        assert!(bound_lubin_tate(&input, false).is_err());
        let mut input = unit_input(1, 5);
        input.base.d = 2;
        assert!(bound_lubin_tate(&input, false).is_err());
    }

    #[test]
    fn good_reduction_examples() {
        let r = bound_good_reduction(1, 5, 1, 1, 1, 1, None).unwrap();
        assert_eq!(r.intermediate("C_g"), Some("2"));
        assert_eq!(r.intermediate("L_g"), Some("2"));
        assert_eq!(r.exponent_c, big(8));

        let r = bound_good_reduction(1, 2, 1, 1, 1, 1, None).unwrap();
        assert_eq!(r.intermediate("C_g"), Some("4"));
        assert_eq!(r.intermediate("L_g"), Some("3"));
        assert_eq!(r.exponent_c, big(12));

        assert!(bound_good_reduction(1, 5, 1, 2, 1, 3, None).is_err());
        let r = bound_good_reduction(1, 5, 1, 1, 1, 1, Some(&q(2, 1))).unwrap();
        assert!(r.conditional());
        let r = bound_good_reduction(1, 5, 1, 1, 1, 1, Some(&q(3, 1))).unwrap();
        assert!(!r.conditional());
    }

    #[test]
    fn cyclotomic_examples() {
        let r = bound_cyclotomic(1, 5, 1).unwrap();
        assert_eq!(r.exponent_c, big(1156));
        assert_eq!(r.cap_exponent(), big(2312));
        assert_eq!(bound_cyclotomic(1, 5, 2).unwrap().exponent_c, big(2308));
        let h3 = 2u64.pow(11) * 81 * 35;
        assert_eq!(
            bound_cyclotomic(3, 7, 1).unwrap().exponent_c,
            big(18 * 720 * 18 * h3 + 64)
        );
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(bound_kummer(1, 3, 1).unwrap().exponent_c, big(995_332));
        assert_eq!(bound_kummer(1, 2, 1).unwrap().exponent_c, big(1_327_108));
        let r = bound_kummer(1, 3, 3).unwrap();
        assert_eq!(r.intermediate("p^(v_p(d_K))·d_K"), Some("9"));
        assert_eq!(r.exponent_c, big(4 * 3 * 288 * 288 * 9 + 4));
    }

    #[test]
    fn kummer_good_examples() {
        let r = bound_kummer_good(1, 5, 1).unwrap();
        assert_eq!(r.intermediate("nu"), Some("1"));
        assert_eq!(r.intermediate("C_g(K)"), Some("3"));
        assert_eq!(r.intermediate("L_g"), Some("10"));
        assert_eq!(r.exponent_c, big(24));

        let r = bound_kummer_good(1, 2, 1).unwrap();
        assert_eq!(r.intermediate("nu"), Some("2"));
        assert_eq!(r.intermediate("C_g(K)"), Some("6"));
        assert_eq!(r.intermediate("L_g"), Some("8"));
        assert_eq!(r.exponent_c, big(20));

        assert_eq!(
            bound_kummer_good(1, 2, 2).unwrap().intermediate("nu"),
            Some("3")
        );
    }

    #[test]
    fn ordinary_examples() {
        assert_eq!(bound_ordinary(1, 5, 1, 1, 1).unwrap().exponent_c, big(2));
        assert_eq!(bound_ordinary(1, 2, 1, 1, 1).unwrap().exponent_c, big(4));
        let r = bound_ordinary(2, 17, 1, 16, 1).unwrap();
        assert_eq!(r.exponent_c, big(128));
        assert!(bound_ordinary(1, 2, 2, 1, 1).unwrap().conditional());
    }

    #[test]
    fn number_field_examples() {
        let r = bound_number_field(1, 1, 1, &[], DEFAULT_NUMBER_FIELD_PRIME_CAP).unwrap();
        assert_eq!(r.intermediate("prime_threshold"), Some("5"));
        assert_eq!(r.exponent_c, big(1156));
        assert_eq!(
            r.cap,
            TorsionCap::Annihilator(
                FactoredNat::from_u64_pairs(&[(2, 1156), (3, 1156), (5, 1156)]).unwrap()
            )
        );
        let r = bound_number_field(1, 1, 1, &[7], DEFAULT_NUMBER_FIELD_PRIME_CAP).unwrap();
        assert_eq!(r.intermediate("primes"), Some("[2,3,5,7]"));
        let r = bound_number_field(1, 2, 1, &[], DEFAULT_NUMBER_FIELD_PRIME_CAP).unwrap();
        assert_eq!(r.intermediate("prime_threshold"), Some("9"));
        assert_eq!(r.intermediate("primes"), Some("[2,3,5,7]"));
        assert!(bound_number_field(1, 1, 1, &[9], DEFAULT_NUMBER_FIELD_PRIME_CAP).is_err());
        assert!(matches!(
            bound_number_field(1, 40, 1, &[], 1 << 20),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn lg_grid_properties() {
        for g in 1..=16u32 {
            for p in [2u64, 3, 5, 7] {
                let v2 = vp_u64(p, 2) as u32;
                for m in 1..=200u32 {
                    let l = big(floor_log_pow(p, m, 2 * g).unwrap());
                    assert_eq!(lg(g, p, &big(m as u64)).unwrap(), l);
                    assert!(l >= big((m * g) as u64));
                    assert!(l < big((g * (m + 1 + v2)) as u64));
                    if !(p == 2 && m <= 2) {
                        assert!(l < big((g * (m + 1)) as u64));
                    }
                    if m >= 8 * g {
                        assert_eq!(l, big((m * g) as u64));
                    }
                }
            }
        }
    }

    fn primes() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5, 7, 11])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cap_exponent_is_2g_c(g in 1u32..=4, p in primes(), d in 1u64..=8) {
            let reports = [
                bound_lubin_tate(&LubinTateInput { degree_composite: d, degree_field: d, ..unit_input(g, p) }, false).unwrap(),
                bound_good_reduction(g, p, 1, 1, 1, d, None).unwrap(),
                bound_cyclotomic(g, p, d).unwrap(),
                bound_kummer(g, p, d).unwrap(),
                bound_kummer_good(g, p, d).unwrap(),
                bound_ordinary(g, p, 1, d, 1).unwrap(),
            ];
            for r in reports {
                prop_assert_eq!(r.cap_exponent(), &r.exponent_c * (2 * g));
            }
        }

        #[test]
        fn monotone_in_g_and_mu(g in 1u32..4, p in primes(), mu in 1u64..8, d in 1u64..=8) {
            let lt = |g, mu| {
                let input = LubinTateInput { mu, degree_composite: d, degree_field: d, ..unit_input(g, p) };
                bound_lubin_tate(&input, false).unwrap().exponent_c
            };
            prop_assert!(lt(g, mu) <= lt(g + 1, mu));
            prop_assert!(lt(g, mu) <= lt(g, mu + 1));
            let good = |g, mu| bound_good_reduction(g, p, mu, 1, 1, d, None).unwrap().exponent_c;
            prop_assert!(good(g, mu) <= good(g + 1, mu));
            prop_assert!(good(g, mu) <= good(g, mu + 1));
            let ord = |g, mu| bound_ordinary(g, p, mu, d, 1).unwrap().exponent_c;
            prop_assert!(ord(g, mu) <= ord(g + 1, mu));
            prop_assert!(ord(g, mu) <= ord(g, mu + 1));
            for f in [bound_cyclotomic, bound_kummer, bound_kummer_good] {
                prop_assert!(f(g, p, d).unwrap().exponent_c <= f(g + 1, p, d).unwrap().exponent_c);
            }
        }

        #[test]
        fn monotone_in_degree(g in 1u32..=4, p in primes(), d in 1u64..8) {
            // products without valuation terms grow with every degree step
            let lt = |d| bound_lubin_tate(&LubinTateInput { degree_composite: d, degree_field: d, ..unit_input(g, p) }, false).unwrap().exponent_c;
            prop_assert!(lt(d) <= lt(d + 1));
            prop_assert!(bound_cyclotomic(g, p, d).unwrap().exponent_c <= bound_cyclotomic(g, p, d + 1).unwrap().exponent_c);
            prop_assert!(bound_ordinary(g, p, 1, d, 1).unwrap().exponent_c <= bound_ordinary(g, p, 1, d + 1, 1).unwrap().exponent_c);
            // valuation terms make the rest monotone along divisibility only
            for k in 2..=3u64 {
                prop_assert!(bound_kummer(g, p, d).unwrap().exponent_c <= bound_kummer(g, p, k * d).unwrap().exponent_c);
                prop_assert!(bound_kummer_good(g, p, d).unwrap().exponent_c <= bound_kummer_good(g, p, k * d).unwrap().exponent_c);
                prop_assert!(bound_good_reduction(g, p, 1, 1, 1, d, None).unwrap().exponent_c
                    <= bound_good_reduction(g, p, 1, 1, 1, k * d, None).unwrap().exponent_c);
            }
        }

        #[test]
        fn good_reduction_within_lubin_tate(g in 1u32..=4, p in primes(), mu in 1u64..=8, d in 1u64..=8) {
            let lt = bound_lubin_tate(&LubinTateInput { mu, degree_composite: d, degree_field: d, ..unit_input(g, p) }, true).unwrap();
            let threshold: BigUint = lt.intermediate("valuation_threshold").unwrap().parse().unwrap();
            let v = Rational::from_integer((threshold + 1u32).into());
            let good = bound_good_reduction(g, p, mu, 1, 1, d, Some(&v)).unwrap();
            prop_assert!(!good.conditional());
            prop_assert!(good.exponent_c <= lt.exponent_c);
        }
    }
}
