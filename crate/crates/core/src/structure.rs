//! Results keyed to the factorization of `n`.
//!
//! Let `p` be the smallest prime dividing `n`. A non-intersecting `n` must
//! have `ω(n/p) < p`; the integers passing that test split into
//!
//! - `Case1a`: `p ∤ n/p`, `n` odd,
//! - `Case1b`: `p ∤ n/p`, `n` even (so `n = 2` or `n = 2·q^α`),
//! - `Case2`:  `p² | n`.
//!
//! For each case [`t1_report`] computes an exact quantity that must be
//! strictly below 1 for no CD covering of `n` to exist: the reciprocal sum of
//! the divisors (Cases 1a and 2, and `n = 2`) or the CD density itself
//! (`n = 2·q^α`).
//!
//! The module also builds the explicit CD sets for `n = p^k` and
//! `n = q·p^k`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::congruence::{Congruence, CongruenceSet};
use crate::density::{density_formula, euler_divisor_sum};
use crate::numtheory::{factorize, is_prime, mod_inverse, Factorization, NumberError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureError {
    /// `n` must be at least 2.
    TooSmall(u64),
    Number(NumberError),
    NotPrime(u64),
    ZeroExponent,
    /// `p^k` (or a residue derived from it) does not fit in 64 bits.
    Overflow,
    /// `n` is not of the form `p^k` or `q·p^k`.
    UnsupportedShape(u64),
    /// `n = q·2^k` with `k >= 2`: the smallest-prime condition already rules
    /// out any CD set, so no construction exists.
    ProvenInfeasible {
        n: u64,
        q: u64,
        k: u32,
    },
    /// A bound that must be below 1 was not. Indicates a bug.
    BoundContradiction {
        n: u64,
        value: Rational,
    },
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureError::TooSmall(n) => write!(f, "n = {n} must be at least 2"),
            StructureError::Number(e) => write!(f, "{e}"),
            StructureError::NotPrime(p) => write!(f, "{p} is not prime"),
            StructureError::ZeroExponent => f.write_str("exponent k must be at least 1"),
            StructureError::Overflow => f.write_str("value does not fit in 64 bits"),
            StructureError::UnsupportedShape(n) => write!(
                f,
                "n = {n} is not of a supported shape (p^k, or q·p^k with distinct primes p, q)"
            ),
            StructureError::ProvenInfeasible { n, q, k } => write!(
                f,
                "n = {n} = {q}·2^{k} is not non-intersecting: n/2 has 2 distinct prime divisors, \
                 which is not fewer than the smallest prime 2"
            ),
            StructureError::BoundContradiction { n, value } => write!(
                f,
                "internal contradiction: bound for n = {n} is {value}, expected < 1"
            ),
        }
    }
}

impl core::error::Error for StructureError {}

impl From<NumberError> for StructureError {
    fn from(e: NumberError) -> Self {
        StructureError::Number(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Case1a,
    Case1b,
    Case2,
    FailsLemma3,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Case1a => "Case1a",
            CaseTag::Case1b => "Case1b",
            CaseTag::Case2 => "Case2",
            CaseTag::FailsLemma3 => "FailsLemma3",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    ReciprocalSum,
    CdDensity,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::ReciprocalSum => "reciprocal_sum",
            BoundKind::CdDensity => "cd_density",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub kind: BoundKind,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub n: u64,
    pub smallest_prime: u64,
    pub case_tag: CaseTag,
    /// ω(n/p).
    pub distinct_primes_of_n_over_p: usize,
    /// Exponent of `p` in `n`.
    pub smallest_prime_exponent: u32,
    /// The remaining `(q_i, α_i)`, ascending.
    pub other_primes: Vec<(u64, u32)>,
    /// Populated by [`t1_report`] for cases other than `FailsLemma3`.
    pub bound: Option<Bound>,
}

impl CaseReport {
    /// The bound is always compared against 1.
    pub fn bound_threshold(&self) -> Rational {
        Rational::one()
    }

    pub fn bound_cmp_threshold(&self) -> Option<Ordering> {
        self.bound.as_ref().map(|b| b.value.cmp_one())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma3 {
    pub passes: bool,
    pub smallest_prime: u64,
    /// ω(n/p).
    pub prime_count: usize,
}

fn factor_at_least_two(n: u64) -> Result<Factorization, StructureError> {
    if n < 2 {
        return Err(StructureError::TooSmall(n));
    }
    Ok(factorize(n)?)
}

fn lemma3_from(f: &Factorization) -> Lemma3 {
    let (p, a) = f.factors()[0];
    let prime_count = f.distinct_primes() - usize::from(a == 1);
    Lemma3 {
        passes: (prime_count as u64) < p,
        smallest_prime: p,
        prime_count,
    }
}

/// With `p` the smallest prime factor of `n`: passes iff `ω(n/p) < p`.
pub fn lemma3_check(n: u64) -> Result<Lemma3, StructureError> {
    Ok(lemma3_from(&factor_at_least_two(n)?))
}

/// Case classification, without the bound populated.
pub fn classify(n: u64) -> Result<CaseReport, StructureError> {
    let f = factor_at_least_two(n)?;
    Ok(classify_factored(&f))
}

fn classify_factored(f: &Factorization) -> CaseReport {
    let l3 = lemma3_from(f);
    let (p, a) = f.factors()[0];
    let case_tag = if !l3.passes {
        CaseTag::FailsLemma3
    } else if a >= 2 {
        CaseTag::Case2
    } else if f.n() % 2 == 1 {
        CaseTag::Case1a
    } else {
        CaseTag::Case1b
    };
    CaseReport {
        n: f.n(),
        smallest_prime: p,
        case_tag,
        distinct_primes_of_n_over_p: l3.prime_count,
        smallest_prime_exponent: a,
        other_primes: f.factors()[1..].to_vec(),
        bound: None,
    }
}

/// Classification plus the exact bound that rules out a CD covering of `n`.
///
/// `FailsLemma3` reports carry no bound. Any bound `>= 1` is returned as
/// [`StructureError::BoundContradiction`].
pub fn t1_report(n: u64) -> Result<CaseReport, StructureError> {
    let f = factor_at_least_two(n)?;
    let mut report = classify_factored(&f);
    let bound = match report.case_tag {
        CaseTag::FailsLemma3 => return Ok(report),
        CaseTag::Case1b if n != 2 => Bound {
            kind: BoundKind::CdDensity,
            value: density_formula(&f.divisors_gt1()).expect("divisors are distinct and >= 2"),
        },
        _ => Bound {
            kind: BoundKind::ReciprocalSum,
            value: euler_divisor_sum(n)?,
        },
    };
    if bound.value.cmp_one() != Ordering::Less {
        return Err(StructureError::BoundContradiction {
            n,
            value: bound.value,
        });
    }
    report.bound = Some(bound);
    Ok(report)
}

/// `(p^k - 1) / (p^k (p - 1))`, the density of any CD set of `p^k`.
pub fn prime_power_density(p: u64, k: u32) -> Rational {
    let p = num_bigint::BigInt::from(p);
    let pk = num_traits::pow(p.clone(), k as usize);
    Rational::new(&pk - 1, &pk * (p - 1))
}

/// `1/q + (p^k - 1) / (p^k (p - 1))`, the density of any CD set of `q·p^k`.
pub fn q_pk_density(q: u64, p: u64, k: u32) -> Rational {
    Rational::recip_of(q) + prime_power_density(p, k)
}

/// `{p^(i-1) mod p^i : 1 <= i <= k}`.
pub fn construct_prime_power(p: u64, k: u32) -> Result<CongruenceSet, StructureError> {
    if !is_prime(p) {
        return Err(StructureError::NotPrime(p));
    }
    if k == 0 {
        return Err(StructureError::ZeroExponent);
    }
    p.checked_pow(k).ok_or(StructureError::Overflow)?;
    let congruences = (1..=k)
        .map(|i| Congruence::from_unsigned(p.pow(i - 1), p.pow(i)).expect("modulus >= 2"))
        .collect();
    Ok(CongruenceSet::new(congruences).expect("prime powers are distinct"))
}

/// Parameters of the `q·p^k` construction for a given `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QpkParams {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    /// Smallest `a` in `[1, p-1]` with `a ≢ q^-1 (mod p)`.
    pub a: u64,
}

impl QpkParams {
    pub fn density(&self) -> Rational {
        q_pk_density(self.q, self.p, self.k)
    }
}

/// Splits `n = q·p^k` and picks the residue parameter. For `k = 1`, `p` is the
/// larger prime.
pub fn q_pk_params(n: u64) -> Result<QpkParams, StructureError> {
    let f = factor_at_least_two(n)?;
    let (q, p, k) = match *f.factors() {
        [(small, 1), (large, 1)] => (small, large, 1),
        [(q, 1), (p, k)] | [(p, k), (q, 1)] => (q, p, k),
        _ => return Err(StructureError::UnsupportedShape(n)),
    };
    if p == 2 {
        return Err(StructureError::ProvenInfeasible { n, q, k });
    }
    let q_inv = mod_inverse((q % p) as i64, p).expect("distinct primes are coprime");
    let a = (1..p)
        .find(|&a| a != q_inv)
        .expect("p >= 3 leaves a valid residue");
    Ok(QpkParams { q, p, k, a })
}

/// `{0 mod q} ∪ {p^(i-1) + 1 mod p^i} ∪ {a·q·p^(j-1) + 1 mod q·p^j}` for
/// `1 <= i, j <= k`.
pub fn construct_q_pk(n: u64) -> Result<CongruenceSet, StructureError> {
    let QpkParams { q, p, k, a } = q_pk_params(n)?;
    let mut congruences = Vec::with_capacity(2 * k as usize + 1);
    congruences.push(Congruence::from_unsigned(0, q).expect("q >= 2"));
    for i in 1..=k {
        let pi = p.pow(i);
        congruences.push(Congruence::from_unsigned(p.pow(i - 1) + 1, pi).expect("p^i >= 2"));
        congruences
            .push(Congruence::from_unsigned(a * q * p.pow(i - 1) + 1, q * pi).expect("q·p^i >= 2"));
    }
    Ok(CongruenceSet::new(congruences).expect("divisors are distinct"))
}
