//! Congruences, congruence sets, and the overlap / coprime-disjoint / coverage
//! predicates on them.
//!
//! Coverage is decided by a one-bit-per-residue sieve over the lcm period `D`:
//! every congruence marks its arithmetic progression in `[0, D)`, and the
//! covered density is the popcount over `D`. Because every modulus divides
//! `D`, one covered representative settles a whole class mod `D`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::numtheory::{gcd, lcm_iter};
use crate::rational::Rational;

/// Default upper bound on the lcm period the coverage sieve will allocate for
/// (10^8 residues, about 12.5 MB of bits).
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

/// The residue class `residue mod modulus`, with `0 <= residue < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    residue: u64,
    modulus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    ModulusTooSmall(u64),
    DuplicateModulus(u64),
}

impl fmt::Display for CongruenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceError::ModulusTooSmall(d) => write!(f, "modulus {d} is below 2"),
            CongruenceError::DuplicateModulus(d) => {
                write!(
                    f,
                    "modulus {d} appears more than once in a distinct congruence set"
                )
            }
        }
    }
}

impl core::error::Error for CongruenceError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverageError {
    PeriodExceedsCap { period: BigUint, cap: u64 },
}

impl fmt::Display for CoverageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverageError::PeriodExceedsCap { period, cap } => write!(
                f,
                "lcm period {period} exceeds the sieve cap of {cap} residues"
            ),
        }
    }
}

impl core::error::Error for CoverageError {}

impl Congruence {
    /// Builds `a mod d`, normalizing `a` into `[0, d)`.
    pub fn new(residue: i64, modulus: u64) -> Result<Self, CongruenceError> {
        if modulus < 2 {
            return Err(CongruenceError::ModulusTooSmall(modulus));
        }
        let residue = i128::from(residue).rem_euclid(i128::from(modulus)) as u64;
        Ok(Congruence { residue, modulus })
    }

    /// Like [`Congruence::new`] for an already nonnegative residue.
    pub fn from_unsigned(residue: u64, modulus: u64) -> Result<Self, CongruenceError> {
        if modulus < 2 {
            return Err(CongruenceError::ModulusTooSmall(modulus));
        }
        Ok(Congruence {
            residue: residue % modulus,
            modulus,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, x: i64) -> bool {
        i128::from(x).rem_euclid(i128::from(self.modulus)) as u64 == self.residue
    }

    /// True iff some integer lies in both classes, i.e. the residues agree
    /// modulo `gcd` of the moduli.
    pub fn overlaps(&self, other: &Congruence) -> bool {
        let g = gcd(self.modulus, other.modulus);
        self.residue % g == other.residue % g
    }

    pub fn translate(&self, t: i64) -> Congruence {
        let m = i128::from(self.modulus);
        let r = (i128::from(self.residue) + i128::from(t)).rem_euclid(m) as u64;
        Congruence {
            residue: r,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.residue, self.modulus)
    }
}

pub fn overlaps(c1: &Congruence, c2: &Congruence) -> bool {
    c1.overlaps(c2)
}

/// Counted coverage over one lcm period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coverage {
    pub covered: u64,
    pub period: u64,
}

/// A finite congruence set ordered by modulus, with its cached lcm period.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruenceSet {
    congruences: Vec<Congruence>,
    period: BigUint,
    distinct: bool,
}

impl CongruenceSet {
    /// Builds a set with pairwise distinct moduli.
    pub fn new(mut congruences: Vec<Congruence>) -> Result<Self, CongruenceError> {
        congruences.sort_by_key(|c| (c.modulus, c.residue));
        if let Some(w) = congruences
            .windows(2)
            .find(|w| w[0].modulus == w[1].modulus)
        {
            return Err(CongruenceError::DuplicateModulus(w[0].modulus));
        }
        Ok(Self::build(congruences, true))
    }

    /// Builds a set that may repeat moduli. Used for non-distinct systems
    /// such as `{0 mod 2, 1 mod 2}`.
    pub fn new_relaxed(mut congruences: Vec<Congruence>) -> Self {
        congruences.sort_by_key(|c| (c.modulus, c.residue));
        let distinct = congruences.windows(2).all(|w| w[0].modulus != w[1].modulus);
        Self::build(congruences, distinct)
    }

    /// Convenience constructor from `(residue, modulus)` pairs.
    pub fn from_pairs(pairs: &[(i64, u64)]) -> Result<Self, CongruenceError> {
        let cs = pairs
            .iter()
            .map(|&(a, d)| Congruence::new(a, d))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(cs)
    }

    pub fn empty() -> Self {
        Self::build(Vec::new(), true)
    }

    fn build(congruences: Vec<Congruence>, distinct: bool) -> Self {
        let period = lcm_iter(congruences.iter().map(|c| c.modulus));
        CongruenceSet {
            congruences,
            period,
            distinct,
        }
    }

    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }

    /// lcm of the moduli (1 for the empty set).
    pub fn period(&self) -> &BigUint {
        &self.period
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.congruences.iter().map(|c| c.modulus).collect()
    }

    /// First pair that overlaps while sharing a factor, if any.
    pub fn cd_violation(&self) -> Option<(Congruence, Congruence)> {
        let cs = &self.congruences;
        for (i, a) in cs.iter().enumerate() {
            for b in &cs[i + 1..] {
                if gcd(a.modulus, b.modulus) > 1 && a.overlaps(b) {
                    return Some((*a, *b));
                }
            }
        }
        None
    }

    /// Coprime-disjoint: overlapping members always have coprime moduli.
    pub fn is_cd(&self) -> bool {
        self.cd_violation().is_none()
    }

    pub fn covers_integer(&self, x: i64) -> bool {
        self.congruences.iter().any(|c| c.contains(x))
    }

    /// Counts the residues in `[0, D)` covered by the set, `D` the lcm period.
    pub fn covered_residues(&self, cap: u64) -> Result<Coverage, CoverageError> {
        let period = match self.period.to_u64() {
            Some(d) if d <= cap => d,
            _ => {
                return Err(CoverageError::PeriodExceedsCap {
                    period: self.period.clone(),
                    cap,
                })
            }
        };
        let mut bits = vec![0u64; period.div_ceil(64) as usize];
        for c in &self.congruences {
            let mut x = c.residue;
            while x < period {
                bits[(x / 64) as usize] |= 1 << (x % 64);
                x += c.modulus;
            }
        }
        let covered = bits.iter().map(|w| u64::from(w.count_ones())).sum();
        Ok(Coverage { covered, period })
    }

    /// Density `m/D` from the coverage sieve.
    pub fn density_simulate(&self, cap: u64) -> Result<Rational, CoverageError> {
        let cov = self.covered_residues(cap)?;
        Ok(Rational::new(cov.covered, cov.period))
    }

    pub fn is_covering(&self, cap: u64) -> Result<bool, CoverageError> {
        let cov = self.covered_residues(cap)?;
        Ok(cov.covered == cov.period)
    }

    pub fn translate(&self, t: i64) -> CongruenceSet {
        CongruenceSet {
            congruences: self.congruences.iter().map(|c| c.translate(t)).collect(),
            period: self.period.clone(),
            distinct: self.distinct,
        }
    }

    pub fn period_is_one(&self) -> bool {
        self.period.is_one()
    }
}

impl fmt::Display for CongruenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.congruences.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}
