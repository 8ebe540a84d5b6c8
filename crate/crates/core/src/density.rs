//! Closed-form densities.
//!
//! For a CD set the covered density depends only on the moduli: it is the
//! alternating sum over pairwise-coprime subsets `S` of `1 / prod(S)`, with
//! sign `(-1)^(|S|+1)`. Subsets are enumerated depth-first over the sorted
//! moduli, extending only with moduli coprime to the product chosen so far.
//! Every such product divides `L = lcm(moduli)`, so each level is summed as an
//! integer numerator over `L` and reduced once at the end.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::numtheory::{factorize, lcm_iter, NumberError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityError {
    ModulusTooSmall(u64),
    DuplicateModulus(u64),
}

impl fmt::Display for DensityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityError::ModulusTooSmall(d) => write!(f, "modulus {d} is below 2"),
            DensityError::DuplicateModulus(d) => write!(f, "modulus {d} is repeated"),
        }
    }
}

impl core::error::Error for DensityError {}

fn sorted_moduli(moduli: &[u64]) -> Result<Vec<u64>, DensityError> {
    let mut sorted = moduli.to_vec();
    sorted.sort_unstable();
    if let Some(&d) = sorted.iter().find(|&&d| d < 2) {
        return Err(DensityError::ModulusTooSmall(d));
    }
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(DensityError::DuplicateModulus(w[0]));
    }
    Ok(sorted)
}

struct LevelSums<'a> {
    moduli: &'a [u64],
    lcm: BigUint,
    // levels[s - 1] = sum over coprime s-subsets of lcm / prod
    levels: Vec<BigUint>,
}

impl LevelSums<'_> {
    fn extend(&mut self, start: usize, product: &BigUint, depth: usize) {
        for (i, &d) in self.moduli.iter().enumerate().skip(start) {
            let rem = (product % d).to_u64().unwrap_or(0);
            if rem.gcd(&d) != 1 {
                continue;
            }
            let next = product * d;
            if self.levels.len() <= depth {
                self.levels.push(BigUint::zero());
            }
            self.levels[depth] += &self.lcm / &next;
            self.extend(i + 1, &next, depth + 1);
        }
    }
}

// Same walk in machine words. Products divide the lcm, so only the level
// sums can overflow; `None` sends the caller to the big-integer walk.
struct SmallLevelSums<'a> {
    moduli: &'a [u64],
    lcm: u128,
    levels: Vec<u128>,
}

impl SmallLevelSums<'_> {
    fn extend(&mut self, start: usize, product: u128, depth: usize) -> Option<()> {
        for (i, &d) in self.moduli.iter().enumerate().skip(start) {
            let d128 = u128::from(d);
            if (product % d128).gcd(&d128) != 1 {
                continue;
            }
            let next = product * d128;
            if self.levels.len() <= depth {
                self.levels.push(0);
            }
            self.levels[depth] = self.levels[depth].checked_add(self.lcm / next)?;
            self.extend(i + 1, next, depth + 1)?;
        }
        Some(())
    }
}

/// Level numerators over the common denominator `lcm(moduli)`.
fn level_numerators(sorted: &[u64]) -> (Vec<BigUint>, BigUint) {
    let lcm = lcm_iter(sorted.iter().copied());
    if let Some(small) = lcm.to_u128() {
        let mut sums = SmallLevelSums {
            moduli: sorted,
            lcm: small,
            levels: Vec::new(),
        };
        if sums.extend(0, 1, 0).is_some() {
            return (sums.levels.into_iter().map(BigUint::from).collect(), lcm);
        }
    }
    let mut sums = LevelSums {
        moduli: sorted,
        lcm,
        levels: Vec::new(),
    };
    sums.extend(0, &BigUint::one(), 0);
    (sums.levels, sums.lcm)
}

/// The magnitudes of the inclusion–exclusion levels: entry `s - 1` is the sum
/// of `1 / (d_1 ... d_s)` over all pairwise-coprime `s`-subsets. Trailing
/// empty levels are omitted.
pub fn coprime_levels(moduli: &[u64]) -> Result<Vec<Rational>, DensityError> {
    let sorted = sorted_moduli(moduli)?;
    let (levels, lcm) = level_numerators(&sorted);
    Ok(levels
        .into_iter()
        .map(|num| Rational::from_biguint_ratio(num, lcm.clone()))
        .collect())
}

/// Density covered by any CD congruence set with these moduli.
pub fn density_formula(moduli: &[u64]) -> Result<Rational, DensityError> {
    let sorted = sorted_moduli(moduli)?;
    let (levels, lcm) = level_numerators(&sorted);
    let mut total = BigInt::zero();
    for (s, level) in levels.into_iter().enumerate() {
        if s % 2 == 0 {
            total += BigInt::from(level);
        } else {
            total -= BigInt::from(level);
        }
    }
    Ok(Rational::new(total, BigInt::from(lcm)))
}

/// `sum 1/d` over the moduli.
pub fn sum_reciprocals(moduli: &[u64]) -> Rational {
    let lcm = lcm_iter(moduli.iter().copied());
    let numer: BigUint = moduli.iter().map(|&d| &lcm / d).sum();
    Rational::from_biguint_ratio(numer, lcm)
}

/// `sum 1/d` over divisors `d > 1` of `n`, through the product
/// `-1 + prod_i (1 + 1/p_i + ... + 1/p_i^a_i)`.
pub fn euler_divisor_sum(n: u64) -> Result<Rational, NumberError> {
    let f = factorize(n)?;
    let product = f.factors().iter().fold(Rational::one(), |acc, &(p, a)| {
        // (p^(a+1) - 1) / (p^a (p - 1))
        let p = BigInt::from(p);
        let pa = num_traits::pow(p.clone(), a as usize);
        let factor = Rational::new(&pa * &p - 1, &pa * (&p - 1));
        acc * factor
    });
    Ok(product - Rational::one())
}

/// `sum_{j>=0} p^-j = p / (p - 1)`.
///
/// Panics if `p < 2`.
pub fn geometric_upper_bound(p: u64) -> Rational {
    assert!(p >= 2, "geometric bound needs p >= 2");
    Rational::new(p, p - 1)
}
