//! Integer primitives: gcd/lcm, a general (non-coprime) CRT, trial-division
//! factorization, divisor enumeration and modular inverses.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

/// Largest input accepted by [`factorize`] is `FACTOR_LIMIT - 1` (inputs must be below 2^63).
pub const FACTOR_LIMIT: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumberError {
    Zero,
    AboveLimit(u64),
    EmptyInput,
}

impl fmt::Display for NumberError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberError::Zero => f.write_str("input must be a positive integer"),
            NumberError::AboveLimit(n) => {
                write!(f, "{n} is not below the factorization limit 2^63")
            }
            NumberError::EmptyInput => f.write_str("input list is empty"),
        }
    }
}

impl core::error::Error for NumberError {}

#[inline]
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least common multiple of a nonempty list, computed incrementally in
/// arbitrary precision.
pub fn lcm(values: &[u64]) -> Result<BigUint, NumberError> {
    if values.is_empty() {
        return Err(NumberError::EmptyInput);
    }
    if values.contains(&0) {
        return Err(NumberError::Zero);
    }
    Ok(lcm_iter(values.iter().copied()))
}

/// `lcm` over an iterator; the empty lcm is 1.
pub fn lcm_iter(values: impl IntoIterator<Item = u64>) -> BigUint {
    values.into_iter().fold(BigUint::one(), |acc, v| {
        let v = BigUint::from(v);
        let g = acc.gcd(&v);
        acc / g * v
    })
}

/// Extended Euclid on signed 128-bit values: returns `(g, x, y)` with
/// `a*x + b*y = g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Modular inverse of `a` modulo `m`, as a value in `[0, m)`. `None` when
/// `gcd(a, m) != 1` or `m == 0`.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let m128 = i128::from(m);
    let a = i128::from(a).rem_euclid(m128);
    let (g, x, _) = ext_gcd(a, m128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m128) as u64)
}

/// Solves `x ≡ a1 (mod d1)`, `x ≡ a2 (mod d2)` for arbitrary moduli.
///
/// Returns the unique class `(r, lcm(d1, d2))` with `0 <= r < lcm`, or `None`
/// when `a1 ≢ a2 (mod gcd(d1, d2))` or either modulus is zero.
pub fn crt_solve(a1: i64, d1: u64, a2: i64, d2: u64) -> Option<(u128, u128)> {
    if d1 == 0 || d2 == 0 {
        return None;
    }
    let r1 = i128::from(a1).rem_euclid(i128::from(d1)) as u128;
    let r2 = i128::from(a2).rem_euclid(i128::from(d2)) as u128;
    let g = u128::from(gcd(d1, d2));
    let (d1, d2) = (u128::from(d1), u128::from(d2));
    let diff = (r2 + d2 - r1 % d2) % d2;
    if !diff.is_multiple_of(g) {
        return None;
    }
    // x = r1 + d1 * t, with (d1/g) * t ≡ diff/g (mod d2/g)
    let m = d2 / g;
    let l = d1 / g * d2;
    if m == 1 {
        return Some((r1, l));
    }
    let inv = mod_inverse(((d1 / g) % m) as i64, m as u64)? as u128;
    let t = (diff / g % m) * inv % m;
    Some(((r1 + d1 * t) % l, l))
}

/// Canonical prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime divisors, ω(n).
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn smallest_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    /// Number of divisors of n, including 1 and n.
    pub fn divisor_count(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(_, a)| u64::from(a) + 1)
            .product()
    }

    /// All divisors greater than 1, ascending.
    pub fn divisors_gt1(&self) -> Vec<u64> {
        let mut divs = Vec::with_capacity(self.divisor_count() as usize);
        divs.push(1u64);
        for &(p, a) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..a {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs.remove(0);
        divs
    }
}

/// Factorizes `n` by trial division up to `sqrt(n)`. Accepts `1 <= n < 2^63`.
pub fn factorize(n: u64) -> Result<Factorization, NumberError> {
    if n == 0 {
        return Err(NumberError::Zero);
    }
    if n >= FACTOR_LIMIT {
        return Err(NumberError::AboveLimit(n));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut push = |rest: &mut u64, p: u64| {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(&mut rest, 2);
    let mut p = 3u64;
    while p * p <= rest {
        push(&mut rest, p);
        p += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

/// Divisors of `n` greater than 1, strictly ascending. Empty for `n = 1`.
pub fn divisors_gt1(n: u64) -> Result<Vec<u64>, NumberError> {
    factorize(n).map(|f| f.divisors_gt1())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// ω(n), the number of distinct primes dividing `n`.
pub fn omega(n: u64) -> Result<usize, NumberError> {
    factorize(n).map(|f| f.distinct_primes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(6, 10), 2);
        assert_eq!(gcd(7, 7), 7);
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm(&[2, 4, 5, 10, 20]).unwrap(), BigUint::from(20u32));
        assert_eq!(
            lcm(&[3, 6, 12, 18, 30, 42]).unwrap(),
            BigUint::from(1260u32)
        );
        assert_eq!(lcm(&[7]).unwrap(), BigUint::from(7u32));
        assert_eq!(lcm(&[]), Err(NumberError::EmptyInput));
    }

    #[test]
    fn lcm_does_not_overflow() {
        let primes = [1_000_000_007u64, 998_244_353, 1_000_000_009];
        let expected = BigUint::from(1_000_000_007u64)
            * BigUint::from(998_244_353u64)
            * BigUint::from(1_000_000_009u64);
        assert_eq!(lcm(&primes).unwrap(), expected);
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_solve(1, 2, 2, 3), Some((5, 6)));
        assert_eq!(crt_solve(0, 2, 1, 2), None);
        assert_eq!(crt_solve(2, 4, 0, 6), Some((6, 12)));
        assert_eq!(crt_solve(-1, 5, 3, 7), Some((24, 35)));
    }

    #[test]
    fn crt_agrees_with_scan() {
        for d1 in 1..=50u64 {
            for d2 in 1..=50u64 {
                let l = d1 * d2 / gcd(d1, d2);
                for (a1, a2) in [(0, 0), (1, 0), (d1 / 2, d2 / 3), (d1 - 1, d2 - 1)] {
                    let scan = (0..l).find(|&x| x % d1 == a1 % d1 && x % d2 == a2 % d2);
                    let (a1, a2) = (a1 as i64, a2 as i64);
                    let got = crt_solve(a1, d1, a2, d2);
                    match scan {
                        Some(x) => assert_eq!(got, Some((x as u128, l as u128))),
                        None => assert_eq!(got, None, "({a1} mod {d1}, {a2} mod {d2})"),
                    }
                }
            }
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(20).unwrap().factors(), &[(2, 2), (5, 1)]);
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(45).unwrap().factors(), &[(3, 2), (5, 1)]);
        assert_eq!(factorize(0), Err(NumberError::Zero));
        assert_eq!(factorize(u64::MAX), Err(NumberError::AboveLimit(u64::MAX)));
        let big_prime = 9_223_372_036_854_775_783u64; // largest prime below 2^63
        assert_eq!(factorize(big_prime).unwrap().factors(), &[(big_prime, 1)]);
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors_gt1(20).unwrap(), [2, 4, 5, 10, 20]);
        assert!(divisors_gt1(1).unwrap().is_empty());
        assert_eq!(divisors_gt1(27).unwrap(), [3, 9, 27]);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(5, 3), Some(2));
        assert_eq!(mod_inverse(1, 7), Some(1));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(-2, 7), Some(3));
    }

    proptest! {
        #[test]
        fn gcd_times_lcm(a in 1u64..1_000_000, b in 1u64..1_000_000) {
            let l = lcm(&[a, b]).unwrap();
            prop_assert_eq!(l * BigUint::from(gcd(a, b)), BigUint::from(a) * BigUint::from(b));
        }

        #[test]
        fn factorization_reassembles(n in 1u64..10_000_000) {
            let f = factorize(n).unwrap();
            let mut prod = 1u64;
            let mut last = 1u64;
            for &(p, a) in f.factors() {
                prop_assert!(is_prime(p));
                prop_assert!(p > last);
                last = p;
                prod *= p.pow(a);
            }
            prop_assert_eq!(prod, n);
        }

        #[test]
        fn divisor_count_matches(n in 1u64..200_000) {
            let f = factorize(n).unwrap();
            let divs = divisors_gt1(n).unwrap();
            prop_assert_eq!(divs.len() as u64, f.divisor_count() - 1);
            prop_assert!(divs.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(divs.iter().all(|d| n % d == 0));
        }

        #[test]
        fn crt_solution_satisfies_both(a1 in -1000i64..1000, d1 in 1u64..10_000,
                                       a2 in -1000i64..1000, d2 in 1u64..10_000) {
            if let Some((r, l)) = crt_solve(a1, d1, a2, d2) {
                prop_assert!(r < l);
                prop_assert_eq!((r as i128 - a1 as i128).rem_euclid(d1 as i128), 0);
                prop_assert_eq!((r as i128 - a2 as i128).rem_euclid(d2 as i128), 0);
            } else {
                prop_assert_ne!((a1 - a2).rem_euclid(gcd(d1, d2) as i64), 0);
            }
        }
    }
}
