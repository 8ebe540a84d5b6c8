//! Exact analysis of coprime-disjoint (CD) congruence sets.
//!
//! A congruence set `{a_1 mod d_1, ..., a_t mod d_t}` is *coprime disjoint*
//! when any two members that share an integer have coprime moduli. An
//! integer `n` is *non-intersecting* when its divisors greater than 1 can be
//! given residues forming a CD set. This crate provides:
//!
//! - [`numtheory`]: gcd/lcm, general CRT, factorization, divisors.
//! - [`congruence`]: congruences and sets, overlap / CD / covering
//!   predicates, and a bitset coverage sieve for exact densities.
//! - [`density`]: closed-form inclusion–exclusion density of CD sets,
//!   reciprocal sums and the divisor-sum product identity.
//! - [`structure`]: the smallest-prime necessary condition, case
//!   classification with exact bound reports, and the explicit CD
//!   constructions for `p^k` and `q·p^k`.
//! - [`search`]: backtracking CD-feasibility decisions, the pairwise-gcd
//!   necessary condition, and the sufficiency scan over `n`.
//!
//! All arithmetic is exact. The crate is `no_std` (with `alloc`) when built
//! without the default `std` feature.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod congruence;
pub mod density;
pub mod numtheory;
pub mod rational;
pub mod search;
pub mod structure;

pub use congruence::{Congruence, CongruenceSet, Coverage, CoverageError, DEFAULT_SIEVE_CAP};
pub use numtheory::{divisors_gt1, factorize, Factorization, NumberError};
pub use rational::Rational;
pub use search::{Budget, SearchOutcome, SearchStatus};
pub use structure::{CaseReport, CaseTag};
