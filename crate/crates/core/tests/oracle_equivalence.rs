//! The closed-form density of a CD set must equal its sieved density.

use cdset_core::density::{coprime_levels, density_formula, sum_reciprocals};
use cdset_core::numtheory::is_prime;
use cdset_core::search::{decide_cd_feasible, decide_non_intersecting};
use cdset_core::structure::{construct_prime_power, construct_q_pk, prime_power_density};
use cdset_core::{
    divisors_gt1, Budget, Congruence, CongruenceSet, SearchStatus, DEFAULT_SIEVE_CAP,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assert_equivalent(set: &CongruenceSet) {
    assert!(set.is_cd(), "{set}");
    let moduli = set.moduli();
    let formula = density_formula(&moduli).unwrap();
    let simulated = set.density_simulate(DEFAULT_SIEVE_CAP).unwrap();
    assert_eq!(formula, simulated, "{set}");
    assert!(formula <= sum_reciprocals(&moduli));
}

/// Random CD assignment by picking, per modulus, uniformly among residues
/// compatible with the ones already chosen. Restarts on dead ends.
fn random_cd_assignment(moduli: &[u64], rng: &mut impl Rng) -> Option<CongruenceSet> {
    'attempt: for _ in 0..64 {
        let mut chosen: Vec<Congruence> = Vec::new();
        for &d in moduli {
            let options: Vec<u64> = (0..d)
                .filter(|&a| {
                    let c = Congruence::from_unsigned(a, d).unwrap();
                    chosen
                        .iter()
                        .all(|prev| num_integer::gcd(d, prev.modulus()) == 1 || !c.overlaps(prev))
                })
                .collect();
            match options.choose(rng) {
                Some(&a) => chosen.push(Congruence::from_unsigned(a, d).unwrap()),
                None => continue 'attempt,
            }
        }
        return Some(CongruenceSet::new(chosen).unwrap());
    }
    None
}

#[test]
fn prime_power_constructions() {
    for p in (2..=13).filter(|&p| is_prime(p)) {
        for k in 1..=4 {
            let set = construct_prime_power(p, k).unwrap();
            assert_equivalent(&set);
            assert_eq!(
                set.density_simulate(DEFAULT_SIEVE_CAP).unwrap(),
                prime_power_density(p, k)
            );
        }
    }
}

#[test]
fn q_pk_constructions() {
    let mut count = 0;
    for n in 2..=2000u64 {
        if let Ok(set) = construct_q_pk(n) {
            assert_equivalent(&set);
            count += 1;
        }
    }
    assert!(count > 400, "only {count} q·p^k constructions");
}

#[test]
fn search_witnesses() {
    for n in 2..=300u64 {
        let out = decide_non_intersecting(n, &Budget::default()).unwrap();
        if let Some(w) = out.witness {
            assert_equivalent(&w);
        }
    }
}

#[test]
fn random_cd_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut tested = 0;
    while tested < 200 {
        let base = rng.gen_range(2..=100_000u64);
        let mut divs = divisors_gt1(base).unwrap();
        divs.shuffle(&mut rng);
        divs.truncate(rng.gen_range(1..=7));
        divs.sort_unstable();
        if let Some(set) = random_cd_assignment(&divs, &mut rng) {
            assert_equivalent(&set);
            tested += 1;
        }
    }
}

#[test]
fn level_count_never_exceeds_prime_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let base = rng.gen_range(2..=1_000_000u64);
        let mut divs = divisors_gt1(base).unwrap();
        divs.shuffle(&mut rng);
        divs.truncate(10);
        let omega = cdset_core::factorize(base).unwrap().distinct_primes();
        assert!(coprime_levels(&divs).unwrap().len() <= omega);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witness_density_matches_formula(
        moduli in proptest::collection::btree_set(
            proptest::sample::select(divisors_gt1(720).unwrap()), 1..8)
    ) {
        let moduli: Vec<u64> = moduli.into_iter().collect();
        let out = decide_cd_feasible(&moduli, &Budget::default()).unwrap();
        prop_assert_ne!(out.status, SearchStatus::BudgetExceeded);
        if let Some(w) = out.witness {
            prop_assert!(w.is_cd());
            prop_assert_eq!(
                w.density_simulate(DEFAULT_SIEVE_CAP).unwrap(),
                density_formula(&moduli).unwrap()
            );
        }
    }
}
