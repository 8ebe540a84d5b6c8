//! Exhaustive CD-feasibility search.
//!
//! Given moduli `d_1 < ... < d_t`, find residues `a_i` such that for every
//! pair with `g = gcd(d_i, d_j) > 1` we have `a_i ≢ a_j (mod g)`. Variables are
//! assigned in ascending-modulus order with values `0, 1, ..., d - 1`; each
//! variable only checks the earlier variables it shares a factor with. The
//! first residue is pinned to 0 since translating a CD set keeps it CD.
//!
//! The search is sequential and deterministic: the node count for a given
//! input is reproducible, so the budget is a node limit. Wall-clock limits are
//! left to the caller through an interrupt callback.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::congruence::{Congruence, CongruenceSet};
use crate::numtheory::{divisors_gt1, gcd, NumberError};
use crate::structure::{lemma3_check, Lemma3, StructureError};

/// Default node limit per decision.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

const INTERRUPT_INTERVAL: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Budget {
    pub max_nodes: u64,
    /// Informational; enforced by the caller's interrupt callback.
    pub time_limit_ms: Option<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: DEFAULT_NODE_BUDGET,
            time_limit_ms: None,
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes,
            time_limit_ms: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchStatus {
    Feasible,
    Infeasible,
    BudgetExceeded,
}

impl SearchStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchStatus::Feasible => "feasible",
            SearchStatus::Infeasible => "infeasible",
            SearchStatus::BudgetExceeded => "budget_exceeded",
        }
    }
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// Present iff `status == Feasible`.
    pub witness: Option<CongruenceSet>,
    pub nodes_explored: u64,
    pub budget: Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    ModulusTooSmall(u64),
    DuplicateModulus(u64),
    Number(NumberError),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::ModulusTooSmall(d) => write!(f, "modulus {d} is below 2"),
            SearchError::DuplicateModulus(d) => write!(f, "modulus {d} is repeated"),
            SearchError::Number(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SearchError {}

impl From<NumberError> for SearchError {
    fn from(e: NumberError) -> Self {
        SearchError::Number(e)
    }
}

impl From<StructureError> for SearchError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Number(e) => SearchError::Number(e),
            StructureError::TooSmall(n) => SearchError::ModulusTooSmall(n),
            _ => unreachable!("lemma3_check only fails on input size or factorization"),
        }
    }
}

fn validated(moduli: &[u64]) -> Result<Vec<u64>, SearchError> {
    let mut sorted = moduli.to_vec();
    sorted.sort_unstable();
    if let Some(&d) = sorted.iter().find(|&&d| d < 2) {
        return Err(SearchError::ModulusTooSmall(d));
    }
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(SearchError::DuplicateModulus(w[0]));
    }
    Ok(sorted)
}

/// A configured CD-feasibility search over one moduli set.
pub struct CdSearch<'a> {
    moduli: Vec<u64>,
    /// For each variable, the earlier variables sharing a factor and the gcd.
    constraints: Vec<Vec<(usize, u64)>>,
    break_symmetry: bool,
    interrupt: Option<&'a mut dyn FnMut() -> bool>,
}

impl<'a> CdSearch<'a> {
    pub fn new(moduli: &[u64]) -> Result<Self, SearchError> {
        let moduli = validated(moduli)?;
        let constraints = moduli
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                moduli[..i]
                    .iter()
                    .enumerate()
                    .filter_map(|(j, &e)| {
                        let g = gcd(d, e);
                        (g > 1).then_some((j, g))
                    })
                    .collect()
            })
            .collect();
        Ok(CdSearch {
            moduli,
            constraints,
            break_symmetry: true,
            interrupt: None,
        })
    }

    /// Pin the first residue to 0 (default `true`).
    pub fn break_symmetry(mut self, on: bool) -> Self {
        self.break_symmetry = on;
        self
    }

    /// Polled periodically; returning `true` stops the search as
    /// `BudgetExceeded`.
    pub fn interrupt(mut self, f: &'a mut dyn FnMut() -> bool) -> Self {
        self.interrupt = Some(f);
        self
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    fn consistent(&self, var: usize, value: u64, assignment: &[u64]) -> bool {
        self.constraints[var]
            .iter()
            .all(|&(j, g)| value % g != assignment[j] % g)
    }

    pub fn run(mut self, budget: &Budget) -> SearchOutcome {
        let t = self.moduli.len();
        let mut nodes = 0u64;
        let outcome = |status, witness, nodes| SearchOutcome {
            status,
            witness,
            nodes_explored: nodes,
            budget: *budget,
        };
        if t == 0 {
            return outcome(SearchStatus::Feasible, Some(CongruenceSet::empty()), 0);
        }
        let mut assignment = vec![0u64; t];
        // next candidate value per level
        let mut next = vec![0u64; t];
        let mut level = 0usize;
        loop {
            let limit = if level == 0 && self.break_symmetry {
                1
            } else {
                self.moduli[level]
            };
            let mut placed = false;
            while next[level] < limit {
                let v = next[level];
                next[level] += 1;
                nodes += 1;
                if nodes > budget.max_nodes {
                    return outcome(SearchStatus::BudgetExceeded, None, nodes - 1);
                }
                if nodes.is_multiple_of(INTERRUPT_INTERVAL) {
                    if let Some(stop) = self.interrupt.as_mut() {
                        if stop() {
                            return outcome(SearchStatus::BudgetExceeded, None, nodes);
                        }
                    }
                }
                if self.consistent(level, v, &assignment) {
                    assignment[level] = v;
                    placed = true;
                    break;
                }
            }
            if placed {
                if level + 1 == t {
                    let witness = CongruenceSet::new(
                        self.moduli
                            .iter()
                            .zip(&assignment)
                            .map(|(&d, &a)| Congruence::from_unsigned(a, d).expect("d >= 2"))
                            .collect(),
                    )
                    .expect("validated moduli are distinct");
                    return outcome(SearchStatus::Feasible, Some(witness), nodes);
                }
                level += 1;
                next[level] = 0;
            } else if level == 0 {
                return outcome(SearchStatus::Infeasible, None, nodes);
            } else {
                level -= 1;
            }
        }
    }
}

/// Decides whether the moduli admit a CD residue assignment.
pub fn decide_cd_feasible(moduli: &[u64], budget: &Budget) -> Result<SearchOutcome, SearchError> {
    Ok(CdSearch::new(moduli)?.run(budget))
}

/// Decides whether `n` is non-intersecting (its divisors `> 1` admit a CD
/// assignment).
pub fn decide_non_intersecting(n: u64, budget: &Budget) -> Result<SearchOutcome, SearchError> {
    if n < 2 {
        return Err(SearchError::ModulusTooSmall(n));
    }
    decide_cd_feasible(&divisors_gt1(n)?, budget)
}

/// Result of the pairwise-gcd necessary condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdCondition {
    pub passes: bool,
    /// `(m, subset)` with more than `m` moduli whose pairwise gcds all equal `m`.
    pub violation: Option<(u64, Vec<u64>)>,
    /// Largest such subset size for each realized `m`, ascending in `m`.
    pub largest: Vec<(u64, usize)>,
}

fn max_clique(adj: &[Vec<bool>]) -> Vec<usize> {
    fn expand(
        adj: &[Vec<bool>],
        clique: &mut Vec<usize>,
        candidates: &[usize],
        best: &mut Vec<usize>,
    ) {
        if clique.len() > best.len() {
            best.clone_from(clique);
        }
        for (idx, &v) in candidates.iter().enumerate() {
            if clique.len() + candidates.len() - idx <= best.len() {
                return;
            }
            let rest: Vec<usize> = candidates[idx + 1..]
                .iter()
                .copied()
                .filter(|&u| adj[v][u])
                .collect();
            clique.push(v);
            expand(adj, clique, &rest, best);
            clique.pop();
        }
    }
    let all: Vec<usize> = (0..adj.len()).collect();
    let mut best = Vec::new();
    expand(adj, &mut Vec::new(), &all, &mut best);
    best
}

/// For every `m >= 2` realized as a pairwise gcd, at most `m` moduli may have
/// all pairwise gcds exactly `m`. Checked by exact maximum-clique search.
pub fn pairwise_gcd_condition(moduli: &[u64]) -> Result<GcdCondition, SearchError> {
    let moduli = validated(moduli)?;
    let mut realized: Vec<u64> = Vec::new();
    for (i, &a) in moduli.iter().enumerate() {
        for &b in &moduli[i + 1..] {
            let g = gcd(a, b);
            if g > 1 {
                realized.push(g);
            }
        }
    }
    realized.sort_unstable();
    realized.dedup();

    let mut largest = Vec::with_capacity(realized.len());
    let mut violation = None;
    for &m in &realized {
        let verts: Vec<u64> = moduli.iter().copied().filter(|d| d % m == 0).collect();
        let adj: Vec<Vec<bool>> = verts
            .iter()
            .map(|&a| verts.iter().map(|&b| a != b && gcd(a, b) == m).collect())
            .collect();
        let clique = max_clique(&adj);
        largest.push((m, clique.len()));
        if violation.is_none() && clique.len() as u64 > m {
            let mut subset: Vec<u64> = clique.into_iter().map(|i| verts[i]).collect();
            subset.sort_unstable();
            violation = Some((m, subset));
        }
    }
    Ok(GcdCondition {
        passes: violation.is_none(),
        violation,
        largest,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanVerdict {
    /// Search agrees with the smallest-prime condition.
    Consistent,
    /// Passes the condition but no CD set exists: refutes sufficiency.
    ConjectureCounterexample,
    /// Fails the condition yet a CD set was found: refutes necessity, a bug.
    Lemma3Violation,
    BudgetExceeded,
    /// Fails the condition and was not searched.
    NotSearched,
}

impl ScanVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanVerdict::Consistent => "consistent",
            ScanVerdict::ConjectureCounterexample => "CONJECTURE COUNTEREXAMPLE",
            ScanVerdict::Lemma3Violation => "LEMMA3 VIOLATION",
            ScanVerdict::BudgetExceeded => "budget_exceeded",
            ScanVerdict::NotSearched => "not_searched",
        }
    }

    pub fn is_alarm(&self) -> bool {
        matches!(
            self,
            ScanVerdict::ConjectureCounterexample | ScanVerdict::Lemma3Violation
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanEntry {
    pub n: u64,
    pub lemma3: Lemma3,
    pub outcome: Option<SearchOutcome>,
    pub verdict: ScanVerdict,
}

/// One step of the sufficiency scan. Condition-failing `n` are searched only
/// when `search_failing` is set.
pub fn scan_entry(n: u64, budget: &Budget, search_failing: bool) -> Result<ScanEntry, SearchError> {
    scan_entry_with(n, budget, search_failing, None)
}

/// [`scan_entry`] with an optional interrupt forwarded to the search.
pub fn scan_entry_with(
    n: u64,
    budget: &Budget,
    search_failing: bool,
    interrupt: Option<&mut dyn FnMut() -> bool>,
) -> Result<ScanEntry, SearchError> {
    let lemma3 = lemma3_check(n)?;
    if !lemma3.passes && !search_failing {
        return Ok(ScanEntry {
            n,
            lemma3,
            outcome: None,
            verdict: ScanVerdict::NotSearched,
        });
    }
    let mut search = CdSearch::new(&divisors_gt1(n)?)?;
    if let Some(stop) = interrupt {
        search = search.interrupt(stop);
    }
    let outcome = search.run(budget);
    let verdict = match (lemma3.passes, outcome.status) {
        (_, SearchStatus::BudgetExceeded) => ScanVerdict::BudgetExceeded,
        (true, SearchStatus::Feasible) | (false, SearchStatus::Infeasible) => {
            ScanVerdict::Consistent
        }
        (true, SearchStatus::Infeasible) => ScanVerdict::ConjectureCounterexample,
        (false, SearchStatus::Feasible) => ScanVerdict::Lemma3Violation,
    };
    Ok(ScanEntry {
        n,
        lemma3,
        outcome: Some(outcome),
        verdict,
    })
}

/// Whether a condition-failing `n` is searched under a sampling stride
/// (`0` searches none, `1` all, `k` every k-th failing `n` in the range).
pub fn samples_failing(stride: u64, failing_index: u64) -> bool {
    stride != 0 && failing_index.is_multiple_of(stride)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub feasible: u64,
    pub infeasible: u64,
    pub failed_lemma3: u64,
    pub budget_exceeded: u64,
    pub counterexamples: u64,
    pub lemma3_violations: u64,
}

impl ScanSummary {
    pub fn record(&mut self, e: &ScanEntry) {
        if !e.lemma3.passes {
            self.failed_lemma3 += 1;
        }
        match e.outcome.as_ref().map(|o| o.status) {
            Some(SearchStatus::Feasible) => self.feasible += 1,
            Some(SearchStatus::Infeasible) => self.infeasible += 1,
            Some(SearchStatus::BudgetExceeded) => self.budget_exceeded += 1,
            None => {}
        }
        match e.verdict {
            ScanVerdict::ConjectureCounterexample => self.counterexamples += 1,
            ScanVerdict::Lemma3Violation => self.lemma3_violations += 1,
            _ => {}
        }
    }

    pub fn alarms(&self) -> u64 {
        self.counterexamples + self.lemma3_violations
    }
}

/// Sequential scan over `n_min..=n_max` (with `n_min` raised to 2).
pub fn scan_conjecture(
    n_min: u64,
    n_max: u64,
    budget: &Budget,
    failing_stride: u64,
) -> Result<(Vec<ScanEntry>, ScanSummary), SearchError> {
    let mut entries = Vec::new();
    let mut summary = ScanSummary::default();
    let mut failing_seen = 0u64;
    for n in n_min.max(2)..=n_max {
        let passes = lemma3_check(n)?.passes;
        let search_failing = !passes && samples_failing(failing_stride, failing_seen);
        if !passes {
            failing_seen += 1;
        }
        let e = scan_entry(n, budget, search_failing)?;
        summary.record(&e);
        entries.push(e);
    }
    Ok((entries, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::DEFAULT_SIEVE_CAP;
    use crate::density::density_formula;

    fn assert_witness(outcome: &SearchOutcome, moduli: &[u64]) {
        let w = outcome
            .witness
            .as_ref()
            .expect("feasible outcome carries a witness");
        assert!(w.is_cd(), "{w}");
        let mut sorted = moduli.to_vec();
        sorted.sort_unstable();
        assert_eq!(w.moduli(), sorted);
        if let Ok(sim) = w.density_simulate(DEFAULT_SIEVE_CAP) {
            assert_eq!(sim, density_formula(moduli).unwrap());
        }
    }

    #[test]
    fn feasible_examples() {
        let out = decide_cd_feasible(&[2, 3, 4, 9], &Budget::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Feasible);
        assert_witness(&out, &[2, 3, 4, 9]);

        let out = decide_cd_feasible(&[5], &Budget::default()).unwrap();
        assert_eq!(
            out.witness,
            Some(CongruenceSet::from_pairs(&[(0, 5)]).unwrap())
        );
    }

    #[test]
    fn sparse_gcd_set_is_infeasible() {
        let out = decide_cd_feasible(&[3, 6, 12, 18, 30, 42], &Budget::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Infeasible);
        assert!(out.witness.is_none());
    }

    #[test]
    fn non_intersecting_examples() {
        let b = Budget::default();
        assert_eq!(
            decide_non_intersecting(20, &b).unwrap().status,
            SearchStatus::Infeasible
        );
        let o27 = decide_non_intersecting(27, &b).unwrap();
        assert_eq!(o27.status, SearchStatus::Feasible);
        assert_witness(&o27, &[3, 9, 27]);
        let o45 = decide_non_intersecting(45, &b).unwrap();
        assert_eq!(o45.status, SearchStatus::Feasible);
        assert_witness(&o45, &divisors_gt1(45).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_not_infeasibility() {
        let out = decide_cd_feasible(&[3, 6, 12, 18, 30, 42], &Budget::nodes(100)).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
        assert_eq!(out.nodes_explored, 100);
        assert!(out.witness.is_none());
    }

    #[test]
    fn interrupt_stops_search() {
        let mut calls = 0;
        let mut stop = || {
            calls += 1;
            true
        };
        let out = CdSearch::new(&[3, 6, 12, 18, 30, 42])
            .unwrap()
            .interrupt(&mut stop)
            .run(&Budget::default());
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
        assert_eq!(calls, 1);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(
            decide_cd_feasible(&[1, 2], &Budget::default()),
            Err(SearchError::ModulusTooSmall(1))
        );
        assert_eq!(
            decide_cd_feasible(&[4, 2, 4], &Budget::default()),
            Err(SearchError::DuplicateModulus(4))
        );
        assert!(decide_non_intersecting(1, &Budget::default()).is_err());
    }

    #[test]
    fn deterministic_node_counts() {
        let a = decide_non_intersecting(105, &Budget::default()).unwrap();
        let b = decide_non_intersecting(105, &Budget::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gcd_condition_examples() {
        let gcd_trap = pairwise_gcd_condition(&[3, 6, 12, 18, 30, 42]).unwrap();
        assert!(gcd_trap.passes);
        let bad = pairwise_gcd_condition(&[2, 4, 6]).unwrap();
        assert!(!bad.passes);
        assert_eq!(bad.violation, Some((2, vec![2, 4, 6])));
        let coprime = pairwise_gcd_condition(&[7, 11]).unwrap();
        assert!(coprime.passes && coprime.largest.is_empty());
    }

    #[test]
    fn gcd_condition_clique_is_exact() {
        // every pair has gcd 6 except (12, 24), so the largest 6-clique has 5 members
        let moduli = [6, 30, 42, 66, 12, 24];
        let c = pairwise_gcd_condition(&moduli).unwrap();
        assert_eq!(c.largest, [(6, 5), (12, 2)]);
        assert!(c.passes);
        let c = pairwise_gcd_condition(&[6, 30, 42, 66, 78, 102, 114]).unwrap();
        assert_eq!(c.violation, Some((6, vec![6, 30, 42, 66, 78, 102, 114])));
    }

    #[test]
    fn scan_small_range() {
        let (entries, summary) = scan_conjecture(2, 50, &Budget::default(), 1).unwrap();
        assert_eq!(entries.len(), 49);
        assert_eq!(summary.alarms(), 0);
        assert_eq!(summary.budget_exceeded, 0);
        let twenty = entries.iter().find(|e| e.n == 20).unwrap();
        assert!(!twenty.lemma3.passes);
        assert_eq!(
            twenty.outcome.as_ref().unwrap().status,
            SearchStatus::Infeasible
        );
        let two = &entries[0];
        assert_eq!(two.outcome.as_ref().unwrap().status, SearchStatus::Feasible);
    }

    #[test]
    fn scan_stride_skips_failing() {
        let (entries, summary) = scan_conjecture(2, 30, &Budget::default(), 0).unwrap();
        assert!(entries
            .iter()
            .filter(|e| !e.lemma3.passes)
            .all(|e| e.verdict == ScanVerdict::NotSearched));
        assert_eq!(summary.infeasible, 0);
    }
}
