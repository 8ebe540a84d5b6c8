use std::cmp::Ordering;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use cdset_core::density::density_formula;
use cdset_core::numtheory::factorize;
use cdset_core::search::{samples_failing, scan_entry_with, CdSearch, ScanEntry, ScanSummary};
use cdset_core::structure::{
    construct_prime_power, construct_q_pk, prime_power_density, q_pk_params, t1_report,
    StructureError,
};
use cdset_core::{divisors_gt1, Budget, CongruenceSet, CoverageError, SearchOutcome, SearchStatus};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{BudgetArgs, CongruenceArg};
use crate::report::{exit, rational, set_json, set_plain, Report, SCHEMA_VERSION};

fn budget_of(args: &BudgetArgs) -> Budget {
    Budget {
        max_nodes: args.budget,
        time_limit_ms: args.time_limit_ms,
    }
}

fn run_search(moduli: &[u64], budget: &Budget) -> Result<SearchOutcome, String> {
    let search = CdSearch::new(moduli).map_err(|e| e.to_string())?;
    Ok(match budget.time_limit_ms {
        Some(ms) => {
            let deadline = Instant::now() + Duration::from_millis(ms);
            let mut past_deadline = || Instant::now() >= deadline;
            search.interrupt(&mut past_deadline).run(budget)
        }
        None => search.run(budget),
    })
}

fn cmp_word(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

pub fn density_formula_cmd(moduli: &[u64]) -> Report {
    let report = Report::new("density-formula", json!({ "moduli": moduli }));
    match density_formula(moduli) {
        Ok(d) => {
            let mut report = report;
            report.json_only("density", rational(&d));
            report.line(d.to_string());
            report
        }
        Err(e) => report.fail(exit::USAGE, e.to_string()),
    }
}

pub fn check_cd_cmd(congruences: &[CongruenceArg], cap: u64) -> Report {
    let inputs: Vec<String> = congruences.iter().map(|c| c.0.to_string()).collect();
    let mut report = Report::new(
        "check-cd",
        json!({ "congruences": inputs, "sieve_cap": cap }),
    );
    let set = match CongruenceSet::new(congruences.iter().map(|c| c.0).collect()) {
        Ok(s) => s,
        Err(e) => return report.fail(exit::USAGE, e.to_string()),
    };
    let violation = set.cd_violation();
    report.field("cd", violation.is_none(), violation.is_none().to_string());
    match violation {
        Some((a, b)) => report.field(
            "violation",
            json!([[a.residue(), a.modulus()], [b.residue(), b.modulus()]]),
            format!("{a} {b}"),
        ),
        None => report.json_only("violation", Value::Null),
    }
    report.field(
        "period",
        json!(set.period().to_string()),
        set.period().to_string(),
    );
    match set.density_simulate(cap) {
        Ok(d) => report.field("density", rational(&d), d.to_string()),
        Err(CoverageError::PeriodExceedsCap { .. }) => {
            report.field("density", Value::Null, "skipped (period exceeds sieve cap)")
        }
    }
    if violation.is_none() {
        let f = density_formula(&set.moduli()).expect("set moduli are distinct");
        report.field("density_formula", rational(&f), f.to_string());
    }
    report
}

fn outcome_fields(report: &mut Report, out: &SearchOutcome) {
    report.field("status", out.status.as_str(), out.status.as_str());
    match &out.witness {
        Some(w) => report.field("witness", set_json(w), set_plain(w)),
        None => report.json_only("witness", Value::Null),
    }
    report.field("nodes", out.nodes_explored, out.nodes_explored.to_string());
}

pub fn decide_cmd(n: Option<u64>, moduli: Option<&[u64]>, budget: &BudgetArgs) -> Report {
    let budget = budget_of(budget);
    let inputs = json!({
        "n": n,
        "moduli": moduli,
        "budget": budget.max_nodes,
        "time_limit_ms": budget.time_limit_ms,
    });
    let report = Report::new("decide", inputs);
    let moduli = match (n, moduli) {
        (Some(n), _) if n < 2 => {
            return report.fail(exit::USAGE, format!("n = {n} must be at least 2"))
        }
        (Some(n), _) => match divisors_gt1(n) {
            Ok(d) => d,
            Err(e) => return report.fail(exit::USAGE, e.to_string()),
        },
        (None, Some(m)) => m.to_vec(),
        (None, None) => return report.fail(exit::USAGE, "either --n or --moduli is required"),
    };
    let out = match run_search(&moduli, &budget) {
        Ok(o) => o,
        Err(e) => return report.fail(exit::USAGE, e),
    };
    let mut report = report;
    outcome_fields(&mut report, &out);
    if out.status == SearchStatus::BudgetExceeded {
        let msg = format!(
            "search budget exhausted after {} nodes; feasibility undecided",
            out.nodes_explored
        );
        return report.fail(exit::RESOURCE, msg);
    }
    report
}

pub fn report_cmd(n: u64) -> Report {
    let report = Report::new("report", json!({ "n": n }));
    let rep = match t1_report(n) {
        Ok(r) => r,
        Err(e @ StructureError::BoundContradiction { .. }) => {
            return report.fail(exit::NEGATIVE, e.to_string())
        }
        Err(e) => return report.fail(exit::USAGE, e.to_string()),
    };
    let mut report = report;
    let passes = rep.case_tag != cdset_core::CaseTag::FailsLemma3;
    report.field(
        "lemma3",
        json!({
            "passes": passes,
            "smallest_prime": rep.smallest_prime,
            "distinct_primes_of_n_over_p": rep.distinct_primes_of_n_over_p,
        }),
        format!(
            "{} (p={}, omega(n/p)={})",
            if passes { "passes" } else { "fails" },
            rep.smallest_prime,
            rep.distinct_primes_of_n_over_p
        ),
    );
    report.field("case", rep.case_tag.as_str(), rep.case_tag.as_str());
    let factors: Vec<Value> = factorize(n)
        .expect("t1_report already factorized n")
        .factors()
        .iter()
        .map(|&(p, a)| json!([p, a]))
        .collect();
    report.json_only("factorization", factors);
    match &rep.bound {
        Some(b) => {
            let cmp = cmp_word(b.value.cmp_one());
            report.field("bound_kind", b.kind.as_str(), b.kind.as_str());
            report.field("bound", rational(&b.value), b.value.to_string());
            report.field("threshold", rational(&rep.bound_threshold()), "1/1");
            report.field("compare", cmp, format!("{} {cmp} 1", b.value));
        }
        None => {
            report.json_only("bound_kind", Value::Null);
            report.json_only("bound", Value::Null);
            report.line(format!(
                "reason: n/p = {} has {} distinct prime divisors, not fewer than p = {}",
                n / rep.smallest_prime,
                rep.distinct_primes_of_n_over_p,
                rep.smallest_prime
            ));
        }
    }
    report
}

pub fn construct_cmd(n: u64, cap: u64) -> Report {
    let report = Report::new("construct", json!({ "n": n, "sieve_cap": cap }));
    let f = match (n >= 2).then(|| factorize(n)) {
        Some(Ok(f)) => f,
        Some(Err(e)) => return report.fail(exit::USAGE, e.to_string()),
        None => return report.fail(exit::USAGE, format!("n = {n} must be at least 2")),
    };
    let mut report = report;
    let (set, closed_form) = if let [(p, k)] = *f.factors() {
        report.field(
            "construction",
            json!({ "shape": "p^k", "p": p, "k": k }),
            format!("p^k (p={p}, k={k})"),
        );
        let set = construct_prime_power(p, k).expect("factor of n is prime");
        (set, prime_power_density(p, k))
    } else {
        match q_pk_params(n) {
            Ok(params) => {
                report.field(
                    "construction",
                    json!({ "shape": "q*p^k", "q": params.q, "p": params.p, "k": params.k, "a": params.a }),
                    format!(
                        "q*p^k (q={}, p={}, k={}, a={})",
                        params.q, params.p, params.k, params.a
                    ),
                );
                let set = construct_q_pk(n).expect("parameters already validated");
                (set, params.density())
            }
            Err(e @ StructureError::ProvenInfeasible { .. }) => {
                report.json_only("proven_infeasible", true);
                report.line("proven_infeasible: true");
                return report.fail(exit::NEGATIVE, e.to_string());
            }
            Err(e) => {
                return report.fail(
                    exit::USAGE,
                    format!("{e}; supported shapes are p^k (k >= 1) and q·p^k with k = 1 or p > 2"),
                )
            }
        }
    };
    report.field("set", set_json(&set), set_plain(&set));
    report.field("cd", set.is_cd(), set.is_cd().to_string());
    let formula = density_formula(&set.moduli()).expect("divisors are distinct");
    report.field(
        "density_closed_form",
        rational(&closed_form),
        closed_form.to_string(),
    );
    report.field("density_formula", rational(&formula), formula.to_string());
    let simulated = set.density_simulate(cap).ok();
    match &simulated {
        Some(d) => report.field("density_simulated", rational(d), d.to_string()),
        None => report.field(
            "density_simulated",
            Value::Null,
            "skipped (period exceeds sieve cap)",
        ),
    }
    let agree = formula == closed_form && simulated.as_ref().is_none_or(|d| *d == formula);
    if !set.is_cd() || !agree {
        return report.fail(exit::NEGATIVE, "construction check failed");
    }
    report
}

fn entry_plain(e: &ScanEntry) -> String {
    let mut s = format!(
        "n={} lemma3={} p={} omega={}",
        e.n,
        if e.lemma3.passes { "pass" } else { "fail" },
        e.lemma3.smallest_prime,
        e.lemma3.prime_count
    );
    match &e.outcome {
        Some(o) => s.push_str(&format!(" search={} nodes={}", o.status, o.nodes_explored)),
        None => s.push_str(" search=skipped"),
    }
    s.push_str(&format!(" verdict={}", e.verdict.as_str()));
    s
}

fn entry_json(e: &ScanEntry) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "scan_entry",
        "n": e.n,
        "lemma3_passes": e.lemma3.passes,
        "smallest_prime": e.lemma3.smallest_prime,
        "distinct_primes_of_n_over_p": e.lemma3.prime_count,
        "status": e.outcome.as_ref().map(|o| o.status.as_str()),
        "nodes": e.outcome.as_ref().map(|o| o.nodes_explored),
        "witness": e.outcome.as_ref().and_then(|o| o.witness.as_ref()).map(set_json),
        "verdict": e.verdict.as_str(),
    })
}

/// Streams one line per n (ascending, regardless of `jobs`) and returns the
/// summary report.
pub fn scan_cmd(
    min: u64,
    max: u64,
    budget: &BudgetArgs,
    jobs: usize,
    stride: u64,
    as_json: bool,
) -> Report {
    let budget = budget_of(budget);
    let inputs = json!({
        "min": min,
        "max": max,
        "budget": budget.max_nodes,
        "time_limit_ms": budget.time_limit_ms,
        "jobs": jobs,
        "lemma3_stride": stride,
    });
    let report = Report::new("scan", inputs);
    let min = min.max(2);
    if max < min {
        return report.fail(exit::USAGE, format!("--max {max} is below --min {min}"));
    }

    // which condition-failing n get searched depends only on their rank
    let mut plan = Vec::new();
    let mut failing_seen = 0u64;
    for n in min..=max {
        let passes = match cdset_core::structure::lemma3_check(n) {
            Ok(l) => l.passes,
            Err(e) => return report.fail(exit::USAGE, e.to_string()),
        };
        let search_failing = !passes && samples_failing(stride, failing_seen);
        failing_seen += u64::from(!passes);
        plan.push((n, search_failing));
    }

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => return report.fail(exit::RESOURCE, e.to_string()),
    };
    let run_one = |&(n, search_failing): &(u64, bool)| -> ScanEntry {
        let entry = match budget.time_limit_ms {
            None => scan_entry_with(n, &budget, search_failing, None),
            Some(ms) => {
                let deadline = Instant::now() + Duration::from_millis(ms);
                let mut past_deadline = || Instant::now() >= deadline;
                scan_entry_with(n, &budget, search_failing, Some(&mut past_deadline))
            }
        };
        entry.expect("n >= 2 within factorization limit")
    };

    let mut summary = ScanSummary::default();
    let stdout = io::stdout();
    let chunk = jobs.max(1) * 16;
    for batch in plan.chunks(chunk) {
        let entries: Vec<ScanEntry> = if jobs > 1 {
            pool.install(|| batch.par_iter().map(run_one).collect())
        } else {
            batch.iter().map(run_one).collect()
        };
        let mut out = stdout.lock();
        for e in &entries {
            summary.record(e);
            let line = if as_json {
                entry_json(e).to_string()
            } else {
                entry_plain(e)
            };
            let _ = writeln!(out, "{line}");
        }
        let _ = out.flush();
    }

    let mut report = report;
    report.field("feasible", summary.feasible, summary.feasible.to_string());
    report.field(
        "infeasible",
        summary.infeasible,
        summary.infeasible.to_string(),
    );
    report.field(
        "failed_lemma3",
        summary.failed_lemma3,
        summary.failed_lemma3.to_string(),
    );
    report.field(
        "budget_exceeded",
        summary.budget_exceeded,
        summary.budget_exceeded.to_string(),
    );
    report.field(
        "counterexamples",
        summary.counterexamples,
        summary.counterexamples.to_string(),
    );
    report.field(
        "lemma3_violations",
        summary.lemma3_violations,
        summary.lemma3_violations.to_string(),
    );
    if summary.alarms() > 0 {
        return report.fail(
            exit::NEGATIVE,
            format!(
                "{} conjecture counterexample(s), {} lemma3 violation(s)",
                summary.counterexamples, summary.lemma3_violations
            ),
        );
    }
    if summary.budget_exceeded > 0 {
        return report.fail(
            exit::RESOURCE,
            format!("{} search(es) exceeded the budget", summary.budget_exceeded),
        );
    }
    report
}
