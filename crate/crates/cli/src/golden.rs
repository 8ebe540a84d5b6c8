//! Golden checks run by `verify-paper`.

use cdset_core::density::{density_formula, sum_reciprocals};
use cdset_core::search::{decide_cd_feasible, decide_non_intersecting, pairwise_gcd_condition};
use cdset_core::structure::{
    construct_prime_power, construct_q_pk, lemma3_check, prime_power_density, q_pk_density,
    t1_report, StructureError,
};
use cdset_core::{Budget, CaseTag, CongruenceSet, Rational, SearchStatus};
use serde_json::{json, Value};

use crate::report::{exit, Report};

pub struct Check {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
}

impl Check {
    fn new(name: &'static str, expected: impl ToString, actual: impl ToString) -> Self {
        Check {
            name,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn show<T: ToString, E: ToString>(v: Result<T, E>) -> String {
    match v {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {}", e.to_string()),
    }
}

fn simulated(set: Result<CongruenceSet, StructureError>, cap: u64) -> String {
    match set {
        Ok(s) if s.is_cd() => show(s.density_simulate(cap)),
        Ok(s) => format!("not CD: {s}"),
        Err(e) => format!("error: {e}"),
    }
}

pub fn checks(cap: u64) -> Vec<Check> {
    let budget = Budget::default();
    let mut out = Vec::new();

    out.push(Check::new(
        "n20_formula_density",
        r(19, 20),
        show(density_formula(&[2, 4, 5, 10, 20])),
    ));
    out.push(Check::new(
        "n20_fails_lemma3",
        "fails p=2 omega=2",
        match lemma3_check(20) {
            Ok(l) => format!(
                "{} p={} omega={}",
                if l.passes { "passes" } else { "fails" },
                l.smallest_prime,
                l.prime_count
            ),
            Err(e) => format!("error: {e}"),
        },
    ));
    out.push(Check::new(
        "n20_search_infeasible",
        SearchStatus::Infeasible,
        show(decide_non_intersecting(20, &budget).map(|o| o.status)),
    ));
    out.push(Check::new(
        "n18_case1b_cd_density",
        "Case1b cd_density 17/18",
        match t1_report(18) {
            Ok(rep) => match rep.bound {
                Some(b) => format!("{} {} {}", rep.case_tag, b.kind, b.value),
                None => format!("{} no bound", rep.case_tag),
            },
            Err(e) => format!("error: {e}"),
        },
    ));
    out.push(Check::new(
        "n2_reciprocal_sum",
        r(1, 2),
        show(t1_report(2).map(|rep| {
            rep.bound
                .map(|b| b.value.to_string())
                .unwrap_or_else(|| "no bound".into())
        })),
    ));
    out.push(Check::new(
        "prime_power_27_density",
        prime_power_density(3, 3),
        simulated(construct_prime_power(3, 3), cap),
    ));
    out.push(Check::new(
        "prime_power_27_closed_form",
        r(13, 27),
        prime_power_density(3, 3),
    ));
    out.push(Check::new(
        "prime_power_125_density",
        r(31, 125),
        simulated(construct_prime_power(5, 3), cap),
    ));
    out.push(Check::new(
        "q_pk_18_density",
        q_pk_density(2, 3, 2),
        simulated(construct_q_pk(18), cap),
    ));
    out.push(Check::new(
        "q_pk_18_closed_form",
        r(17, 18),
        q_pk_density(2, 3, 2),
    ));
    out.push(Check::new(
        "q_pk_45_density",
        r(29, 45),
        simulated(construct_q_pk(45), cap),
    ));
    out.push(Check::new(
        "q_2k_12_proven_infeasible",
        "proven infeasible",
        match construct_q_pk(12) {
            Err(StructureError::ProvenInfeasible { .. }) => "proven infeasible".to_string(),
            other => format!("{other:?}"),
        },
    ));
    let gcd_trap = [3, 6, 12, 18, 30, 42];
    out.push(Check::new(
        "gcd_trap_search_infeasible",
        SearchStatus::Infeasible,
        show(decide_cd_feasible(&gcd_trap, &budget).map(|o| o.status)),
    ));
    out.push(Check::new(
        "gcd_trap_gcd_condition_passes",
        true,
        show(pairwise_gcd_condition(&gcd_trap).map(|c| c.passes)),
    ));
    let classic = CongruenceSet::from_pairs(&[(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)])
        .expect("valid congruences");
    out.push(Check::new(
        "classic_is_covering",
        true,
        show(classic.is_covering(cap)),
    ));
    out.push(Check::new(
        "classic_reciprocal_sum",
        r(4, 3),
        sum_reciprocals(&classic.moduli()),
    ));
    out.push(Check::new(
        "n45_case",
        CaseTag::Case2,
        show(t1_report(45).map(|rep| rep.case_tag)),
    ));
    out
}

pub fn verify_paper_cmd(cap: u64, inject_fault: bool) -> Report {
    let mut checks = checks(cap);
    if inject_fault {
        checks[0].expected = "0/1".into();
    }
    let mut report = Report::new("verify-paper", json!({ "sieve_cap": cap }));
    let list: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "expected": c.expected,
                "actual": c.actual,
                "pass": c.passed(),
            })
        })
        .collect();
    for c in &checks {
        let mark = if c.passed() { "PASS" } else { "FAIL" };
        report.line(format!(
            "{mark} {} expected={} actual={}",
            c.name, c.expected, c.actual
        ));
    }
    let failures: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name)
        .collect();
    report.json_only("checks", list);
    report.field(
        "passed",
        checks.len() - failures.len(),
        (checks.len() - failures.len()).to_string(),
    );
    report.field("failed", failures.len(), failures.len().to_string());
    if !failures.is_empty() {
        return report.fail(
            exit::NEGATIVE,
            format!("failed checks: {}", failures.join(", ")),
        );
    }
    report
}
