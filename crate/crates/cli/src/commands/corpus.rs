//! `corpus`: the seeded verification suites.

use residua::corpus::{run_suites, DEFAULT_SEED, SUITES};
use serde_json::{json, Map, Value};

use super::{check, Check, Outcome};
use crate::job::{as_fields, CliResult, Fields};

fn names(fields: &Fields<'_>) -> CliResult<Vec<String>> {
    if fields.has("suites") {
        return fields.strings("suites");
    }
    Ok(fields.opt_str("suite")?.map(|s| vec![s.to_string()]).unwrap_or_default())
}

pub fn run(fields: &Fields<'_>, seed: Option<u64>) -> CliResult<Outcome> {
    let names = names(fields)?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let seed = seed.unwrap_or(DEFAULT_SEED);
    let outcomes = run_suites(&refs, seed)?;
    let mut suites = Vec::new();
    let mut tally = Vec::new();
    let mut timing = Map::new();
    let mut diagnostics = Vec::new();
    for o in &outcomes {
        suites.push(json!({
            "suite": o.suite,
            "cases": o.cases,
            "failed": o.failed,
            "nontrivial": o.nontrivial,
            "passed": o.passed(),
            "failures": o.failures,
        }));
        tally.push(json!({ "suite": o.suite, "cases": o.cases, "failed": o.failed }));
        timing.insert(o.suite.clone(), json!(o.millis));
        diagnostics.push(format!(
            "{} {} ({} cases, {} failed, {} nontrivial)",
            if o.passed() { "PASS" } else { "FAIL" },
            o.suite,
            o.cases,
            o.failed,
            o.nontrivial
        ));
    }
    let failed = outcomes.iter().any(|o| !o.passed());
    let mut out = Outcome::new(json!({ "seed": seed, "suites": suites }), json!({ "tally": tally }));
    out.diagnostics = diagnostics;
    out.timing = Some(json!({ "suite_millis": timing }));
    out.failed = failed;
    Ok(out)
}

pub fn verify(value: &Value, cert: &Fields<'_>) -> CliResult<Vec<Check>> {
    let value = as_fields("/value", value)?;
    let suites = value.items("suites")?;
    let tally = cert.items("tally")?;
    if suites.len() != tally.len() {
        return Ok(vec![check("one tally entry per suite", false)]);
    }
    let mut checks = Vec::new();
    for ((sptr, s), (tptr, t)) in suites.into_iter().zip(tally) {
        let s = as_fields(&sptr, s)?;
        let t = as_fields(&tptr, t)?;
        let name = s.str("suite")?;
        let (cases, failed) = (t.u32("cases")?, t.u32("failed")?);
        let consistent = SUITES.contains(&name)
            && t.str("suite")? == name
            && s.u32("cases")? == cases
            && s.u32("failed")? == failed
            && s.bool_or("passed", false)? == (failed == 0 && cases > 0);
        checks.push(check(format!("{name} verdict matches its tally"), consistent));
    }
    Ok(checks)
}
