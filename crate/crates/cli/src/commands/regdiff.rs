//! `regdiff`: regular differentials of a monogenic presentation.

use residua::regdiff::{is_regular_differential, kernel_of_delta_compare, regdiff_generators, MeromorphicForm, TraceValue};
use residua::residue::MonicPresentation;
use residua::Field;
use serde_json::{json, Value};

use super::residue::monic_step;
use super::{check, Check, Outcome};
use crate::job::{as_fields, CliError, CliResult, Ctx, Fields};

fn presentation<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<MonicPresentation<F>> {
    let key = fields.pick(&["f", "p", "presentation"]).ok_or_else(|| fields.err("f", "missing field"))?;
    let v = fields.require(key)?;
    match (v, fields.opt_str("var")?) {
        (Value::String(s), Some(var)) => monic_step(ctx, &fields.pointer(key), &json!({ "p": s, "var": var })),
        _ => monic_step(ctx, &fields.pointer(key), v),
    }
}

/// `{g, h?}` or `"g"`.
fn forms<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Vec<MeromorphicForm<F>>> {
    if !fields.has("checks") {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (ptr, v) in fields.items("checks")? {
        let beta = match v {
            Value::String(s) => MeromorphicForm::regular(ctx.poly_at(&ptr, s)?),
            Value::Object(_) => {
                let o = as_fields(&ptr, v)?;
                let g = ctx.poly(&o, "g")?;
                let h = if o.has("h") { ctx.poly(&o, "h")? } else { residua::exactalg::Polynomial::one(&ctx.ring) };
                MeromorphicForm::new(g, h).map_err(|e| o.err("h", e.to_string()))?
            }
            _ => return Err(CliError::input(ptr, "expected a polynomial or {g, h}")),
        };
        out.push(beta);
    }
    Ok(out)
}

fn traces_json<F: Field>(traces: &[TraceValue<F>]) -> Value {
    let items: Vec<Value> = traces
        .iter()
        .map(|t| {
            json!({
                "j": t.j,
                "numer": t.numer.to_string(),
                "denom": t.denom.to_string(),
                "quotient": t.quotient.as_ref().map(|q| q.to_string()),
            })
        })
        .collect();
    json!(items)
}

pub fn run<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Outcome> {
    let pres = presentation(ctx, fields)?;
    let module = regdiff_generators(&pres)?;
    let mut generator_traces = Vec::new();
    for g in &module.generators {
        generator_traces.push(traces_json(&is_regular_differential(&pres, g)?.traces));
    }
    let mut verdicts = Vec::new();
    let mut traces = Vec::new();
    for beta in forms(ctx, fields)? {
        let verdict = is_regular_differential(&pres, &beta)?;
        let member = module.contains(&beta)?;
        verdicts.push(json!({ "form": beta.render(&pres), "regular": verdict.regular, "module_membership": member }));
        traces.push(traces_json(&verdict.traces));
    }
    let mut value = json!({
        "generators": module.generators.iter().map(|g| g.render(&pres)).collect::<Vec<_>>(),
        "verdicts": verdicts,
    });
    let mut cert = json!({ "generator_traces": generator_traces, "traces": traces });
    let mut out = Outcome::new(Value::Null, Value::Null);
    if let Some(bound) = fields.opt_u32("degree_bound")? {
        let cmp = kernel_of_delta_compare(&pres, bound)?;
        value["comparison"] = json!({
            "pole": cmp.pole.to_string(),
            "slice_dim": cmp.slice_dim,
            "trace_kernel_dim": cmp.trace_kernel_dim,
            "delta_kernel_dim": cmp.delta_kernel_dim,
            "agree": cmp.agree,
        });
        cert["comparison"] = json!({ "trace_kernel_dim": cmp.trace_kernel_dim, "delta_kernel_dim": cmp.delta_kernel_dim });
        out.diagnostics.push(format!("two-way comparison on a slice of dimension {} up to degree {bound}", cmp.slice_dim));
    }
    out.value = value;
    out.certificate = cert;
    Ok(out.note(format!("rank {} over the base", pres.degree())))
}

/// Checks `quotient · denom = numer` or that no quotient exists, and
/// returns whether every trace is integral.
fn check_traces<F: Field>(ctx: &Ctx<F>, ptr: &str, v: &Value, degree: usize) -> CliResult<Option<bool>> {
    let items = v.as_array().ok_or_else(|| CliError::input(ptr, "expected an array"))?;
    if items.len() != degree {
        return Ok(None);
    }
    let mut integral = true;
    for (k, item) in items.iter().enumerate() {
        let t = as_fields(&format!("{ptr}/{k}"), item)?;
        let numer = ctx.poly(&t, "numer")?;
        let denom = ctx.poly(&t, "denom")?;
        if denom.is_zero() {
            return Ok(None);
        }
        match t.get("quotient") {
            Some(_) => {
                if &ctx.poly(&t, "quotient")? * &denom != numer {
                    return Ok(None);
                }
            }
            None => {
                if numer.exact_div(&denom).is_some() {
                    return Ok(None);
                }
                integral = false;
            }
        }
    }
    Ok(Some(integral))
}

pub fn verify<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>, value: &Value, cert: &Fields<'_>) -> CliResult<Vec<Check>> {
    let pres = presentation(ctx, fields)?;
    let e = pres.degree() as usize;
    let value = as_fields("/value", value)?;
    let mut checks = Vec::new();
    for (ptr, v) in cert.items("generator_traces")? {
        checks.push(check(format!("{ptr} generator traces are integral"), check_traces(ctx, &ptr, v, e)? == Some(true)));
    }
    let verdicts = value.items("verdicts")?;
    let traces = cert.items("traces")?;
    if verdicts.len() != traces.len() {
        return Ok(vec![check("one trace table per verdict", false)]);
    }
    for ((vptr, verdict), (tptr, t)) in verdicts.into_iter().zip(traces) {
        let regular = as_fields(&vptr, verdict)?.bool_or("regular", false)?;
        checks.push(check(format!("{vptr} verdict matches its traces"), check_traces(ctx, &tptr, t, e)? == Some(regular)));
    }
    if cert.has("comparison") {
        let c = cert.object("comparison")?;
        let cmp = value.object("comparison")?;
        let agree = c.u32("trace_kernel_dim")? == c.u32("delta_kernel_dim")?;
        checks.push(check("comparison verdict matches the dimensions", cmp.bool_or("agree", false)? == agree));
    }
    Ok(checks)
}
