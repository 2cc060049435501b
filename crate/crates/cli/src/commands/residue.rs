//! `residue`: local, iterated and fiber-decomposed Tate residues.

use residua::exactalg::Polynomial;
use residua::residue::{
    residue_fiber_decompose, tate_residue_expansion, tate_residue_iterated, verify_expansion, verify_hensel, HenselFactors,
    LocalPoint, MonicPresentation,
};
use residua::{Error, Field};
use serde_json::{json, Value};

use super::{check, poly_matrix, poly_value, string_matrix, strings, Check, Outcome};
use crate::job::{as_fields, CliError, CliResult, Ctx, Fields};

/// Denominator with its variable.
struct Step<F: Field> {
    q: Polynomial<F>,
    t: usize,
}

enum Request<F: Field> {
    Single { f: Polynomial<F>, step: Step<F>, i: u32 },
    Iterated { f: Polynomial<F>, steps: Vec<Step<F>>, exps: Vec<u32> },
    Fiber { f: Polynomial<F>, step: Step<F>, i: u32, point: LocalPoint<F>, precision: u32, seeds: Option<Vec<Polynomial<F>>> },
}

/// The last variable in which `q` is monic of positive degree.
fn default_var<F: Field>(q: &Polynomial<F>) -> Option<usize> {
    (0..q.ring().nvars()).rev().find(|&v| q.degree_in(v).unwrap_or(0) >= 1 && q.is_monic_in(v))
}

fn step_at<F: Field>(ctx: &Ctx<F>, ptr: &str, v: &Value, var: Option<(String, &str)>) -> CliResult<Step<F>> {
    let (q, explicit) = match v {
        Value::String(s) => (ctx.poly_at(ptr, s)?, var),
        Value::Object(_) => {
            let o = as_fields(ptr, v)?;
            let key = o.pick(&["p", "q"]).ok_or_else(|| o.err("p", "missing field"))?;
            let q = ctx.poly(&o, key)?;
            let var = match o.opt_str("var")? {
                Some(name) => Some((o.pointer("var"), name)),
                None => var,
            };
            (q, var)
        }
        _ => return Err(CliError::input(ptr, "expected a polynomial or {p, var}")),
    };
    let t = match explicit {
        Some((p, name)) => ctx.var_at(&p, name)?,
        None => default_var(&q)
            .ok_or_else(|| CliError::input(ptr, format!("{q} is not monic in any variable; name one with `var`")))?,
    };
    Ok(Step { q, t })
}

fn exponents(fields: &Fields<'_>) -> CliResult<Option<Vec<u32>>> {
    let Some(key) = fields.pick(&["i", "exponents"]) else {
        return Ok(None);
    };
    let v = fields.require(key)?;
    let exps = if v.is_array() {
        fields.u32s(key)?
    } else {
        vec![fields.u32(key)?]
    };
    if exps.contains(&0) {
        return Err(fields.err(key, "exponents must be positive"));
    }
    Ok(Some(exps))
}

fn request<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Request<F>> {
    let fkey = fields.pick(&["f", "numerator"]).ok_or_else(|| fields.err("f", "missing field"))?;
    let f = ctx.poly(fields, fkey)?;
    let pkey = fields.pick(&["q", "presentation", "p"]).ok_or_else(|| fields.err("q", "missing field"))?;
    let pval = fields.require(pkey)?;
    let exps = exponents(fields)?;
    if let Value::Array(items) = pval {
        let vars = if fields.has("vars") { Some(fields.strings("vars")?) } else { None };
        if items.is_empty() {
            return Err(fields.err(pkey, "need at least one denominator"));
        }
        if vars.as_ref().is_some_and(|v| v.len() != items.len()) {
            return Err(fields.err("vars", "need one variable per denominator"));
        }
        let mut steps = Vec::new();
        for (k, (ptr, v)) in fields.items(pkey)?.into_iter().enumerate() {
            let var = vars.as_ref().map(|vs| (format!("{}/{k}", fields.pointer("vars")), vs[k].as_str()));
            steps.push(step_at(ctx, &ptr, v, var)?);
        }
        let exps = exps.unwrap_or_else(|| vec![1; steps.len()]);
        if exps.len() != steps.len() {
            return Err(fields.err(fields.pick(&["i", "exponents"]).unwrap_or("i"), "need one exponent per denominator"));
        }
        return Ok(Request::Iterated { f, steps, exps });
    }
    let var = fields.opt_str("var")?.map(|name| (fields.pointer("var"), name));
    let step = step_at(ctx, &fields.pointer(pkey), pval, var)?;
    let i = match exps.as_deref() {
        None => 1,
        Some([i]) => *i,
        Some(_) => return Err(fields.err(fields.pick(&["i", "exponents"]).unwrap_or("i"), "expected a single exponent")),
    };
    if !fields.has("point") {
        return Ok(Request::Single { f, step, i });
    }
    let point_fields = fields.object("point")?;
    let mut vars = Vec::new();
    let mut values = Vec::new();
    let obj = fields.require("point")?.as_object().expect("object checked");
    for (name, v) in obj {
        let ptr = point_fields.pointer(name);
        let var = ctx.var_at(&ptr, name)?;
        let c = poly_value(ctx, &ptr, v)?;
        let c = c.constant_value().ok_or_else(|| CliError::input(ptr, "coordinate must be a constant"))?;
        vars.push(var);
        values.push(c);
    }
    let point = LocalPoint::new(vars, values)?;
    let precision = fields.u32("precision")?;
    if precision == 0 {
        return Err(fields.err("precision", "precision must be positive"));
    }
    let seeds = if fields.has("factors") { Some(ctx.polys(fields, "factors")?) } else { None };
    Ok(Request::Fiber { f, step, i, point, precision, seeds })
}

fn var_name<F: Field>(ctx: &Ctx<F>, t: usize) -> String {
    ctx.ring.vars()[t].clone()
}

pub fn run<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Outcome> {
    match request(ctx, fields)? {
        Request::Single { f, step, i } => {
            let e = tate_residue_expansion(&f, &step.q, i, step.t)?;
            let cert = json!({
                "kind": "expansion",
                "var": var_name(ctx, step.t),
                "coefficients": string_matrix(&e.coefficients),
            });
            Ok(Outcome::new(json!(e.value.to_string()), cert).note(format!(
                "residue of ({f}) d{} / ({})^{i}",
                var_name(ctx, step.t),
                step.q
            )))
        }
        Request::Iterated { f, steps, exps } => {
            let qs: Vec<Polynomial<F>> = steps.iter().map(|s| s.q.clone()).collect();
            let ts: Vec<usize> = steps.iter().map(|s| s.t).collect();
            let value = tate_residue_iterated(&f, &qs, &exps, &ts)?;
            let mut cur = f;
            let mut records = Vec::new();
            for j in (0..steps.len()).rev() {
                let e = tate_residue_expansion(&cur, &qs[j], exps[j], ts[j])?;
                records.push(json!({
                    "var": var_name(ctx, ts[j]),
                    "numerator": cur.to_string(),
                    "value": e.value.to_string(),
                    "coefficients": string_matrix(&e.coefficients),
                }));
                cur = e.value;
            }
            if cur != value {
                return Err(CliError::Domain(Error::ContractViolation("stepwise residues disagree".into())));
            }
            let cert = json!({ "kind": "iterated", "steps": records });
            Ok(Outcome::new(json!(value.to_string()), cert)
                .note(format!("iterated over {} denominators, innermost first", steps.len())))
        }
        Request::Fiber { f, step, i, point, precision, seeds } => {
            let pres = MonicPresentation::new(step.q.clone(), step.t)?;
            let dec = residue_fiber_decompose(&pres, &point, &f, i, precision, seeds.as_deref())?;
            let global = tate_residue_expansion(&f, &step.q, i, step.t)?;
            let modulus = point_ideal(ctx, &point);
            let locals: Vec<Value> =
                dec.locals.iter().map(|l| json!({ "factor": l.factor.to_string(), "value": l.value.to_string() })).collect();
            let value = json!({
                "global": dec.global.to_string(),
                "locals": locals,
                "precision": precision,
                "modulo": format!("({modulus})^{precision}"),
                "sums_to_global": dec.sums_to_global(&point),
            });
            let cert = json!({
                "kind": "fiber",
                "var": var_name(ctx, step.t),
                "hensel": { "factors": strings(&dec.hensel.factors), "seeds": strings(&dec.hensel.seeds) },
                "global_exact": global.value.to_string(),
                "coefficients": string_matrix(&global.coefficients),
            });
            Ok(Outcome::new(value, cert).note(format!("{} points in the fiber over ({modulus})", dec.locals.len())))
        }
    }
}

fn point_ideal<F: Field>(ctx: &Ctx<F>, point: &LocalPoint<F>) -> String {
    point
        .vars
        .iter()
        .zip(&point.values)
        .map(|(&v, c)| (Polynomial::var(&ctx.ring, v) - Polynomial::constant(&ctx.ring, c.clone())).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn verify<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>, value: &Value, cert: &Fields<'_>) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    match request(ctx, fields)? {
        Request::Single { f, step, i } => {
            let coeffs = poly_matrix(ctx, cert, "coefficients")?;
            checks.push(check("expansion reassembles modulo q^i", verify_expansion(&f, &step.q, i, step.t, &coeffs)?));
            let v = poly_value(ctx, "/value", value)?;
            checks.push(check("value is the top coefficient", top(&coeffs, i) == Some(&v)));
        }
        Request::Iterated { f, steps, exps } => {
            let mut cur = f;
            let records = cert.items("steps")?;
            if records.len() != steps.len() {
                return Ok(vec![check("one step per denominator", false)]);
            }
            for ((ptr, rec), j) in records.into_iter().zip((0..steps.len()).rev()) {
                let rec = as_fields(&ptr, rec)?;
                let numer = ctx.poly(&rec, "numerator")?;
                let coeffs = poly_matrix(ctx, &rec, "coefficients")?;
                let stepv = ctx.poly(&rec, "value")?;
                let name = var_name(ctx, steps[j].t);
                checks.push(check(format!("step in {name} starts from the previous value"), numer == cur));
                checks.push(check(
                    format!("step in {name} expansion reassembles"),
                    verify_expansion(&numer, &steps[j].q, exps[j], steps[j].t, &coeffs)?,
                ));
                checks.push(check(format!("step in {name} value is the top coefficient"), top(&coeffs, exps[j]) == Some(&stepv)));
                cur = stepv;
            }
            checks.push(check("value is the last step", poly_value(ctx, "/value", value)? == cur));
        }
        Request::Fiber { f, step, i, point, precision, .. } => {
            let h = cert.object("hensel")?;
            let hensel = HenselFactors { factors: ctx.polys(&h, "factors")?, seeds: ctx.polys(&h, "seeds")?, precision };
            checks.push(check("Hensel factors multiply to p modulo m^N", verify_hensel(&step.q, &point, &hensel)));
            let coeffs = poly_matrix(ctx, cert, "coefficients")?;
            let exact = ctx.poly(cert, "global_exact")?;
            checks.push(check("global expansion reassembles", verify_expansion(&f, &step.q, i, step.t, &coeffs)?));
            checks.push(check("global value is the top coefficient", top(&coeffs, i) == Some(&exact)));
            let v = as_fields("/value", value)?;
            let global = ctx.poly(&v, "global")?;
            checks.push(check("reported global is the truncation", point.truncate(&(&exact - &global), precision).is_zero()));
            let mut sum = Polynomial::zero(&ctx.ring);
            let mut factors_match = true;
            for (ptr, l) in v.items("locals")? {
                let l = as_fields(&ptr, l)?;
                sum = sum + &ctx.poly(&l, "value")?;
                factors_match &= hensel.factors.contains(&ctx.poly(&l, "factor")?);
            }
            checks.push(check("local factors are the Hensel factors", factors_match));
            checks.push(check("local residues sum to the global one modulo m^N", point.truncate(&(sum - &global), precision).is_zero()));
        }
    }
    Ok(checks)
}

fn top<F: Field>(coeffs: &[Vec<Polynomial<F>>], i: u32) -> Option<&Polynomial<F>> {
    coeffs.last().and_then(|row| row.get(i as usize - 1))
}

/// A monic presentation from `"p"` or `{p, var}`.
pub fn monic_step<F: Field>(ctx: &Ctx<F>, ptr: &str, v: &Value) -> CliResult<MonicPresentation<F>> {
    let s = step_at(ctx, ptr, v, None)?;
    MonicPresentation::new(s.q, s.t).map_err(|e| CliError::input(ptr, e.to_string()))
}
