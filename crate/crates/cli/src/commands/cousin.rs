//! `delta`, `trace` and `check`: Cousin coboundaries, traces and the
//! complex-level consistency checks.

use residua::cousin::{
    delta, delta_components, delta_squared_sum, localize_in_base, prime_factors, trace_chainmap_sides, trace_finite,
    trace_generic_direct, trace_local_direct, CousinClass, FiniteMorphismPresentation,
};
use residua::exactalg::{membership_cofactors, univar_rem, IdealBasis, MonomialOrder, Polynomial};
use residua::residue::{tate_residue_expansion, verify_expansion};
use residua::{Error, Field};
use serde_json::{json, Value};

use super::residue::monic_step;
use super::{check, poly_matrix, poly_value, string_matrix, strings, Check, Outcome};
use crate::classes::{check_witness, class_json, parse_class, zero_certificate};
use crate::job::{as_fields, CliError, CliResult, Ctx, Fields};

fn class_field<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>, key: &str) -> CliResult<CousinClass<F>> {
    parse_class(ctx, &fields.object(key)?)
}

fn presentation<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<FiniteMorphismPresentation<F>> {
    let v = fields.require("presentation")?;
    let steps = match v {
        Value::Array(_) => fields
            .items("presentation")?
            .into_iter()
            .map(|(ptr, item)| monic_step(ctx, &ptr, item))
            .collect::<CliResult<Vec<_>>>()?,
        _ => vec![monic_step(ctx, &fields.pointer("presentation"), v)?],
    };
    FiniteMorphismPresentation::new(steps).map_err(|e| fields.err("presentation", e.to_string()))
}

/// Residue data of a codimension-one class on a line: `[N dt / a^k] u^{-1}`
/// with `w u + v a'^k = 1`, `a'` the monic associate of `a`.
fn line_residue<F: Field>(class: &CousinClass<F>) -> CliResult<Option<(Polynomial<F>, Value)>> {
    let CousinClass::Local { frac, .. } = class else {
        return Ok(None);
    };
    let ring = frac.ring();
    if ring.nvars() != 1 || frac.denom().len() != 1 || frac.numer().comps().any(|(idx, _)| idx.as_slice() != [0]) {
        return Ok(None);
    }
    let a = &frac.denom().gens()[0];
    let k = frac.exps()[0];
    let lc = a.leading_coeff_in(0).constant_value().expect("one variable");
    let inv = lc.inv().expect("nonzero leading coefficient");
    let monic = a.scale(&inv);
    let numer = frac.numer().comp(&[0]).scale(&inv.pow(k as u64));
    let modulus = monic.pow(k);
    let mut unit = Polynomial::one(ring);
    for (u, e) in frac.loc() {
        unit = &unit * &u.pow(*e);
    }
    let ideal = IdealBasis::new(ring, vec![unit, modulus.clone()], MonomialOrder::Grevlex)?;
    let Some(cof) = membership_cofactors(&Polynomial::one(ring), &ideal)? else {
        return Ok(None);
    };
    let c = univar_rem(&(&numer * &cof[0]), &modulus, 0)?;
    let e = tate_residue_expansion(&c, &monic, k, 0)?;
    let cert = json!({
        "monic": monic.to_string(),
        "inverse": strings(&cof),
        "numerator": c.to_string(),
        "coefficients": string_matrix(&e.coefficients),
    });
    Ok(Some((e.value, cert)))
}

fn verify_line_residue<F: Field>(
    ctx: &Ctx<F>,
    class: &CousinClass<F>,
    residue: &Polynomial<F>,
    cert: &Fields<'_>,
) -> CliResult<bool> {
    let CousinClass::Local { frac, .. } = class else {
        return Ok(false);
    };
    let a = &frac.denom().gens()[0];
    let k = frac.exps()[0];
    let monic = ctx.poly(cert, "monic")?;
    let Some(unit_ratio) = a.exact_div(&monic).and_then(|r| r.constant_value()) else {
        return Ok(false);
    };
    if !monic.is_monic_in(0) {
        return Ok(false);
    }
    let inv = match unit_ratio.inv() {
        Some(i) => i,
        None => return Ok(false),
    };
    let numer = frac.numer().comp(&[0]).scale(&inv.pow(k as u64));
    let modulus = monic.pow(k);
    let mut unit = Polynomial::one(&ctx.ring);
    for (u, e) in frac.loc() {
        unit = &unit * &u.pow(*e);
    }
    let cof = ctx.polys(cert, "inverse")?;
    if cof.len() != 2 || !(&(&cof[0] * &unit) + &(&cof[1] * &modulus)).is_one() {
        return Ok(false);
    }
    let c = ctx.poly(cert, "numerator")?;
    if !univar_rem(&(&(&numer * &cof[0]) - &c), &modulus, 0)?.is_zero() {
        return Ok(false);
    }
    let coeffs = poly_matrix(ctx, cert, "coefficients")?;
    Ok(verify_expansion(&c, &monic, k, 0, &coeffs)?
        && coeffs.last().and_then(|r| r.get(k as usize - 1)) == Some(residue))
}

fn component_json<F: Field>(class: &CousinClass<F>, prime: &Polynomial<F>) -> CliResult<(Value, Value)> {
    let mut value = class_json(class)?;
    let mut cert = json!({ "prime": prime.to_string() });
    if let Some(frac) = class.as_fraction() {
        if let Some(w) = zero_certificate(frac)? {
            cert["zero_witness"] = w;
            value["zero"] = json!(true);
            return Ok((value, cert));
        }
    }
    value["zero"] = json!(false);
    if let Some((r, rc)) = line_residue(class)? {
        value["residue"] = json!(r.to_string());
        cert["residue"] = rc;
    }
    Ok((value, cert))
}

pub fn run_delta<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Outcome> {
    let class = class_field(ctx, fields, "class")?;
    let assert_regular = fields.bool_or("assert_regular", false)?;
    let supplied = if fields.has("factors") { ctx.polys(fields, "factors")? } else { Vec::new() };
    let mut values = Vec::new();
    let mut certs = Vec::new();
    let mut factorizations = Vec::new();
    if fields.has("b") {
        let b = ctx.poly(fields, "b")?;
        let comp = delta(&class, &b, assert_regular)?;
        let (v, c) = component_json(&comp, &b)?;
        values.push(v);
        certs.push(c);
    } else {
        let loc = match &class {
            CousinClass::Generic(r) => r.denom().to_vec(),
            CousinClass::Local { frac, .. } => frac.loc().to_vec(),
        };
        for (u, e) in &loc {
            let (unit, fs) = prime_factors(u, &supplied)?;
            let fs_json: Vec<Value> = fs.iter().map(|(p, m)| json!([p.to_string(), m])).collect();
            factorizations.push(json!({ "element": u.to_string(), "power": e, "unit": unit.to_string(), "factors": fs_json }));
        }
        for comp in delta_components(&class, &supplied, assert_regular)? {
            let prime = comp.cell().gens().last().cloned().expect("a coboundary lands at a nonempty cell");
            let (v, c) = component_json(&comp, &prime)?;
            values.push(v);
            certs.push(c);
        }
    }
    let n = values.len();
    let cert = json!({ "factorizations": factorizations, "components": certs });
    Ok(Outcome::new(json!({ "components": values }), cert).note(format!("{n} coboundary components")))
}

pub fn verify_delta<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>, value: &Value, cert: &Fields<'_>) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let class = class_field(ctx, fields, "class")?;
    let value = as_fields("/value", value)?;
    let comps = value.items("components")?;
    let comp_certs = cert.items("components")?;
    if comps.len() != comp_certs.len() {
        return Ok(vec![check("one certificate per component", false)]);
    }
    let mut primes = Vec::new();
    if fields.has("b") {
        primes.push(ctx.poly(fields, "b")?);
    } else {
        let loc = match &class {
            CousinClass::Generic(r) => r.denom().to_vec(),
            CousinClass::Local { frac, .. } => frac.loc().to_vec(),
        };
        let facts = cert.items("factorizations")?;
        checks.push(check("one factorization per localization element", facts.len() == loc.len()));
        for ((ptr, f), (u, _)) in facts.into_iter().zip(&loc) {
            let f = as_fields(&ptr, f)?;
            let unit = ctx.poly(&f, "unit")?;
            let mut prod = unit;
            for (p, item) in f.items("factors")? {
                let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| CliError::input(p.clone(), "expected a pair"))?;
                let q = poly_value(ctx, &format!("{p}/0"), &pair[0])?;
                let m = pair[1].as_u64().ok_or_else(|| CliError::input(format!("{p}/1"), "expected an integer"))? as u32;
                prod = &prod * &q.pow(m);
                primes.push(q);
            }
            checks.push(check(format!("factorization of {u} multiplies back"), &prod == u && ctx.poly(&f, "element")? == *u));
        }
    }
    for ((vptr, v), (cptr, c)) in comps.into_iter().zip(comp_certs) {
        let vf = as_fields(&vptr, v)?;
        let cf = as_fields(&cptr, c)?;
        let comp = parse_class(ctx, &vf)?;
        let prime = ctx.poly(&cf, "prime")?;
        checks.push(check(format!("{vptr} extends the cell by a listed prime"), {
            comp.cell().gens().last() == Some(&prime) && primes.contains(&prime)
        }));
        if vf.bool_or("zero", false)? {
            let ok = match (comp.as_fraction(), cf.has("zero_witness")) {
                (Some(frac), true) => check_witness(ctx, frac, &cf.object("zero_witness")?)?,
                _ => false,
            };
            checks.push(check(format!("{vptr} zero witness"), ok));
        }
        if vf.has("residue") {
            let r = ctx.poly(&vf, "residue")?;
            checks.push(check(format!("{vptr} residue"), verify_line_residue(ctx, &comp, &r, &cf.object("residue")?)?));
        }
    }
    Ok(checks)
}

/// Equality of two classes with a certificate: cross-multiplication for
/// rational forms, a zero witness of the difference for local classes.
fn difference_certificate<F: Field>(a: &CousinClass<F>, b: &CousinClass<F>) -> CliResult<(bool, Value)> {
    match (a, b) {
        (CousinClass::Generic(x), CousinClass::Generic(y)) => Ok((x.equals(y), json!({ "kind": "cross-multiplication" }))),
        (CousinClass::Local { cell: c1, frac: x }, CousinClass::Local { cell: c2, frac: y }) if c1 == c2 => {
            let w = zero_certificate(&x.sub(y)?)?;
            Ok((w.is_some(), json!({ "kind": "zero-witness", "witness": w })))
        }
        _ => Err(CliError::Domain(Error::IncompatibleDenominators("classes live at different cells".into()))),
    }
}

fn verify_difference<F: Field>(ctx: &Ctx<F>, a: &CousinClass<F>, b: &CousinClass<F>, cert: &Fields<'_>) -> CliResult<bool> {
    match (a, b) {
        (CousinClass::Generic(x), CousinClass::Generic(y)) => Ok(x.equals(y)),
        (CousinClass::Local { frac: x, .. }, CousinClass::Local { frac: y, .. }) => {
            if !cert.has("witness") {
                return Ok(false);
            }
            check_witness(ctx, &x.sub(y)?, &cert.object("witness")?)
        }
        _ => Ok(false),
    }
}

/// The trace computed without residues, when the class allows it.
fn direct_trace<F: Field>(pres: &FiniteMorphismPresentation<F>, class: &CousinClass<F>) -> CliResult<Option<CousinClass<F>>> {
    let CousinClass::Local { frac, .. } = class else {
        return Ok(None);
    };
    let m = pres.steps().len();
    let scheme = pres.scheme_gens();
    let gens = frac.denom().gens();
    if gens.len() < m || gens[..m] != scheme[..] || frac.exps()[..m].iter().any(|&e| e != 1) {
        return Ok(None);
    }
    if gens.len() == m {
        return Ok(Some(CousinClass::Generic(trace_generic_direct(pres, class)?)));
    }
    match trace_local_direct(pres, class) {
        Ok(c) => Ok(Some(c)),
        Err(Error::ContractViolation(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn run_trace<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Outcome> {
    let pres = presentation(ctx, fields)?;
    let class = class_field(ctx, fields, "class")?;
    let value = trace_finite(&pres, &class)?;
    let mut out = Outcome::new(class_json(&value)?, Value::Null);
    out.certificate = match direct_trace(&pres, &class)? {
        Some(direct) => {
            let (agree, diff) = difference_certificate(&value, &direct)?;
            if !agree {
                return Err(CliError::Domain(Error::ContractViolation(format!(
                    "residue trace {value} disagrees with the direct trace {direct}"
                ))));
            }
            json!({ "direct": class_json(&direct)?, "difference": diff })
        }
        None => {
            out.diagnostics.push("no residue-free route for this class; the certificate records the steps only".into());
            json!({ "direct": null, "steps": pres.steps().len() })
        }
    };
    Ok(out.note(format!("trace through {} monic steps", pres.steps().len())))
}

pub fn verify_trace<F: Field>(ctx: &Ctx<F>, _fields: &Fields<'_>, value: &Value, cert: &Fields<'_>) -> CliResult<Vec<Check>> {
    let v = parse_class(ctx, &as_fields("/value", value)?)?;
    if !cert.has("direct") {
        return Ok(vec![check("residue-free trace available", false)]);
    }
    let direct = parse_class(ctx, &cert.object("direct")?)?;
    let ok = verify_difference(ctx, &v, &direct, &cert.object("difference")?)?;
    Ok(vec![check("value agrees with the residue-free trace", ok)])
}

fn check_name<'a>(fields: &Fields<'a>) -> CliResult<&'a str> {
    let name = fields.str("check")?;
    match name {
        "delta-squared" | "annihilator" | "trace-chain-map" | "trace-transitivity" => Ok(name),
        other => Err(fields.err(
            "check",
            format!("unknown check `{other}` (expected delta-squared, annihilator, trace-chain-map or trace-transitivity)"),
        )),
    }
}

/// Both sides of a trace identity.
fn trace_sides<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>, name: &str) -> CliResult<(CousinClass<F>, CousinClass<F>)> {
    let pres = presentation(ctx, fields)?;
    let class = class_field(ctx, fields, "class")?;
    if name == "trace-chain-map" {
        let b = ctx.poly(fields, "b")?;
        return Ok(trace_chainmap_sides(&pres, &class, &b)?);
    }
    let prepared = localize_in_base(&pres, &class)?;
    let composite = trace_finite(&pres, &prepared)?;
    let m = pres.steps().len();
    let direct = match &prepared {
        CousinClass::Local { frac, .. } if frac.denom().len() == m && frac.exps().iter().all(|&e| e == 1) => {
            CousinClass::Generic(trace_generic_direct(&pres, &class)?)
        }
        _ => trace_local_direct(&pres, &prepared)?,
    };
    Ok((composite, direct))
}

pub fn run_check<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Outcome> {
    let name = check_name(fields)?;
    let assert_regular = fields.bool_or("assert_regular", false)?;
    match name {
        "delta-squared" => {
            let class = class_field(ctx, fields, "class")?;
            let (b, c) = (ctx.poly(fields, "b")?, ctx.poly(fields, "c")?);
            let sum = delta_squared_sum(&class, &b, &c, assert_regular)?;
            let witness = zero_certificate(&sum)?;
            let holds = witness.is_some();
            let cert = json!({ "sum": class_json(&CousinClass::at_block(sum))?, "witness": witness });
            Ok(Outcome::new(json!({ "check": name, "holds": holds }), cert))
        }
        "annihilator" => {
            let class = class_field(ctx, fields, "class")?;
            let gens = ctx.polys(fields, "ideal")?;
            let mut kills = Vec::new();
            let mut witnesses = Vec::new();
            for g in &gens {
                let scaled = class.scale(g)?;
                let frac = scaled.as_fraction().ok_or_else(|| {
                    CliError::Domain(Error::ContractViolation("annihilators are checked on local classes".into()))
                })?;
                let w = zero_certificate(frac)?;
                kills.push(json!({ "generator": g.to_string(), "kills": w.is_some() }));
                witnesses.push(w.unwrap_or(Value::Null));
            }
            let holds = witnesses.iter().all(|w| !w.is_null());
            Ok(Outcome::new(json!({ "check": name, "holds": holds, "generators": kills }), json!({ "witnesses": witnesses })))
        }
        _ => {
            let (lhs, rhs) = trace_sides(ctx, fields, name)?;
            let (holds, diff) = difference_certificate(&lhs, &rhs)?;
            let cert = json!({ "lhs": class_json(&lhs)?, "rhs": class_json(&rhs)?, "difference": diff });
            Ok(Outcome::new(json!({ "check": name, "holds": holds }), cert))
        }
    }
}

pub fn verify_check<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>, value: &Value, cert: &Fields<'_>) -> CliResult<Vec<Check>> {
    let name = check_name(fields)?;
    let holds = as_fields("/value", value)?.bool_or("holds", false)?;
    let mut checks = Vec::new();
    match name {
        "delta-squared" => {
            let class = class_field(ctx, fields, "class")?;
            let (b, c) = (ctx.poly(fields, "b")?, ctx.poly(fields, "c")?);
            let sum = delta_squared_sum(&class, &b, &c, fields.bool_or("assert_regular", false)?)?;
            checks.push(check("recorded sum matches", class_json(&CousinClass::at_block(sum.clone()))? == *cert.require("sum")?));
            if holds {
                let ok = cert.has("witness") && check_witness(ctx, &sum, &cert.object("witness")?)?;
                checks.push(check("sum has a zero witness", ok));
            }
        }
        "annihilator" => {
            let class = class_field(ctx, fields, "class")?;
            let gens = ctx.polys(fields, "ideal")?;
            let ws = cert.items("witnesses")?;
            if ws.len() != gens.len() {
                return Ok(vec![check("one witness slot per generator", false)]);
            }
            for (g, (ptr, w)) in gens.iter().zip(ws) {
                if w.is_null() {
                    continue;
                }
                let scaled = class.scale(g)?;
                let ok = match scaled.as_fraction() {
                    Some(frac) => check_witness(ctx, frac, &as_fields(&ptr, w)?)?,
                    None => false,
                };
                checks.push(check(format!("{g} kills the class"), ok));
            }
        }
        _ => {
            let lhs = parse_class(ctx, &cert.object("lhs")?)?;
            let rhs = parse_class(ctx, &cert.object("rhs")?)?;
            if holds {
                checks.push(check("sides agree", verify_difference(ctx, &lhs, &rhs, &cert.object("difference")?)?));
            }
        }
    }
    Ok(checks)
}
