//! JSON form of Cousin classes and of zero-class membership witnesses.

use residua::cousin::{Cell, CousinClass, RationalForm};
use residua::exactalg::{Polynomial, RingRef};
use residua::forms::Form;
use residua::localcoh::{DenominatorSystem, FractionJson, GenFraction, Regularity, ZeroWitness};
use residua::{Error, Field};
use serde_json::{json, Value};

use crate::job::{as_fields, CliError, CliResult, Ctx, Fields};

fn form_vars<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Vec<usize>> {
    if !fields.has("form") {
        return Ok((0..ctx.ring.nvars()).collect());
    }
    let names = fields.strings("form")?;
    let mut idx = Vec::new();
    for (k, n) in names.iter().enumerate() {
        let ptr = format!("{}/{k}", fields.pointer("form"));
        let v = ctx.var_at(&ptr, n.trim_start_matches('d')).or_else(|_| ctx.var_at(&ptr, n))?;
        if idx.contains(&v) {
            return Err(CliError::input(ptr, format!("repeated form variable `{n}`")));
        }
        idx.push(v);
    }
    Ok(idx)
}

/// `[p, k]` or `p` (exponent 1).
fn power_item<F: Field>(ctx: &Ctx<F>, ptr: &str, v: &Value) -> CliResult<(Polynomial<F>, u32)> {
    match v {
        Value::String(s) => Ok((ctx.poly_at(ptr, s)?, 1)),
        Value::Array(pair) if pair.len() == 2 => {
            let s = pair[0].as_str().ok_or_else(|| CliError::input(format!("{ptr}/0"), "expected a string"))?;
            let k = pair[1]
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::input(format!("{ptr}/1"), "expected a positive integer"))?;
            Ok((ctx.poly_at(&format!("{ptr}/0"), s)?, k))
        }
        _ => Err(CliError::input(ptr, "expected a polynomial or a [polynomial, exponent] pair")),
    }
}

fn merge_powers<F: Field>(items: Vec<(Polynomial<F>, u32)>) -> Vec<(Polynomial<F>, u32)> {
    let mut out: Vec<(Polynomial<F>, u32)> = Vec::new();
    for (p, k) in items {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += k,
            None => out.push((p, k)),
        }
    }
    out
}

/// Reads a class:
/// `{num, form?, den: [p | [p, k]]}` for the generic cell, or
/// `{num, form?, dens, exps?, loc?, cell?, assert_regular?}` for a local one.
pub fn parse_class<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<CousinClass<F>> {
    let idx = form_vars(ctx, fields)?;
    let num = ctx.poly(fields, "num")?;
    let numer = Form::basic(num, &idx);
    if fields.has("dens") {
        let frac = parse_fraction_fields(ctx, fields, numer)?;
        let cell = if fields.has("cell") {
            let mut blocks = Vec::new();
            for (ptr, v) in fields.items("cell")? {
                let items = v.as_array().ok_or_else(|| CliError::input(ptr.clone(), "expected an array of polynomials"))?;
                let mut block = Vec::new();
                for (k, s) in items.iter().enumerate() {
                    let p = format!("{ptr}/{k}");
                    let s = s.as_str().ok_or_else(|| CliError::input(p.clone(), "expected a string"))?;
                    block.push(ctx.poly_at(&p, s)?);
                }
                blocks.push(block);
            }
            Cell::new(blocks)
        } else {
            Cell::new(vec![frac.denom().gens().to_vec()])
        };
        return CousinClass::local(cell, frac).map_err(|e| fields.err("cell", e.to_string()));
    }
    let den = if fields.has("den") {
        let mut items = Vec::new();
        for (ptr, v) in fields.items("den")? {
            items.push(power_item(ctx, &ptr, v)?);
        }
        merge_powers(items)
    } else {
        Vec::new()
    };
    if den.iter().any(|(p, _)| p.is_zero()) {
        return Err(fields.err("den", "zero denominator"));
    }
    Ok(CousinClass::Generic(RationalForm::new(numer, den)?))
}

fn parse_fraction_fields<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>, numer: Form<F>) -> CliResult<GenFraction<F>> {
    let gens = ctx.polys(fields, "dens")?;
    if gens.is_empty() {
        return Err(fields.err("dens", "a local class needs at least one denominator"));
    }
    let exps = if fields.has("exps") { fields.u32s("exps")? } else { vec![1; gens.len()] };
    if exps.len() != gens.len() || exps.contains(&0) {
        return Err(fields.err("exps", "need one positive exponent per denominator"));
    }
    let regularity = match fields.get("regularity").and_then(Value::as_str) {
        Some("assumed") | Some("assumed-regular-sequence") => Some(Regularity::AssumedRegularSequence),
        Some("unchecked") => Some(Regularity::Unchecked),
        Some(other) => return Err(fields.err("regularity", format!("unknown regularity `{other}`"))),
        None if fields.bool_or("assert_regular", false)? => Some(Regularity::AssumedRegularSequence),
        None => None,
    };
    let system = match regularity {
        Some(r) => DenominatorSystem::with_regularity(gens, r),
        None => DenominatorSystem::new(gens),
    }
    .map_err(|e| fields.err("dens", e.to_string()))?;
    let mut frac = GenFraction::new(numer, system, exps).map_err(|e| fields.err("dens", e.to_string()))?;
    if fields.has("loc") {
        for (ptr, v) in fields.items("loc")? {
            let (b, k) = power_item(ctx, &ptr, v)?;
            frac = frac.with_loc(b, k).map_err(|e| CliError::input(ptr, e.to_string()))?;
        }
    }
    Ok(frac)
}

fn form_json<F: Field>(numer: &Form<F>) -> CliResult<(String, Vec<String>)> {
    let vars = numer.ring().vars();
    let comps: Vec<_> = numer.comps().collect();
    match comps.as_slice() {
        [] => Ok(("0".into(), Vec::new())),
        [(idx, c)] => Ok((c.to_string(), idx.iter().map(|&i| vars[i].clone()).collect())),
        _ => Err(CliError::Domain(Error::ContractViolation("numerator has several form components".into()))),
    }
}

/// Machine-readable rendering; `parse_class` reads it back.
pub fn class_json<F: Field>(class: &CousinClass<F>) -> CliResult<Value> {
    match class {
        CousinClass::Generic(r) => {
            let (num, form) = form_json(r.numer())?;
            let den: Vec<Value> = r.denom().iter().map(|(d, e)| json!([d.to_string(), e])).collect();
            Ok(json!({ "cell": [], "codim": 0, "display": class.to_string(), "num": num, "form": form, "den": den }))
        }
        CousinClass::Local { cell, frac } => {
            let fj = FractionJson::from_fraction(frac)?;
            let blocks: Vec<Vec<String>> =
                cell.blocks().iter().map(|b| b.iter().map(|g| g.to_string()).collect()).collect();
            let loc: Vec<Value> = fj.loc.iter().map(|(b, e)| json!([b, e])).collect();
            Ok(json!({
                "cell": blocks,
                "codim": cell.codim(),
                "display": class.to_string(),
                "num": fj.num,
                "form": fj.form,
                "dens": fj.dens,
                "exps": fj.exps,
                "loc": loc,
                "regularity": match frac.denom().regularity() {
                    Regularity::AssumedRegularSequence => "assumed",
                    Regularity::Unchecked => "unchecked",
                },
            }))
        }
    }
}

pub fn witness_json<F: Field>(w: &ZeroWitness<F>, ring: &RingRef<F>) -> Value {
    let comps: Vec<Value> = w
        .cofactors
        .iter()
        .map(|(idx, cof)| {
            json!({
                "form": idx.iter().map(|&i| ring.vars()[i].clone()).collect::<Vec<_>>(),
                "cofactors": cof.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "loc_power": w.loc_power, "components": comps })
}

/// Re-checks `b^s m_I = Σ c_k a_k^{i_k}` for every numerator component.
pub fn check_witness<F: Field>(ctx: &Ctx<F>, frac: &GenFraction<F>, w: &Fields<'_>) -> CliResult<bool> {
    let s = w.u32("loc_power")?;
    let mut b = Polynomial::one(&ctx.ring);
    for (u, e) in frac.loc() {
        b = &b * &u.pow(*e);
    }
    let bs = b.pow(s);
    let powers: Vec<Polynomial<F>> = frac.denom().gens().iter().zip(frac.exps()).map(|(a, &i)| a.pow(i)).collect();
    let mut covered = Vec::new();
    for (ptr, item) in w.items("components")? {
        let comp = as_fields(&ptr, item)?;
        let idx = form_vars(ctx, &comp)?;
        let Some((sorted, neg)) = residua::forms::sort_with_sign(&idx) else {
            return Ok(false);
        };
        let cof = ctx.polys(&comp, "cofactors")?;
        if cof.len() != powers.len() {
            return Ok(false);
        }
        let mut rhs = Polynomial::zero(&ctx.ring);
        for (c, a) in cof.iter().zip(&powers) {
            rhs = rhs + &(c * a);
        }
        let m = frac.numer().comp(&sorted);
        let m = if neg { -m } else { m };
        if &bs * &m != rhs {
            return Ok(false);
        }
        covered.push(sorted);
    }
    Ok(frac.numer().comps().all(|(idx, c)| c.is_zero() || covered.contains(idx)))
}

/// A witness for `frac` being zero, when it is.
pub fn zero_certificate<F: Field>(frac: &GenFraction<F>) -> CliResult<Option<Value>> {
    Ok(frac.zero_witness()?.map(|w| witness_json(&w, frac.ring())))
}
