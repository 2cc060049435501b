//! `groebner`: reduced Gröbner bases with cofactor certificates and
//! membership tests.

use residua::exactalg::groebner::{buchberger, is_groebner, reduce};
use residua::exactalg::{MonomialOrder, Polynomial};
use residua::Field;
use serde_json::{json, Value};

use super::{check, poly_matrix, string_matrix, strings, Check, Outcome};
use crate::job::{as_fields, CliError, CliResult, Ctx, Fields};

fn order(fields: &Fields<'_>) -> CliResult<MonomialOrder> {
    match fields.opt_str("order")? {
        None | Some("grevlex") => Ok(MonomialOrder::Grevlex),
        Some("lex") => Ok(MonomialOrder::Lex),
        Some(other) => Err(fields.err("order", format!("unknown order `{other}` (expected grevlex or lex)"))),
    }
}

fn generators<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Vec<Polynomial<F>>> {
    let key = fields.pick(&["ideal", "generators"]).ok_or_else(|| fields.err("ideal", "missing field"))?;
    ctx.polys(fields, key)
}

fn combine<F: Field>(ctx: &Ctx<F>, cof: &[Polynomial<F>], gens: &[Polynomial<F>]) -> Polynomial<F> {
    let mut acc = Polynomial::zero(&ctx.ring);
    for (c, g) in cof.iter().zip(gens) {
        acc = acc + &(c * g);
    }
    acc
}

pub fn run<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Outcome> {
    let gens = generators(ctx, fields)?;
    let order = order(fields)?;
    let opts = residua::exactalg::GroebnerOptions { max_degree: Some(ctx.max_degree), track_cofactors: true };
    let gb = buchberger(&ctx.ring, &gens, &order, &opts)?;
    let cofactors = gb.cofactors.clone().unwrap_or_default();
    let members = if fields.has("members") { ctx.polys(fields, "members")? } else { Vec::new() };
    let mut member_values = Vec::new();
    let mut member_certs = Vec::new();
    for m in &members {
        let (rem, quots) = reduce(m, &gb.basis, &order);
        if rem.is_zero() {
            let mut out = vec![Polynomial::zero(&ctx.ring); gens.len()];
            for (q, cof) in quots.iter().zip(&cofactors) {
                for (o, c) in out.iter_mut().zip(cof) {
                    *o = o.clone() + &(q * c);
                }
            }
            member_values.push(json!({ "poly": m.to_string(), "member": true }));
            member_certs.push(json!(strings(&out)));
        } else {
            member_values.push(json!({ "poly": m.to_string(), "member": false, "remainder": rem.to_string() }));
            member_certs.push(Value::Null);
        }
    }
    let value = json!({ "basis": strings(&gb.basis), "members": member_values });
    let cert = json!({ "cofactors": string_matrix(&cofactors), "member_cofactors": member_certs });
    Ok(Outcome::new(value, cert).note(format!("{} basis elements, degree cap {}", gb.basis.len(), ctx.max_degree)))
}

pub fn verify<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>, value: &Value, cert: &Fields<'_>) -> CliResult<Vec<Check>> {
    let gens = generators(ctx, fields)?;
    let order = order(fields)?;
    let value = as_fields("/value", value)?;
    let basis = ctx.polys(&value, "basis")?;
    let cofactors = poly_matrix(ctx, cert, "cofactors")?;
    let mut checks = Vec::new();
    let in_ideal = cofactors.len() == basis.len()
        && basis.iter().zip(&cofactors).all(|(b, cof)| cof.len() == gens.len() && combine(ctx, cof, &gens) == *b);
    checks.push(check("basis elements are combinations of the generators", in_ideal));
    checks.push(check("generators reduce to zero", gens.iter().all(|g| reduce(g, &basis, &order).0.is_zero())));
    checks.push(check("S-polynomials reduce to zero", is_groebner(&basis, &order)));
    let members = value.items("members")?;
    let certs = cert.items("member_cofactors")?;
    if members.len() != certs.len() {
        return Ok(vec![check("one certificate per membership query", false)]);
    }
    for ((mptr, m), (cptr, c)) in members.into_iter().zip(certs) {
        let mf = as_fields(&mptr, m)?;
        let poly = ctx.poly(&mf, "poly")?;
        if mf.bool_or("member", false)? {
            let arr = c.as_array().ok_or_else(|| CliError::input(cptr.clone(), "expected cofactors"))?;
            let cof = arr
                .iter()
                .enumerate()
                .map(|(k, s)| super::poly_value(ctx, &format!("{cptr}/{k}"), s))
                .collect::<CliResult<Vec<_>>>()?;
            checks.push(check(format!("{poly} is the recorded combination"), cof.len() == gens.len() && combine(ctx, &cof, &gens) == poly));
        } else {
            let rem = ctx.poly(&mf, "remainder")?;
            let actual = reduce(&poly, &basis, &order).0;
            checks.push(check(format!("{poly} leaves the recorded nonzero remainder"), !rem.is_zero() && actual == rem));
        }
    }
    Ok(checks)
}
