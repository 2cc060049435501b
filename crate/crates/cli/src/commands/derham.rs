//! `derham`: truncated completed de Rham cohomology of `V(I)`.

use residua::derham::{cohomology_dims, stabilized_cohomology};
use residua::exactalg::{IdealBasis, MonomialOrder};
use residua::Field;
use serde_json::{json, Value};

use super::{check, Check, Outcome};
use crate::job::{as_fields, CliResult, Ctx, Fields};

pub fn run<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>) -> CliResult<Outcome> {
    let gens = ctx.polys(fields, "ideal")?;
    let n = fields.u32("N")?;
    let d = fields.u32("D")?;
    if n == 0 {
        return Err(fields.err("N", "the adic order must be positive"));
    }
    let ideal = IdealBasis::new(&ctx.ring, gens, MonomialOrder::Grevlex)?;
    let report = if fields.bool_or("stabilize", false)? {
        stabilized_cohomology(&ideal, n, d)?
    } else {
        cohomology_dims(&ideal, n, d)?
    };
    let value = json!({
        "dims": report.dims,
        "stabilized": report.stabilized,
        "truncation": report.truncation,
    });
    let cert = json!({
        "complex_dims": report.complex_dims,
        "ranks": report.ranks,
        "next_dims": report.next_dims,
        "wider_dims": report.wider_dims,
        "resolved": report.resolved,
    });
    let t = report.truncation;
    Ok(Outcome::new(value, cert).note(format!(
        "window N={}, D={}; compared against (N+1, D+2) and (N, D+2)",
        t.adic_order, t.degree_cap
    )))
}

fn usizes(fields: &Fields<'_>, key: &str) -> CliResult<Vec<usize>> {
    Ok(fields.u32s(key)?.into_iter().map(|x| x as usize).collect())
}

pub fn verify(value: &Value, cert: &Fields<'_>) -> CliResult<Vec<Check>> {
    let value = as_fields("/value", value)?;
    let dims = usizes(&value, "dims")?;
    let complex = usizes(cert, "complex_dims")?;
    let ranks = usizes(cert, "ranks")?;
    let next = usizes(cert, "next_dims")?;
    let wider = usizes(cert, "wider_dims")?;
    let resolved = cert.bool_or("resolved", false)?;
    let flags: Vec<bool> = value
        .items("stabilized")?
        .into_iter()
        .map(|(_, v)| v.as_bool().unwrap_or(false))
        .collect();
    let shapes = dims.len() == complex.len() && ranks.len() + 1 == complex.len().max(1) && flags.len() == dims.len();
    if !shapes {
        return Ok(vec![check("rank table has one rank per differential", false)]);
    }
    let mut checks = Vec::new();
    for p in 0..dims.len() {
        let out = ranks.get(p).copied().unwrap_or(0);
        let inc = if p > 0 { ranks[p - 1] } else { 0 };
        let h = complex[p].checked_sub(out + inc);
        checks.push(check(format!("h^{p} = dim - rank out - rank in"), h == Some(dims[p])));
        let stable = resolved && next.get(p) == Some(&dims[p]) && wider.get(p) == Some(&dims[p]);
        checks.push(check(format!("stabilization flag in degree {p}"), flags[p] == stable));
    }
    Ok(checks)
}
