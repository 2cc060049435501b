//! Command implementations. Each command has a `run` producing value and
//! certificate, and a `verify` that re-checks a certificate against the job.

pub mod cousin;
pub mod corpus;
pub mod derham;
pub mod groebner;
pub mod regdiff;
pub mod residue;

use residua::exactalg::Polynomial;
use residua::{CoefField, Field, Fp, PrimeField, Rational, RationalField};
use serde_json::Value;

use crate::job::{as_fields, make_ring, ring_spec, CliError, CliResult, Ctx, Fields, Job};

/// Result of a successful command.
pub struct Outcome {
    pub value: Value,
    pub certificate: Value,
    pub diagnostics: Vec<String>,
    /// Wall-clock data, excluded from the determinism contract.
    pub timing: Option<Value>,
    /// Set when the computation finished but reports a failure (corpus).
    pub failed: bool,
}

impl Outcome {
    pub fn new(value: Value, certificate: Value) -> Self {
        Outcome { value, certificate, diagnostics: Vec::new(), timing: None, failed: false }
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.diagnostics.push(line.into());
        self
    }
}

/// One named certificate check.
pub type Check = (String, bool);

pub fn check(name: impl Into<String>, ok: bool) -> Check {
    (name.into(), ok)
}

/// Runs `$body` with `$ctx` bound to a parsing context over the job's field.
macro_rules! on_ring {
    ($spec:expr, $max:expr, |$ctx:ident| $body:expr) => {
        match $spec.field {
            CoefField::Rationals => {
                let $ctx = Ctx::<Rational> { ring: make_ring(&$spec, RationalField)?, max_degree: $max };
                $body
            }
            CoefField::PrimeField(p) => {
                let $ctx = Ctx::<Fp> { ring: make_ring(&$spec, PrimeField::new(p as u64)?)?, max_degree: $max };
                $body
            }
        }
    };
}

pub fn run(command: &str, job: &Job, seed: Option<u64>, max_degree: u32) -> CliResult<Outcome> {
    let fields = job.fields();
    if command == "corpus" {
        return corpus::run(&fields, seed);
    }
    let spec = ring_spec(&fields)?;
    on_ring!(spec, max_degree, |ctx| match command {
        "residue" => residue::run(&ctx, &fields),
        "delta" => cousin::run_delta(&ctx, &fields),
        "trace" => cousin::run_trace(&ctx, &fields),
        "check" => cousin::run_check(&ctx, &fields),
        "regdiff" => regdiff::run(&ctx, &fields),
        "derham" => derham::run(&ctx, &fields),
        "groebner" => groebner::run(&ctx, &fields),
        other => Err(CliError::input("/command", format!("unknown command `{other}`"))),
    })
}

pub fn verify(command: &str, job: &Job, value: &Value, certificate: &Value, max_degree: u32) -> CliResult<Vec<Check>> {
    let fields = job.fields();
    let cert = as_fields("/certificate", certificate)?;
    if command == "corpus" {
        return corpus::verify(value, &cert);
    }
    let spec = ring_spec(&fields)?;
    on_ring!(spec, max_degree, |ctx| match command {
        "residue" => residue::verify(&ctx, &fields, value, &cert),
        "delta" => cousin::verify_delta(&ctx, &fields, value, &cert),
        "trace" => cousin::verify_trace(&ctx, &fields, value, &cert),
        "check" => cousin::verify_check(&ctx, &fields, value, &cert),
        "regdiff" => regdiff::verify(&ctx, &fields, value, &cert),
        "derham" => derham::verify(value, &cert),
        "groebner" => groebner::verify(&ctx, &fields, value, &cert),
        other => Err(CliError::input("/command", format!("unknown command `{other}`"))),
    })
}

/// Reads a matrix of polynomials (`[[String]]`).
pub fn poly_matrix<F: Field>(ctx: &Ctx<F>, fields: &Fields<'_>, key: &str) -> CliResult<Vec<Vec<Polynomial<F>>>> {
    let mut out = Vec::new();
    for (ptr, row) in fields.items(key)? {
        let row = row.as_array().ok_or_else(|| CliError::input(ptr.clone(), "expected an array"))?;
        let mut r = Vec::new();
        for (k, s) in row.iter().enumerate() {
            let p = format!("{ptr}/{k}");
            let s = s.as_str().ok_or_else(|| CliError::input(p.clone(), "expected a string"))?;
            r.push(ctx.poly_at(&p, s)?);
        }
        out.push(r);
    }
    Ok(out)
}

pub fn strings<F: Field>(ps: &[Polynomial<F>]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

pub fn string_matrix<F: Field>(rows: &[Vec<Polynomial<F>>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| strings(r)).collect()
}

/// A polynomial field of a certificate or value given as a JSON string.
pub fn poly_value<F: Field>(ctx: &Ctx<F>, pointer: &str, v: &Value) -> CliResult<Polynomial<F>> {
    let s = v.as_str().ok_or_else(|| CliError::input(pointer, "expected a string"))?;
    ctx.poly_at(pointer, s)
}
