//! `residua`: JSON job runner for residue complexes, traces, regular
//! differentials and truncated de Rham cohomology.

mod classes;
mod commands;
mod job;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use commands::Outcome;
use job::{CliError, CliResult, Job, COMMANDS};

#[derive(Parser, Debug)]
#[command(name = "residua", version, about = "Exact residues, Cousin complexes and truncated de Rham cohomology")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Job file (JSON); standard input when absent.
    #[arg(long, global = true, value_name = "FILE")]
    job: Option<PathBuf>,

    /// Pretty-print the envelope.
    #[arg(long, global = true)]
    pretty: bool,

    /// Seed for the randomized suites (overrides the job's seed).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Re-check certificates. Given an envelope, checks its certificate;
    /// given a job, runs it and checks the fresh certificate.
    #[arg(long, global = true)]
    verify_certificate: bool,

    /// Corpus suite to run (all suites when absent).
    #[arg(long, global = true, value_name = "NAME")]
    suite: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Tate residues: local, iterated, or split over a fiber.
    Residue,
    /// Cousin coboundary of a class.
    Delta,
    /// Trace of a class along a tower of monic presentations.
    Trace,
    /// Complex-level checks: delta-squared, annihilator, trace-chain-map, trace-transitivity.
    Check,
    /// Regular differentials of a monogenic presentation.
    Regdiff,
    /// Truncated de Rham cohomology of V(I).
    Derham,
    /// Reduced Gröbner basis with cofactors.
    Groebner,
    /// Seeded verification suites.
    Corpus,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Residue => "residue",
            Command::Delta => "delta",
            Command::Trace => "trace",
            Command::Check => "check",
            Command::Regdiff => "regdiff",
            Command::Derham => "derham",
            Command::Groebner => "groebner",
            Command::Corpus => "corpus",
        }
    }
}

#[derive(Serialize)]
struct Envelope {
    schema: u32,
    command: String,
    status: &'static str,
    value: Value,
    certificate: Value,
    diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    job: Option<Value>,
    /// Wall-clock data; not covered by the determinism contract.
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Value>,
}

impl Envelope {
    fn error(command: &str, err: &CliError) -> Self {
        let (kind, pointer) = match err {
            CliError::Input { pointer, .. } => ("input", Some(pointer.clone())),
            CliError::Domain(residua::Error::UnknownSuite(_)) => ("input", None),
            CliError::Domain(_) => ("domain", None),
        };
        let mut e = json!({ "kind": kind, "message": err.to_string() });
        if let Some(p) = pointer {
            e["pointer"] = json!(p);
        }
        Envelope {
            schema: 1,
            command: command.to_string(),
            status: "error",
            value: Value::Null,
            certificate: Value::Null,
            diagnostics: vec![err.to_string()],
            error: Some(e),
            verification: None,
            job: None,
            timing: None,
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> CliResult<Value> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::input("", format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::input("", format!("cannot read standard input: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| CliError::input("", format!("invalid JSON: {e}")))
}

fn is_envelope(doc: &Value) -> bool {
    doc.get("schema").is_some() && doc.get("certificate").is_some() && doc.get("job").is_some()
}

fn resolve_command(flag: Option<Command>, job: &Job) -> CliResult<String> {
    let name = match (flag, &job.command) {
        (Some(c), Some(j)) if c.name() != j => {
            return Err(CliError::input("/command", format!("job is for `{j}` but `{}` was requested", c.name())))
        }
        (Some(c), _) => c.name().to_string(),
        (None, Some(j)) => j.clone(),
        (None, None) => return Err(CliError::input("/command", "no command given on the command line or in the job")),
    };
    if !COMMANDS.contains(&name.as_str()) {
        return Err(CliError::input("/command", format!("unknown command `{name}`")));
    }
    Ok(name)
}

fn verification(checks: &[commands::Check]) -> (bool, Value) {
    let ok = !checks.is_empty() && checks.iter().all(|(_, ok)| *ok);
    let list: Vec<Value> = checks.iter().map(|(name, ok)| json!({ "check": name, "ok": ok })).collect();
    (ok, json!({ "verified": ok, "checks": list }))
}

struct Run {
    envelope: Envelope,
    code: u8,
}

fn execute(cli: &Cli) -> Result<Run, (String, CliError)> {
    let max_degree = job::max_degree_from_env().map_err(|e| (String::new(), e))?;
    let flag_name = cli.command.map(|c| c.name().to_string()).unwrap_or_default();
    let doc = if cli.job.is_none() && matches!(cli.command, Some(Command::Corpus)) {
        json!({})
    } else {
        read_input(cli.job.as_ref()).map_err(|e| (flag_name.clone(), e))?
    };
    if cli.verify_certificate && is_envelope(&doc) {
        return verify_envelope(cli, &doc).map_err(|e| (flag_name.clone(), e));
    }
    let mut job = Job::from_document(doc).map_err(|e| (flag_name.clone(), e))?;
    let command = resolve_command(cli.command, &job).map_err(|e| (flag_name.clone(), e))?;
    if let Some(s) = &cli.suite {
        if command != "corpus" {
            return Err((command, CliError::input("", "--suite applies to the corpus command only")));
        }
        job.payload["suite"] = json!(s);
        job.payload.as_object_mut().expect("object").remove("suites");
    }
    let seed = cli.seed.or(job.seed);
    let outcome: Outcome = commands::run(&command, &job, seed, max_degree).map_err(|e| (command.clone(), e))?;
    let mut echo = json!({ "command": command, "payload": job.payload });
    if let Some(s) = seed {
        echo["seed"] = json!(s);
    }
    let mut envelope = Envelope {
        schema: 1,
        command: command.clone(),
        status: if outcome.failed { "error" } else { "ok" },
        value: outcome.value,
        certificate: outcome.certificate,
        diagnostics: outcome.diagnostics,
        error: outcome.failed.then(|| json!({ "kind": "domain", "message": "corpus suites failed" })),
        verification: None,
        job: Some(echo),
        timing: outcome.timing,
    };
    let mut code = u8::from(outcome.failed);
    if cli.verify_certificate {
        let checks = commands::verify(&command, &job, &envelope.value, &envelope.certificate, u32::MAX)
            .map_err(|e| (command.clone(), e))?;
        let (ok, report) = verification(&checks);
        envelope.verification = Some(report);
        if !ok {
            envelope.status = "error";
            envelope.error = Some(json!({ "kind": "domain", "message": "certificate verification failed" }));
            code = 1;
        }
    }
    Ok(Run { envelope, code })
}

fn verify_envelope(cli: &Cli, doc: &Value) -> CliResult<Run> {
    let echo = doc.get("job").cloned().unwrap_or(Value::Null);
    let job = Job::from_document(echo).map_err(|e| match e {
        CliError::Input { pointer, message } => CliError::input(format!("/job{pointer}"), message),
        other => other,
    })?;
    let command = resolve_command(cli.command, &job)?;
    if doc.get("status").and_then(Value::as_str) != Some("ok") {
        return Err(CliError::input("/status", "only successful envelopes carry certificates"));
    }
    let value = doc.get("value").cloned().unwrap_or(Value::Null);
    let certificate = doc.get("certificate").cloned().unwrap_or(Value::Null);
    let checks = commands::verify(&command, &job, &value, &certificate, u32::MAX)?;
    let (ok, report) = verification(&checks);
    let envelope = Envelope {
        schema: 1,
        command,
        status: if ok { "ok" } else { "error" },
        value: report,
        certificate,
        diagnostics: checks.iter().map(|(n, ok)| format!("{} {n}", if *ok { "ok" } else { "FAILED" })).collect(),
        error: (!ok).then(|| json!({ "kind": "domain", "message": "certificate verification failed" })),
        verification: None,
        job: None,
        timing: None,
    };
    Ok(Run { envelope, code: u8::from(!ok) })
}

fn emit(envelope: &Envelope, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(envelope)
    } else {
        serde_json::to_string(envelope)
    }
    .expect("envelopes serialize");
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(run) => {
            if run.envelope.command == "corpus" {
                for line in &run.envelope.diagnostics {
                    eprintln!("{line}");
                }
            }
            emit(&run.envelope, cli.pretty);
            ExitCode::from(run.code)
        }
        Err((command, err)) => {
            eprintln!("residua: {err}");
            emit(&Envelope::error(&command, &err), cli.pretty);
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
