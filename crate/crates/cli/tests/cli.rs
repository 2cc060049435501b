use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use tempfile::NamedTempFile;

fn residua(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_residua"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.env_remove("RESIDUA_MAX_DEGREE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn job_file(doc: &Value) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    write!(f, "{doc}").unwrap();
    f
}

fn run_job(command: &str, doc: &Value, extra: &[&str]) -> (i32, Value) {
    let f = job_file(doc);
    let path = f.path().to_str().unwrap();
    let mut args = vec![command, "--job", path];
    args.extend_from_slice(extra);
    let out = residua(&args, None, &[]);
    let env: Value = serde_json::from_slice(&out.stdout).expect("stdout is one JSON envelope");
    (out.status.code().unwrap(), env)
}

fn verify_envelope(env: &Value) -> (i32, Value) {
    let f = job_file(env);
    let out = residua(&["--verify-certificate", "--job", f.path().to_str().unwrap()], None, &[]);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
}

/// Runs a job, checks it succeeded, and re-verifies the emitted envelope.
fn round_trip(command: &str, doc: Value) -> Value {
    let (code, env) = run_job(command, &doc, &[]);
    assert_eq!(code, 0, "{env}");
    assert_eq!(env["status"], "ok");
    assert_eq!(env["schema"], 1);
    assert!(!env["certificate"].is_null());
    let (vcode, report) = verify_envelope(&env);
    assert_eq!(vcode, 0, "{report}");
    assert_eq!(report["value"]["verified"], true, "{report}");
    env
}

#[test]
fn residue_of_linear_numerator_over_split_quadratic() {
    let env = round_trip("residue", json!({"q": "t^2-1", "f": "3*t+5", "i": 1}));
    assert_eq!(env["value"], "3");
}

#[test]
fn residue_accepts_wrapped_job_without_subcommand() {
    let doc = json!({"command": "residue", "payload": {"ring": "F7[t]", "q": "t^3+2", "f": "t^2", "i": 1}});
    let f = job_file(&doc);
    let out = residua(&["--job", f.path().to_str().unwrap()], None, &[]);
    assert_eq!(out.status.code(), Some(0));
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["value"], "1");
    assert_eq!(env["job"]["command"], "residue");
}

#[test]
fn residue_reads_standard_input() {
    let out = residua(&["residue"], Some(r#"{"q":"t^2","f":"t","i":1}"#), &[]);
    assert_eq!(out.status.code(), Some(0));
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["value"], "1");
}

#[test]
fn iterated_and_fiber_residues_round_trip() {
    round_trip(
        "residue",
        json!({"ring": "Q[x,s,t]", "q": ["s^2-x", "t^3-s*t-1"], "f": "s*t^2+x", "i": [2, 1]}),
    );
    round_trip(
        "residue",
        json!({"ring": "Q[x,t]", "q": "t^2-x-1", "f": "t+3", "i": 1, "point": {"x": "0"}, "precision": 4}),
    );
}

#[test]
fn delta_splits_into_two_local_residues() {
    let env = round_trip("delta", json!({"ring": "Q[t]", "class": {"num": "1", "den": ["t^2-t"]}}));
    let comps = env["value"]["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    let mut residues: Vec<String> = comps.iter().map(|c| c["residue"].as_str().unwrap().to_string()).collect();
    residues.sort();
    assert_eq!(residues, ["-1", "1"]);
}

#[test]
fn trace_and_complex_checks_round_trip() {
    let presentation = json!([{"p": "u^2-x", "var": "u"}]);
    round_trip("trace", json!({"ring": "Q[x,u]", "presentation": presentation, "class": {"num": "u^3+x", "dens": ["u^2-x", "x-1"]}}));
    let jobs = [
        json!({"ring": "Q[x,y]", "check": "delta-squared", "class": {"num": "x+y", "den": ["x*y", "x-1"]}, "b": "x", "c": "y"}),
        json!({"ring": "Q[x,y]", "check": "annihilator", "class": {"num": "1", "dens": ["x^2", "y"]}, "ideal": ["x^2", "y*x"]}),
        json!({"ring": "Q[x,u]", "check": "trace-chain-map", "presentation": ["u^2-x"],
               "class": {"num": "u+1", "dens": ["u^2-x"], "loc": ["u+2"]}, "b": "x"}),
        json!({"ring": "Q[x,u,v]", "check": "trace-transitivity",
               "presentation": [{"p": "u^2-x", "var": "u"}, {"p": "v^2-u*v-1", "var": "v"}],
               "class": {"num": "u*v+x", "dens": ["v^2-u*v-1", "u^2-x"]}}),
    ];
    for job in jobs {
        let env = round_trip("check", job);
        assert_eq!(env["value"]["holds"], true, "{env}");
    }
}

#[test]
fn regdiff_on_the_cusp() {
    let env = round_trip(
        "regdiff",
        json!({"ring": "Q[x,y]", "f": "y^2-x^3", "var": "y", "checks": ["1", {"g": "1", "h": "y^2"}], "degree_bound": 4}),
    );
    assert_eq!(env["value"]["verdicts"][0]["regular"], true);
    assert_eq!(env["value"]["verdicts"][1]["regular"], false);
    assert_eq!(env["value"]["comparison"]["agree"], true);
}

#[test]
fn derham_of_the_cusp() {
    let env = round_trip("derham", json!({"ring": "Q[x,y]", "ideal": ["y^2-x^3"], "N": 1, "D": 4}));
    assert_eq!(env["value"]["dims"], json!([1, 0, 0]));
    assert_eq!(env["value"]["truncation"], json!({"N": 1, "D": 4}));
}

#[test]
fn groebner_membership_certificates() {
    let env = round_trip(
        "groebner",
        json!({"ring": "Q[x,y]", "ideal": ["y^2-x^3", "x*y"], "order": "lex", "members": ["x^4", "x^3"]}),
    );
    assert_eq!(env["value"]["members"][0]["member"], true);
    assert_eq!(env["value"]["members"][1]["member"], false);
}

#[test]
fn malformed_ring_is_an_input_error() {
    let (code, env) = run_job("residue", &json!({"ring": "Q[t", "q": "t", "f": "1", "i": 1}), &[]);
    assert_eq!(code, 2);
    assert_eq!(env["status"], "error");
    assert_eq!(env["error"]["kind"], "input");
    assert_eq!(env["error"]["pointer"], "/ring");
}

#[test]
fn parse_errors_point_at_the_field() {
    let doc = json!({"command": "residue", "payload": {"q": "t^2-1", "f": "3*t+", "i": 1}});
    let (code, env) = run_job("residue", &doc, &[]);
    assert_eq!(code, 2);
    assert_eq!(env["error"]["pointer"], "/payload/f");
    let (code, env) = run_job("derham", &json!({"ideal": ["x"], "N": "one", "D": 2}), &[]);
    assert_eq!(code, 2);
    assert_eq!(env["error"]["pointer"], "/N");
}

#[test]
fn invalid_json_and_command_mismatch() {
    let out = residua(&["residue"], Some("{not json"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let (code, env) = run_job("delta", &json!({"command": "residue", "payload": {"q": "t", "f": "1", "i": 1}}), &[]);
    assert_eq!(code, 2);
    assert_eq!(env["error"]["pointer"], "/command");
}

#[test]
fn domain_errors_exit_one() {
    let (code, env) = run_job("derham", &json!({"ring": "F7[x,y]", "ideal": ["y^2-x^3"], "N": 1, "D": 4}), &[]);
    assert_eq!(code, 1);
    assert_eq!(env["error"]["kind"], "domain");
}

#[test]
fn degree_cap_comes_from_the_environment() {
    let job = r#"{"ring":"Q[x]","q":"x^9","f":"1","i":1}"#;
    let out = residua(&["residue"], Some(job), &[("RESIDUA_MAX_DEGREE", "8")]);
    assert_eq!(out.status.code(), Some(1));
    let out = residua(&["residue"], Some(job), &[("RESIDUA_MAX_DEGREE", "9")]);
    assert_eq!(out.status.code(), Some(0));
    let out = residua(&["residue"], Some(job), &[("RESIDUA_MAX_DEGREE", "many")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let jobs = [
        ("delta", json!({"class": {"num": "x+y", "den": ["x*y", "y^2-x"]}})),
        ("groebner", json!({"ideal": ["x^2+y", "x*y-1"]})),
        ("corpus", json!({"suite": "torsion-module", "seed": 11})),
    ];
    for (command, doc) in jobs {
        let (_, mut a) = run_job(command, &doc, &["--verify-certificate"]);
        let (_, mut b) = run_job(command, &doc, &["--verify-certificate"]);
        a.as_object_mut().unwrap().remove("timing");
        b.as_object_mut().unwrap().remove("timing");
        assert_eq!(a.to_string(), b.to_string(), "{command}");
    }
}

#[test]
fn pretty_printing_keeps_the_envelope() {
    let f = job_file(&json!({"q": "t^2-1", "f": "3*t+5", "i": 1}));
    let out = residua(&["residue", "--pretty", "--job", f.path().to_str().unwrap()], None, &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 5);
    let env: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(env["value"], "3");
}

#[test]
fn tampered_certificates_fail_verification() {
    let (_, mut env) = run_job("groebner", &json!({"ideal": ["y^2-x^3", "x*y"], "members": ["x^4"]}), &[]);
    env["certificate"]["member_cofactors"][0][0] = json!("x");
    let (code, report) = verify_envelope(&env);
    assert_eq!(code, 1);
    assert_eq!(report["value"]["verified"], false);

    let (_, mut env) = run_job("residue", &json!({"q": "t^2-1", "f": "3*t+5", "i": 1}), &[]);
    env["value"] = json!("4");
    let (code, _) = verify_envelope(&env);
    assert_eq!(code, 1);
}

#[test]
fn verify_flag_on_a_job_attaches_a_report() {
    let (code, env) = run_job("delta", &json!({"class": {"num": "1", "den": ["t^2-t"]}}), &["--verify-certificate"]);
    assert_eq!(code, 0);
    assert_eq!(env["verification"]["verified"], true);
}

#[test]
fn corpus_suites_and_exit_codes() {
    let out = residua(&["corpus", "--suite", "delta-squared"], None, &[]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("PASS delta-squared"), "{stderr}");
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["value"]["suites"][0]["passed"], true);
    assert!(env["value"]["seed"].is_u64());

    let out = residua(&["corpus", "--suite", "fiber-sum", "--seed", "5"], None, &[]);
    assert_eq!(out.status.code(), Some(0));
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["value"]["seed"], 5);

    let out = residua(&["corpus", "--suite", "nonexistent"], None, &[]);
    assert_eq!(out.status.code(), Some(2));
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["error"]["kind"], "input");
}
