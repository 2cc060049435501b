//! Job documents, field access with JSON-pointer diagnostics, and ring
//! construction.

use std::fmt;

use residua::exactalg::{parse_poly, parse_ring_spec, Polynomial, Ring, RingRef, RingSpec};
use residua::{CoefField, Error, Field};
use serde_json::{Map, Value};

pub const DEFAULT_MAX_DEGREE: u32 = 64;

pub const COMMANDS: [&str; 8] = ["residue", "delta", "trace", "check", "regdiff", "derham", "groebner", "corpus"];

#[derive(Debug)]
pub enum CliError {
    /// Malformed input; `pointer` locates the offending field.
    Input { pointer: String, message: String },
    /// The computation itself failed.
    Domain(Error),
}

impl CliError {
    pub fn input(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input { pointer: pointer.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } | CliError::Domain(Error::UnknownSuite(_)) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { pointer, message } if pointer.is_empty() => write!(f, "{message}"),
            CliError::Input { pointer, message } => write!(f, "{pointer}: {message}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A parsed job: `{command, payload, seed}` or a bare payload.
#[derive(Debug, Clone)]
pub struct Job {
    pub command: Option<String>,
    pub payload: Value,
    pub seed: Option<u64>,
    /// Pointer prefix of the payload inside the document.
    pub base: String,
}

impl Job {
    pub fn from_document(doc: Value) -> CliResult<Job> {
        let Value::Object(mut obj) = doc else {
            return Err(CliError::input("", "job document must be a JSON object"));
        };
        let seed = match obj.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| CliError::input("/seed", "expected a non-negative integer"))?),
        };
        if obj.contains_key("payload") {
            let command = match obj.get("command") {
                None => None,
                Some(Value::String(s)) => Some(s.clone()),
                Some(_) => return Err(CliError::input("/command", "expected a string")),
            };
            let payload = obj.remove("payload").unwrap_or(Value::Null);
            if !payload.is_object() {
                return Err(CliError::input("/payload", "expected an object"));
            }
            return Ok(Job { command, payload, seed, base: "/payload".into() });
        }
        let command = match obj.remove("command") {
            None => None,
            Some(Value::String(s)) => Some(s),
            Some(_) => return Err(CliError::input("/command", "expected a string")),
        };
        obj.remove("seed");
        Ok(Job { command, payload: Value::Object(obj), seed, base: String::new() })
    }

    pub fn fields(&self) -> Fields<'_> {
        Fields::new(self.payload.as_object().expect("payload is an object"), self.base.clone())
    }
}

/// Typed access to a JSON object; every failure names its field.
#[derive(Clone)]
pub struct Fields<'a> {
    obj: &'a Map<String, Value>,
    base: String,
}

impl<'a> Fields<'a> {
    pub fn new(obj: &'a Map<String, Value>, base: String) -> Self {
        Fields { obj, base }
    }

    pub fn pointer(&self, key: &str) -> String {
        format!("{}/{}", self.base, key.replace('~', "~0").replace('/', "~1"))
    }

    pub fn err(&self, key: &str, message: impl Into<String>) -> CliError {
        CliError::input(self.pointer(key), message)
    }

    pub fn has(&self, key: &str) -> bool {
        self.obj.get(key).is_some_and(|v| !v.is_null())
    }

    pub fn get(&self, key: &str) -> Option<&'a Value> {
        self.obj.get(key).filter(|v| !v.is_null())
    }

    /// The first present key among `keys`.
    pub fn pick(&self, keys: &[&'static str]) -> Option<&'static str> {
        keys.iter().copied().find(|k| self.has(k))
    }

    pub fn require(&self, key: &str) -> CliResult<&'a Value> {
        self.get(key).ok_or_else(|| self.err(key, "missing field"))
    }

    pub fn str(&self, key: &str) -> CliResult<&'a str> {
        self.require(key)?.as_str().ok_or_else(|| self.err(key, "expected a string"))
    }

    pub fn opt_str(&self, key: &str) -> CliResult<Option<&'a str>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.as_str().map(Some).ok_or_else(|| self.err(key, "expected a string")),
        }
    }

    pub fn u32(&self, key: &str) -> CliResult<u32> {
        let v = self.require(key)?;
        v.as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| self.err(key, "expected a non-negative 32-bit integer"))
    }

    pub fn opt_u32(&self, key: &str) -> CliResult<Option<u32>> {
        if self.has(key) {
            self.u32(key).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> CliResult<bool> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.as_bool().ok_or_else(|| self.err(key, "expected a boolean")),
        }
    }

    pub fn array(&self, key: &str) -> CliResult<&'a Vec<Value>> {
        self.require(key)?.as_array().ok_or_else(|| self.err(key, "expected an array"))
    }

    pub fn object(&self, key: &str) -> CliResult<Fields<'a>> {
        let v = self.require(key)?;
        let obj = v.as_object().ok_or_else(|| self.err(key, "expected an object"))?;
        Ok(Fields::new(obj, self.pointer(key)))
    }

    pub fn strings(&self, key: &str) -> CliResult<Vec<String>> {
        self.array(key)?
            .iter()
            .enumerate()
            .map(|(k, v)| {
                v.as_str().map(str::to_string).ok_or_else(|| {
                    CliError::input(format!("{}/{k}", self.pointer(key)), "expected a string")
                })
            })
            .collect()
    }

    pub fn u32s(&self, key: &str) -> CliResult<Vec<u32>> {
        self.array(key)?
            .iter()
            .enumerate()
            .map(|(k, v)| {
                v.as_u64().and_then(|n| u32::try_from(n).ok()).ok_or_else(|| {
                    CliError::input(format!("{}/{k}", self.pointer(key)), "expected a non-negative integer")
                })
            })
            .collect()
    }

    /// Elements of an array field, each with its own pointer.
    pub fn items(&self, key: &str) -> CliResult<Vec<(String, &'a Value)>> {
        Ok(self.array(key)?.iter().enumerate().map(|(k, v)| (format!("{}/{k}", self.pointer(key)), v)).collect())
    }
}

pub fn as_fields<'a>(pointer: &str, v: &'a Value) -> CliResult<Fields<'a>> {
    let obj = v.as_object().ok_or_else(|| CliError::input(pointer, "expected an object"))?;
    Ok(Fields::new(obj, pointer.to_string()))
}

pub fn max_degree_from_env() -> CliResult<u32> {
    match std::env::var("RESIDUA_MAX_DEGREE") {
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::input("", format!("RESIDUA_MAX_DEGREE must be a non-negative integer, got `{s}`"))),
    }
}

/// Parsing context for one job: the ring plus the degree cap.
pub struct Ctx<F: Field> {
    pub ring: RingRef<F>,
    pub max_degree: u32,
}

impl<F: Field> Ctx<F> {
    pub fn poly_at(&self, pointer: &str, s: &str) -> CliResult<Polynomial<F>> {
        let p = parse_poly(&self.ring, s).map_err(|e| match e {
            Error::Parse { offset, message } => CliError::input(pointer, format!("{message} (at offset {offset} in `{s}`)")),
            other => CliError::input(pointer, other.to_string()),
        })?;
        let deg = p.total_degree().unwrap_or(0);
        if deg > self.max_degree {
            return Err(CliError::Domain(Error::DegreeLimit { limit: self.max_degree, degree: deg }));
        }
        Ok(p)
    }

    pub fn poly(&self, fields: &Fields<'_>, key: &str) -> CliResult<Polynomial<F>> {
        self.poly_at(&fields.pointer(key), fields.str(key)?)
    }

    pub fn polys(&self, fields: &Fields<'_>, key: &str) -> CliResult<Vec<Polynomial<F>>> {
        fields
            .items(key)?
            .into_iter()
            .map(|(ptr, v)| {
                let s = v.as_str().ok_or_else(|| CliError::input(ptr.clone(), "expected a string"))?;
                self.poly_at(&ptr, s)
            })
            .collect()
    }

    pub fn var_at(&self, pointer: &str, name: &str) -> CliResult<usize> {
        self.ring
            .var_index(name.trim())
            .ok_or_else(|| CliError::input(pointer, format!("`{name}` is not a variable of the ring")))
    }
}

/// The ring of a payload: the `ring` field, or `Q[...]` over the
/// identifiers that occur in its strings, in order of appearance.
pub fn ring_spec(fields: &Fields<'_>) -> CliResult<RingSpec> {
    match fields.opt_str("ring")? {
        Some(s) => {
            let spec = parse_ring_spec(s).map_err(|e| fields.err("ring", e.to_string()))?;
            if spec.vars.is_empty() {
                return Err(fields.err("ring", "a ring needs at least one variable"));
            }
            for (k, v) in spec.vars.iter().enumerate() {
                if !is_identifier(v) || spec.vars[..k].contains(v) {
                    return Err(fields.err("ring", format!("bad or repeated variable `{v}`")));
                }
            }
            Ok(spec)
        }
        None => {
            let mut vars = Vec::new();
            for (key, v) in fields.obj {
                if !matches!(key.as_str(), "ring" | "check" | "order" | "suite" | "suites") {
                    collect_identifiers(v, &mut vars);
                }
            }
            if vars.is_empty() {
                return Err(fields.err("ring", "missing field (no variables to infer a ring from)"));
            }
            Ok(RingSpec { field: CoefField::Rationals, vars })
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn collect_identifiers(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => {
            let bytes = s.as_bytes();
            let mut k = 0;
            while k < bytes.len() {
                let c = bytes[k];
                if c.is_ascii_alphabetic() || c == b'_' {
                    let start = k;
                    while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                        k += 1;
                    }
                    let id = &s[start..k];
                    if !out.iter().any(|o| o == id) {
                        out.push(id.to_string());
                    }
                } else if c.is_ascii_digit() {
                    while k < bytes.len() && bytes[k].is_ascii_alphanumeric() {
                        k += 1;
                    }
                } else {
                    k += 1;
                }
            }
        }
        Value::Array(items) => items.iter().for_each(|i| collect_identifiers(i, out)),
        Value::Object(map) => {
            for (key, i) in map {
                if !matches!(key.as_str(), "assert_regular" | "regularity") {
                    collect_identifiers(i, out);
                }
            }
        }
        _ => {}
    }
}

pub fn make_ring<F: Field>(spec: &RingSpec, ctx: F::Ctx) -> CliResult<RingRef<F>> {
    Ring::new(&spec.vars, ctx).map_err(|e| CliError::input("/ring", e.to_string()))
}
