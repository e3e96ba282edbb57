//! The JSON problem format.
//!
//! ```json
//! {
//!   "name": "CONIFOLD",
//!   "rank": 1,
//!   "characters": [[1], [1], [-1], [-1]],
//!   "omega_plus": ["1"],
//!   "omega_minus": ["-1"],
//!   "options": { "k_range": [-2, 4], "specializations": 5, "prime_bits": 61, "seed": 1 }
//! }
//! ```
//!
//! Rationals are JSON integers or strings `"a"` / `"a/b"`. Everything except
//! `name` and `options` is required; unknown keys are rejected.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, &self.field) {
            (Some(l), Some(n)) => write!(f, "line {l}, field `{n}`: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(n)) => write!(f, "field `{n}`: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Inclusive; defaults to `-2..=N+2` once `N` is known.
    pub k_range: Option<(i64, i64)>,
    pub specializations: usize,
    pub prime_bits: u32,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            k_range: None,
            specializations: 5,
            prime_bits: 61,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub name: Option<String>,
    pub rank: usize,
    pub characters: Vec<Vec<i64>>,
    pub omega_plus: Vec<BigRational>,
    pub omega_minus: Vec<BigRational>,
    pub options: RunOptions,
}

const TOP_KEYS: [&str; 6] = [
    "name",
    "rank",
    "characters",
    "omega_plus",
    "omega_minus",
    "options",
];
const OPTION_KEYS: [&str; 4] = ["k_range", "specializations", "prime_bits", "seed"];

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    /// Line of the first occurrence of the quoted key, as a best effort.
    fn line_of(&self, field: &str) -> Option<usize> {
        let key = field.rsplit('.').next().unwrap_or(field);
        let key = key.split('[').next().unwrap_or(key);
        let pos = self.text.find(&format!("\"{key}\""))?;
        Some(self.text[..pos].matches('\n').count() + 1)
    }

    fn err(&self, field: &str, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line_of(field),
            field: Some(field.to_string()),
            message: message.into(),
        }
    }

    fn int(&self, field: &str, v: &Value) -> Result<i64, ParseError> {
        v.as_i64()
            .ok_or_else(|| self.err(field, format!("expected an integer, got {v}")))
    }

    fn rational(&self, field: &str, v: &Value) -> Result<BigRational, ParseError> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|i| BigRational::from_integer(i.into()))
                .ok_or_else(|| self.err(field, format!("expected an integer or \"a/b\", got {n}"))),
            Value::String(s) => parse_rational(s).map_err(|m| self.err(field, m)),
            other => Err(self.err(field, format!("expected a rational, got {other}"))),
        }
    }

    fn rational_vector(&self, field: &str, v: &Value) -> Result<Vec<BigRational>, ParseError> {
        let arr = v
            .as_array()
            .ok_or_else(|| self.err(field, "expected an array of rationals"))?;
        arr.iter()
            .enumerate()
            .map(|(i, x)| self.rational(&format!("{field}[{i}]"), x))
            .collect()
    }

    fn check_keys(
        &self,
        obj: &Map<String, Value>,
        allowed: &[&str],
        prefix: &str,
    ) -> Result<(), ParseError> {
        match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(self.err(&format!("{prefix}{k}"), "unknown field")),
            None => Ok(()),
        }
    }
}

/// `"a"` or `"a/b"` with `b ≠ 0`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("malformed rational \"{s}\""))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("malformed rational \"{s}\""))?;
    if den.is_zero() {
        return Err(format!("malformed rational \"{s}\": zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

pub fn parse(text: &str) -> Result<ProblemFile, ParseError> {
    let ctx = Ctx { text };
    let root: Value = serde_json::from_str(text).map_err(|e| ParseError {
        line: Some(e.line()),
        field: None,
        message: e.to_string(),
    })?;
    let obj = root.as_object().ok_or_else(|| ParseError {
        line: Some(1),
        field: None,
        message: "expected a JSON object at the top level".into(),
    })?;
    ctx.check_keys(obj, &TOP_KEYS, "")?;
    let get = |k: &str| {
        obj.get(k).ok_or_else(|| ParseError {
            line: None,
            field: Some(k.to_string()),
            message: "missing required field".into(),
        })
    };

    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(v) => return Err(ctx.err("name", format!("expected a string, got {v}"))),
    };
    let rank = ctx.int("rank", get("rank")?)?;
    if rank < 1 {
        return Err(ctx.err("rank", "rank must be positive"));
    }
    let rank = rank as usize;

    let rows = get("characters")?
        .as_array()
        .ok_or_else(|| ctx.err("characters", "expected an array of integer rows"))?;
    let mut characters = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let field = format!("characters[{i}]");
        let row = row
            .as_array()
            .ok_or_else(|| ctx.err(&field, "expected an array of integers"))?;
        if row.len() != rank {
            return Err(ctx.err(
                &field,
                format!("expected {rank} entries, got {}", row.len()),
            ));
        }
        characters.push(
            row.iter()
                .enumerate()
                .map(|(j, v)| ctx.int(&format!("{field}[{j}]"), v))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if characters.is_empty() {
        return Err(ctx.err("characters", "at least one character is required"));
    }

    let omega_plus = ctx.rational_vector("omega_plus", get("omega_plus")?)?;
    let omega_minus = ctx.rational_vector("omega_minus", get("omega_minus")?)?;
    for (field, w) in [("omega_plus", &omega_plus), ("omega_minus", &omega_minus)] {
        if w.len() != rank {
            return Err(ctx.err(field, format!("expected {rank} entries, got {}", w.len())));
        }
    }

    let mut options = RunOptions::default();
    if let Some(v) = obj.get("options") {
        let o = v
            .as_object()
            .ok_or_else(|| ctx.err("options", "expected an object"))?;
        ctx.check_keys(o, &OPTION_KEYS, "options.")?;
        if let Some(v) = o.get("k_range") {
            let pair = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| ctx.err("options.k_range", "expected [low, high]"))?;
            let lo = ctx.int("options.k_range", &pair[0])?;
            let hi = ctx.int("options.k_range", &pair[1])?;
            if lo > hi {
                return Err(ctx.err("options.k_range", "low exceeds high"));
            }
            options.k_range = Some((lo, hi));
        }
        if let Some(v) = o.get("specializations") {
            let n = ctx.int("options.specializations", v)?;
            if n < 1 {
                return Err(ctx.err("options.specializations", "must be at least 1"));
            }
            options.specializations = n as usize;
        }
        if let Some(v) = o.get("prime_bits") {
            let b = ctx.int("options.prime_bits", v)?;
            options.prime_bits =
                check_prime_bits(b).map_err(|m| ctx.err("options.prime_bits", m))?;
        }
        if let Some(v) = o.get("seed") {
            options.seed = v
                .as_u64()
                .ok_or_else(|| ctx.err("options.seed", "expected a non-negative integer"))?;
        }
    }

    Ok(ProblemFile {
        name,
        rank,
        characters,
        omega_plus,
        omega_minus,
        options,
    })
}

pub fn check_prime_bits(b: i64) -> Result<u32, String> {
    if (8..=62).contains(&b) {
        Ok(b as u32)
    } else {
        Err(format!("prime size must lie in 8..=62 bits, got {b}"))
    }
}

pub fn parse_file(path: &Path) -> Result<ProblemFile, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError {
        line: None,
        field: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse(&text)
}

fn rational_json(q: &BigRational) -> Value {
    match (q.is_integer(), q.numer().to_i64()) {
        (true, Some(i)) => json!(i),
        _ => json!(q.to_string()),
    }
}

impl ProblemFile {
    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "unnamed".into())
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({});
        let obj = v.as_object_mut().unwrap();
        if let Some(n) = &self.name {
            obj.insert("name".into(), json!(n));
        }
        obj.insert("rank".into(), json!(self.rank));
        obj.insert("characters".into(), json!(self.characters));
        obj.insert(
            "omega_plus".into(),
            Value::Array(self.omega_plus.iter().map(rational_json).collect()),
        );
        obj.insert(
            "omega_minus".into(),
            Value::Array(self.omega_minus.iter().map(rational_json).collect()),
        );
        let mut o = Map::new();
        if let Some((lo, hi)) = self.options.k_range {
            o.insert("k_range".into(), json!([lo, hi]));
        }
        o.insert(
            "specializations".into(),
            json!(self.options.specializations),
        );
        o.insert("prime_bits".into(), json!(self.options.prime_bits));
        o.insert("seed".into(), json!(self.options.seed));
        obj.insert("options".into(), Value::Object(o));
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }
}
