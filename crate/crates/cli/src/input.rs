//! Reading polynomials, vectors and rings from command-line arguments.

use std::path::Path;

use affaut::autgroup::TruncPoly;
use affaut::rings::{AnyElem, AnyRing, Ring, RingDescriptor};
use affaut::Error;
use serde_json::Value;

use crate::args::Cli;
use crate::Failure;

/// The argument itself, or the contents of the file it names.
pub fn read_source(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

/// Parses text that looks like JSON; `None` for anything else.
pub fn as_json(text: &str) -> Result<Option<Value>, Failure> {
    let t = text.trim_start();
    if !(t.starts_with('{') || t.starts_with('[')) {
        return Ok(None);
    }
    serde_json::from_str(t).map(Some).map_err(|e| Error::Parse(format!("invalid JSON: {e}")).into())
}

pub fn read_json(arg: &str) -> Result<Value, Failure> {
    let text = read_source(arg)?;
    as_json(&text)?.ok_or_else(|| Error::Parse(format!("{arg} is not a JSON document")).into())
}

/// The ring from `--ring`, else the first ring descriptor embedded in one
/// of the polynomial arguments.
pub fn resolve_ring(cli: &Cli, polys: &[&str]) -> Result<AnyRing, Failure> {
    if let Some(flag) = &cli.ring {
        return Ok(AnyRing::parse_flag(flag)?);
    }
    for arg in polys {
        if let Some(Value::Object(o)) = as_json(&read_source(arg)?)? {
            if let Some(d) = o.get("ring") {
                let d: RingDescriptor =
                    serde_json::from_value(d.clone()).map_err(|e| Error::Parse(format!("ring descriptor: {e}")))?;
                return Ok(AnyRing::from_descriptor(&d)?);
            }
        }
    }
    Err(Failure::Usage("--ring is required unless an input carries its ring".into()))
}

pub fn require_ring(cli: &Cli) -> Result<AnyRing, Failure> {
    resolve_ring(cli, &[])
}

/// Names other than `T` in polynomial expressions: the generators of a
/// symbolic ring, and `q`.
fn lookup(ring: &AnyRing, name: &str) -> Option<AnyElem> {
    match ring {
        AnyRing::Symbolic(s) => s.gen(name).ok().map(AnyElem::Symbolic),
        _ if name == "q" => ring.q().ok(),
        _ => None,
    }
}

pub fn poly(ring: &AnyRing, arg: &str) -> Result<TruncPoly<AnyRing>, Failure> {
    let text = read_source(arg)?;
    match as_json(&text)? {
        Some(v) => Ok(TruncPoly::from_json_in(ring, &v)?),
        None => Ok(TruncPoly::parse_in(ring, text.trim(), &|n| lookup(ring, n))?),
    }
}

/// Vector components from JSON (`[...]` or `{"components": [...]}`) or a
/// comma-separated list.
pub fn components<R: Ring>(ring: &R, arg: &str) -> Result<Vec<R::Elem>, Failure> {
    let text = read_source(arg)?;
    let values: Vec<Value> = match as_json(&text)? {
        Some(Value::Array(a)) => a,
        Some(Value::Object(o)) => o
            .get("components")
            .and_then(Value::as_array)
            .cloned()
            .ok_or_else(|| Error::Parse("expected a \"components\" list".into()))?,
        Some(_) => return Err(Error::Parse("expected a list of components".into()).into()),
        None => text.split(',').map(|s| Value::String(s.trim().to_string())).collect(),
    };
    Ok(values.iter().map(|v| ring.elem_from_json(v)).collect::<affaut::Result<Vec<_>>>()?)
}
