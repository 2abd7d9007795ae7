//! Inline mini-syntax and file inputs.
//!
//! φ: `power:P`, inline JSON, or a path to a JSON φ-spec.
//! f: `chi:A..B`, `V@[A,B)` joined by `+`, inline JSON, or a `.json`/`.csv` path.

use std::fs;
use std::path::Path;

use orliczlab::{Error, PhiSpec, Result, StepFunction};

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
}

fn number(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: '{s}' is not a number")))
}

pub fn phi_spec(arg: &str) -> Result<PhiSpec> {
    if let Some(p) = arg.strip_prefix("power:") {
        return Ok(PhiSpec::Power { p: number(p, "power exponent")? });
    }
    if arg.trim_start().starts_with('{') {
        return PhiSpec::from_json(arg);
    }
    if Path::new(arg).exists() {
        return PhiSpec::from_json(&read(arg)?).map_err(|e| Error::Parse(format!("{arg}: {e}")));
    }
    Err(Error::Parse(format!("'{arg}' is neither power:P, inline JSON, nor an existing file")))
}

/// One `V@[A,B)` or `chi:A..B` term as `(a, b, value)`.
fn interval(term: &str) -> Result<(f64, f64, f64)> {
    let term = term.trim();
    if let Some(r) = term.strip_prefix("chi:") {
        let (a, b) = r
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("'{term}': expected chi:A..B")))?;
        return Ok((number(a, term)?, number(b, term)?, 1.0));
    }
    let (v, r) = term
        .split_once('@')
        .ok_or_else(|| Error::Parse(format!("'{term}': expected V@[A,B) or chi:A..B")))?;
    let body = r
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("'{term}': interval must read [A,B)")))?;
    let (a, b) = body
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("'{term}': interval must read [A,B)")))?;
    Ok((number(a, term)?, number(b, term)?, number(v, term)?))
}

pub fn step_function(arg: &str) -> Result<StepFunction> {
    if arg.trim_start().starts_with('{') {
        return step_json(arg, "inline step function");
    }
    if arg.ends_with(".json") || arg.ends_with(".csv") {
        let text = read(arg)?;
        return if arg.ends_with(".json") {
            step_json(&text, arg)
        } else {
            StepFunction::from_csv(text.as_bytes()).map_err(|e| Error::Parse(format!("{arg}: {e}")))
        };
    }
    let terms = arg.split('+').map(interval).collect::<Result<Vec<_>>>()?;
    StepFunction::from_intervals(&terms)
}

fn step_json(text: &str, origin: &str) -> Result<StepFunction> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("{origin} at line {} column {}: {e}", e.line(), e.column()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mini_syntax() {
        assert_eq!(phi_spec("power:2").unwrap(), PhiSpec::Power { p: 2.0 });
        let f = step_function("3@[0,4)").unwrap();
        assert_eq!(f.cells(), &[(4.0, 3.0)]);
        let g = step_function("chi:0..5").unwrap();
        assert_eq!(g.cells(), &[(5.0, 1.0)]);
        let h = step_function("2@[0,1) + 1@[1,3)").unwrap();
        assert_eq!(h.cells(), &[(1.0, 2.0), (2.0, 1.0)]);
        assert!(step_function("3@[0,4]").is_err());
        assert!(phi_spec("cube").is_err());
    }
}
