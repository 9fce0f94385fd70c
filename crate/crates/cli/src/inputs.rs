//! Named or file-backed inputs.
//!
//! A coalgebra file lists generators, then the reduced coproduct as a matrix
//! from the generators to their tensor square. Generators are indexed by
//! degree, then by listing order; pairs are ordered lexicographically.
//!
//! ```text
//! name torus
//! generator 1 a
//! generator 1 b
//! generator 2 c
//! coproduct
//! matrix Z 9 3
//! 1 2 1
//! 3 2 -1
//! ```

use crate::CliError;
use opbar::exactla::{ExactMatrix, GradedFreeModule, Ring};
use opbar::opalg::{ass, coalgebra_comodule, com, load, sphere_module, Cooperad, Operad, SidedModule, Structure, SymSeq};
use std::path::Path;

fn load_file(input: &str) -> Result<Structure, CliError> {
    let path = Path::new(input);
    if !path.exists() {
        return Err(CliError::Usage(format!("`{input}` is neither a built-in name nor a file")));
    }
    Ok(load(path)?)
}

/// `com`, `ass`, or an operad file.
pub fn operad(input: &str, ring: Ring, max_arity: usize) -> Result<Operad, CliError> {
    match input {
        "com" => Ok(com(ring, max_arity)?),
        "ass" => Ok(ass(ring, max_arity)?),
        _ => match load_file(input)? {
            Structure::Operad(p) => Ok(p.with_ring(ring)?),
            other => Err(CliError::Usage(format!("`{input}` holds a {}, not an operad", other.kind()))),
        },
    }
}

/// `cocom`, `coass`, or a cooperad file.
pub fn cooperad(input: &str, ring: Ring, max_arity: usize) -> Result<Cooperad, CliError> {
    match input {
        "cocom" => Ok(com(ring, max_arity)?.dual()),
        "coass" => Ok(ass(ring, max_arity)?.dual()),
        _ => match load_file(input)? {
            Structure::Cooperad(q) => Ok(q.with_ring(ring)?),
            other => Err(CliError::Usage(format!("`{input}` holds a {}, not a cooperad", other.kind()))),
        },
    }
}

/// A built-in operad, `sphere:R`, or any structure file, as a symmetric sequence.
pub fn sequence(input: &str, ring: Ring, max_arity: usize) -> Result<SymSeq, CliError> {
    if let Some(r) = input.strip_prefix("sphere:") {
        let r: i64 = r.parse().map_err(|_| CliError::Usage(format!("bad sphere degree in `{input}`")))?;
        return Ok(sphere_module(r, ring, max_arity)?.seq().clone());
    }
    match input {
        "com" | "ass" => Ok(operad(input, ring, max_arity)?.seq().clone()),
        _ => Ok(load_file(input)?.seq().with_ring(ring)?),
    }
}

/// Reads a coalgebra file and builds its left comodule over the cocommutative cooperad.
pub fn coalgebra(path: &Path, max_arity: usize) -> Result<SidedModule, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let bad = |line: usize, msg: &str| CliError::Input(format!("{}:{line}: {msg}", path.display()));
    let mut name = path.file_stem().map_or("coalgebra".to_string(), |s| s.to_string_lossy().into_owned());
    let mut module = GradedFreeModule::new();
    let mut lines = text.lines().enumerate();
    let mut matrix = None;
    while let Some((i, raw)) = lines.next() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["name", n] => name = n.to_string(),
            ["generator", d, label] => {
                let d: i64 = d.parse().map_err(|_| bad(i + 1, "degree must be an integer"))?;
                module.push(d, label.to_string());
            }
            ["coproduct"] => {
                let rest: Vec<&str> = lines.by_ref().map(|(_, l)| l.split('#').next().unwrap_or("")).collect();
                matrix = Some(ExactMatrix::parse_text(&rest.join("\n")).map_err(|e| bad(i + 2, &e.to_string()))?);
            }
            _ => return Err(bad(i + 1, &format!("unexpected `{line}`"))),
        }
    }
    let delta = matrix.ok_or_else(|| bad(text.lines().count(), "missing coproduct"))?;
    Ok(coalgebra_comodule(&name, &module, &delta, max_arity)?)
}
