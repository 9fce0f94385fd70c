//! Line-based text format for symmetric sequences and their structures.
//!
//! ```text
//! # comment
//! structure operad          # symseq | operad | cooperad | <side>
//! name com
//! ring Z
//! max_arity 2
//! arity 1
//! generator 0 mu0           # degree label, in flat order
//! arity 2
//! generator 0 mu0
//! action 1                  # matrix of s_1 follows
//! matrix Z 1 1
//! 0 0 1
//! compose 2 1 1             # cocompose for cooperads, partial for right sides
//! matrix Z 1 1
//! 0 0 1
//! ```
//!
//! Left sides use `block 1,2|3` followed by a matrix. A module or comodule is
//! written after the operad or cooperad acting on it, in the same file.
//! Matrix entries are `row col value` with rationals as `p/q`; absent
//! structure maps are zero.

use super::module::{LeftKey, Side, SidedModule};
use super::operad::{Cooperad, Operad, PartialKey};
use super::symseq::SymSeq;
use super::OpalgError;
use crate::exactla::{ExactMatrix, GradedFreeModule, Ring, Q};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Debug, PartialEq)]
pub enum Structure {
    SymSeq(SymSeq),
    Operad(Operad),
    Cooperad(Cooperad),
    Module { module: SidedModule, over: Box<Structure> },
}

impl Structure {
    pub fn kind(&self) -> String {
        match self {
            Structure::SymSeq(_) => "symseq".into(),
            Structure::Operad(_) => "operad".into(),
            Structure::Cooperad(_) => "cooperad".into(),
            Structure::Module { module, .. } => module.side().to_string(),
        }
    }

    pub fn seq(&self) -> &SymSeq {
        match self {
            Structure::SymSeq(s) => s,
            Structure::Operad(o) => o.seq(),
            Structure::Cooperad(c) => c.seq(),
            Structure::Module { module, .. } => module.seq(),
        }
    }
}

fn write_matrix(out: &mut String, m: &ExactMatrix) {
    out.push_str(&m.export_text());
}

fn write_seq(out: &mut String, kind: &str, s: &SymSeq) {
    let _ = writeln!(out, "structure {kind}");
    let _ = writeln!(out, "name {}", s.name());
    let _ = writeln!(out, "ring {}", s.ring());
    let _ = writeln!(out, "max_arity {}", s.max_arity());
    for n in 1..=s.max_arity() {
        let _ = writeln!(out, "arity {n}");
        let module = s.module(n);
        for d in module.degrees() {
            for l in module.labels(d) {
                let _ = writeln!(out, "generator {d} {l}");
            }
        }
        for (i, t) in s.transpositions(n).iter().enumerate() {
            let _ = writeln!(out, "action {}", i + 1);
            write_matrix(out, t);
        }
    }
}

fn write_partials(out: &mut String, word: &str, maps: &BTreeMap<PartialKey, ExactMatrix>) {
    for ((m, a, n), f) in maps {
        let _ = writeln!(out, "{word} {m} {a} {n}");
        write_matrix(out, f);
    }
}

fn block_text(key: &LeftKey) -> String {
    key.iter().map(|b| b.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join("|")
}

pub fn save_string(s: &Structure) -> String {
    let mut out = String::new();
    match s {
        Structure::SymSeq(q) => write_seq(&mut out, "symseq", q),
        Structure::Operad(o) => {
            write_seq(&mut out, "operad", o.seq());
            write_partials(&mut out, "compose", o.compositions());
        }
        Structure::Cooperad(c) => {
            write_seq(&mut out, "cooperad", c.seq());
            write_partials(&mut out, "cocompose", c.cocompositions());
        }
        Structure::Module { module, over } => {
            out.push_str(&save_string(over));
            write_seq(&mut out, &module.side().to_string(), module.seq());
            write_partials(&mut out, "partial", module.partial_maps());
            for (key, f) in module.block_maps() {
                let _ = writeln!(out, "block {}", block_text(key));
                write_matrix(&mut out, f);
            }
        }
    }
    out
}

/// Writes atomically: a sibling temporary file is renamed into place.
pub fn save(s: &Structure, path: &Path) -> Result<(), OpalgError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, save_string(s))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Structure, OpalgError> {
    load_str(&std::fs::read_to_string(path)?)
}

struct Lines<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("");
                let t: Vec<&str> = l.split_whitespace().collect();
                (!t.is_empty()).then_some((i + 1, t))
            })
            .collect();
        Lines { items, pos: 0 }
    }

    fn peek(&self) -> Option<&(usize, Vec<&'a str>)> {
        self.items.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        let x = self.items.get(self.pos).cloned();
        self.pos += 1;
        x
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(0, |x| x.0)
    }

    fn expect(&mut self, word: &str, args: usize) -> Result<(usize, Vec<&'a str>), OpalgError> {
        match self.next() {
            Some((line, t)) if t[0] == word && t.len() == args + 1 => Ok((line, t)),
            Some((line, t)) => Err(perr(line, format!("expected `{word}` with {args} argument(s), found `{}`", t.join(" ")))),
            None => Err(perr(self.last_line(), format!("unexpected end of input, expected `{word}`"))),
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> OpalgError {
    OpalgError::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, OpalgError> {
    s.parse().map_err(|_| perr(line, format!("bad number `{s}`")))
}

fn read_matrix(lines: &mut Lines<'_>) -> Result<ExactMatrix, OpalgError> {
    let (line, h) = lines.expect("matrix", 3)?;
    let ring: Ring = h[1].parse().map_err(|_| perr(line, format!("bad ring `{}`", h[1])))?;
    let (rows, cols): (usize, usize) = (num(line, h[2])?, num(line, h[3])?);
    let mut entries = Vec::new();
    while let Some((l, t)) = lines.peek() {
        if t[0].parse::<usize>().is_err() {
            break;
        }
        let l = *l;
        if t.len() != 3 {
            return Err(perr(l, "matrix entry must be `row col value`"));
        }
        let (r, c): (usize, usize) = (num(l, t[0])?, num(l, t[1])?);
        let v: Q = num(l, t[2])?;
        if r >= rows || c >= cols {
            return Err(perr(l, format!("entry ({r}, {c}) outside a {rows}x{cols} matrix")));
        }
        entries.push((r, c, v));
        lines.next();
    }
    ExactMatrix::from_triplets(ring, rows, cols, entries).map_err(|e| perr(line, e.to_string()))
}

fn read_seq(lines: &mut Lines<'_>) -> Result<(String, SymSeq), OpalgError> {
    let (_, k) = lines.expect("structure", 1)?;
    let kind = k[1].to_string();
    let (_, n) = lines.expect("name", 1)?;
    let name = n[1].to_string();
    let (line, r) = lines.expect("ring", 1)?;
    let ring: Ring = r[1].parse().map_err(|_| perr(line, format!("bad ring `{}`", r[1])))?;
    let (line, m) = lines.expect("max_arity", 1)?;
    let max: usize = num(line, m[1])?;
    let mut modules = Vec::with_capacity(max);
    let mut ts = Vec::with_capacity(max);
    for arity in 1..=max {
        let (line, a) = lines.expect("arity", 1)?;
        if num::<usize>(line, a[1])? != arity {
            return Err(perr(line, format!("expected arity {arity}")));
        }
        let mut parts: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        let mut last = i64::MIN;
        while let Some((line, t)) = lines.peek() {
            if t[0] != "generator" {
                break;
            }
            let line = *line;
            if t.len() != 3 {
                return Err(perr(line, "generator needs a degree and a label"));
            }
            let d: i64 = num(line, t[1])?;
            if d < last {
                return Err(perr(line, "generators must be listed by ascending degree"));
            }
            last = d;
            parts.entry(d).or_default().push(t[2].to_string());
            lines.next();
        }
        modules.push(GradedFreeModule::from_parts(parts).map_err(|e| perr(line, e.to_string()))?);
        let mut acts = Vec::new();
        for i in 1..arity {
            let (line, a) = lines.expect("action", 1)?;
            if num::<usize>(line, a[1])? != i {
                return Err(perr(line, format!("expected action {i}")));
            }
            acts.push(read_matrix(lines)?);
        }
        ts.push(acts);
    }
    Ok((kind, SymSeq::new(name, ring, modules, ts)?))
}

fn read_partials(lines: &mut Lines<'_>, word: &str) -> Result<BTreeMap<PartialKey, ExactMatrix>, OpalgError> {
    let mut maps = BTreeMap::new();
    while let Some((line, t)) = lines.peek() {
        if t[0] != word {
            break;
        }
        let line = *line;
        if t.len() != 4 {
            return Err(perr(line, format!("`{word}` takes m a n")));
        }
        let key = (num(line, t[1])?, num(line, t[2])?, num(line, t[3])?);
        lines.next();
        maps.insert(key, read_matrix(lines)?);
    }
    Ok(maps)
}

fn read_blocks(lines: &mut Lines<'_>) -> Result<BTreeMap<LeftKey, ExactMatrix>, OpalgError> {
    let mut maps = BTreeMap::new();
    while let Some((line, t)) = lines.peek() {
        if t[0] != "block" {
            break;
        }
        let line = *line;
        if t.len() != 2 {
            return Err(perr(line, "`block` takes a partition like 1,3|2"));
        }
        let key: LeftKey = t[1]
            .split('|')
            .map(|b| b.split(',').map(|x| num::<u32>(line, x)).collect::<Result<Vec<u32>, _>>())
            .collect::<Result<_, _>>()?;
        lines.next();
        maps.insert(key, read_matrix(lines)?);
    }
    Ok(maps)
}

/// Parses and validates every structure in the text; returns the last one.
pub fn load_str(text: &str) -> Result<Structure, OpalgError> {
    let mut lines = Lines::new(text);
    let mut current: Option<Structure> = None;
    while lines.peek().is_some() {
        let start = lines.peek().map_or(0, |x| x.0);
        let (kind, seq) = read_seq(&mut lines)?;
        let next = match kind.as_str() {
            "symseq" => Structure::SymSeq(seq),
            "operad" => Structure::Operad(Operad::new(seq, read_partials(&mut lines, "compose")?)?),
            "cooperad" => Structure::Cooperad(Cooperad::new(seq, read_partials(&mut lines, "cocompose")?)?),
            other => {
                let side: Side = other.parse().map_err(|_| perr(start, format!("unknown structure kind `{other}`")))?;
                let partial = read_partials(&mut lines, "partial")?;
                let blocks = read_blocks(&mut lines)?;
                if side.is_left() && !partial.is_empty() || !side.is_left() && !blocks.is_empty() {
                    return Err(perr(start, format!("{side} given maps of the other side")));
                }
                let over = current.take().ok_or_else(|| perr(start, "a module must follow the structure acting on it"))?;
                let module = match (side, &over) {
                    (Side::LeftModule, Structure::Operad(o)) => SidedModule::left_module(seq, blocks, o)?,
                    (Side::RightModule, Structure::Operad(o)) => SidedModule::right_module(seq, partial, o)?,
                    (Side::LeftComodule, Structure::Cooperad(c)) => SidedModule::left_comodule(seq, blocks, c)?,
                    (Side::RightComodule, Structure::Cooperad(c)) => SidedModule::right_comodule(seq, partial, c)?,
                    _ => return Err(perr(start, format!("{side} cannot act through a {}", over.kind()))),
                };
                Structure::Module { module, over: Box::new(over) }
            }
        };
        if let Some((line, t)) = lines.peek() {
            if t[0] != "structure" {
                return Err(perr(*line, format!("unexpected `{}`", t[0])));
            }
        }
        current = Some(next);
    }
    current.ok_or_else(|| perr(0, "empty file"))
}
