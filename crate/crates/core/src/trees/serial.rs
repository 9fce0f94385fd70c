use super::{Subtree, TreeError};
use std::fmt::Write as _;

pub(crate) fn serialize(root: &[Subtree]) -> String {
    fn node(s: &Subtree, out: &mut String) {
        match s {
            Subtree::Leaf(l) => {
                out.push('[');
                for (i, x) in l.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{x}");
                }
                out.push(']');
            }
            Subtree::Vertex(c) => {
                out.push('(');
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    node(x, out);
                }
                out.push(')');
            }
        }
    }
    let mut out = String::from("{");
    for (i, s) in root.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        node(s, &mut out);
    }
    out.push('}');
    out
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> TreeError {
        TreeError::Parse(format!("{what} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), TreeError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn list<T>(&mut self, close: u8, mut item: impl FnMut(&mut Self) -> Result<T, TreeError>) -> Result<Vec<T>, TreeError> {
        let mut out = vec![item(self)?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            out.push(item(self)?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn label(&mut self) -> Result<u32, TreeError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        match text.parse::<u32>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(self.err("expected a positive label")),
        }
    }

    fn node(&mut self) -> Result<Subtree, TreeError> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                Ok(Subtree::Leaf(self.list(b']', Self::label)?))
            }
            Some(b'(') => {
                self.pos += 1;
                let kids = self.list(b')', Self::node)?;
                if kids.len() < 2 {
                    return Err(self.err("vertex needs at least two children"));
                }
                Ok(Subtree::Vertex(kids))
            }
            _ => Err(self.err("expected `[` or `(`")),
        }
    }
}

pub(crate) fn parse(s: &str) -> Result<Vec<Subtree>, TreeError> {
    let mut p = Parser { bytes: s.as_bytes(), pos: 0 };
    p.expect(b'{')?;
    let root = p.list(b'}', Parser::node)?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(root)
}
