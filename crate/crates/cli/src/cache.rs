//! Content-addressed result cache: one immutable JSON file per request.
//!
//! ```text
//! <dir>/<sha256 of request>.json
//! {"engine": "...", "request": "...", "created": <unix seconds>, "payload": <document>}
//! ```

use crate::output::Document;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Canonical request text: one `key=value` line per parameter, sorted, after
/// the engine version and subcommand.
#[derive(Clone, Debug)]
pub struct Request {
    pub command: String,
    pub params: Vec<(String, String)>,
}

impl Request {
    pub fn new(command: &str) -> Self {
        Request { command: command.into(), params: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn canonical(&self) -> String {
        let mut params = self.params.clone();
        params.sort();
        let mut s = format!("opbar {}\n{}\n", opbar::VERSION, self.command);
        for (k, v) in params {
            s.push_str(&format!("{k}={v}\n"));
        }
        s
    }

    pub fn key(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical().as_bytes()))
    }
}

/// Hash of a file's bytes, so that requests naming files are keyed by content.
pub fn file_digest(path: &Path) -> std::io::Result<String> {
    Ok(format!("{:x}", Sha256::digest(std::fs::read(path)?)))
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    fn path(&self, req: &Request) -> PathBuf {
        self.dir.join(format!("{}.json", req.key()))
    }

    /// A stored document; unreadable or mismatched entries count as misses.
    pub fn get(&self, req: &Request) -> Option<Document> {
        let text = std::fs::read_to_string(self.path(req)).ok()?;
        let v: serde_json::Value = serde_json::from_str(&text).ok()?;
        if v.get("request")?.as_str()? != req.canonical() {
            return None;
        }
        Document::from_json(v.get("payload")?)
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn put(&self, req: &Request, doc: &Document) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let entry = json!({
            "engine": opbar::VERSION,
            "request": req.canonical(),
            "created": created,
            "payload": doc.to_json(),
        });
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.persist(self.path(req)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_ignore_parameter_order() {
        let a = Request::new("bar").param("arity", 3).param("ring", "Z");
        let b = Request::new("bar").param("ring", "Z").param("arity", 3);
        assert_eq!(a.key(), b.key());
        assert_ne!(a.key(), Request::new("bar").param("arity", 4).param("ring", "Z").key());
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().to_path_buf());
        let req = Request::new("demo").param("n", 2);
        assert!(cache.get(&req).is_none());
        let mut doc = Document::new("demo", &["x"]);
        doc.push(vec![json!(-3)]);
        cache.put(&req, &doc).unwrap();
        assert_eq!(cache.get(&req), Some(doc));
    }
}
