//! On-disk result cache: a JSON-lines file holding lambda values and
//! d-invariant tables keyed by (p, q).
//!
//! The first line is a schema header (`{"schema":1}`); every following line
//! is one entry. Entries are verified on load — a cached d-table must satisfy
//! `sum_i d(p,q,i) = p * lambda(p,q)` against its cached lambda, and a bare
//! lambda must match a recomputation — and anything that fails the check is
//! silently discarded so a stale or corrupted cache can never change results.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use lenslab_core::{lambda_rec, Rational};

pub const SCHEMA: u32 = 1;
pub const ENV_VAR: &str = "LENSLAB_CACHE";

#[derive(Serialize, Deserialize)]
struct Header {
    schema: u32,
}

#[derive(Clone, Serialize, Deserialize)]
pub struct Entry {
    pub p: i64,
    pub q: i64,
    pub lambda: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Rational>>,
}

impl Entry {
    /// Internal consistency: the d-table (if present) must tie to lambda by
    /// `sum d = p * lambda`; a bare lambda is checked by recomputation
    /// (cheap — Euclid-chain length only).
    fn verify(&self) -> bool {
        match &self.d {
            Some(values) => {
                values.len() == self.p as usize
                    && values.iter().cloned().sum::<Rational>()
                        == Rational::from_int(self.p) * self.lambda.clone()
            }
            None => lambda_rec(self.p, self.q).map(|v| v == self.lambda).unwrap_or(false),
        }
    }
}

/// In-memory view of the cache file; absent or unreadable files start empty.
pub struct Cache {
    path: PathBuf,
    entries: BTreeMap<(i64, i64), Entry>,
    dirty: bool,
}

/// The cache path for this invocation: the flag wins over `LENSLAB_CACHE`.
pub fn resolve_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(ENV_VAR).map(PathBuf::from))
}

impl Cache {
    pub fn open(path: &Path) -> Self {
        let mut cache =
            Cache { path: path.to_path_buf(), entries: BTreeMap::new(), dirty: false };
        let Ok(text) = fs::read_to_string(path) else {
            return cache;
        };
        let mut lines = text.lines();
        match lines.next().and_then(|l| serde_json::from_str::<Header>(l).ok()) {
            Some(h) if h.schema == SCHEMA => {}
            _ => return cache, // wrong or missing header: ignore the file
        }
        for line in lines {
            let Ok(entry) = serde_json::from_str::<Entry>(line) else {
                cache.dirty = true; // drop unparsable lines on save
                continue;
            };
            if entry.verify() {
                cache.entries.insert((entry.p, entry.q), entry);
            } else {
                cache.dirty = true;
            }
        }
        cache
    }

    pub fn get(&self, p: i64, q: i64) -> Option<&Entry> {
        self.entries.get(&(p, q))
    }

    pub fn put(&mut self, entry: Entry) {
        let existing = self.entries.get(&(entry.p, entry.q));
        // never downgrade an entry that already carries a d-table
        if existing.is_some_and(|e| e.d.is_some() && entry.d.is_none()) {
            return;
        }
        self.entries.insert((entry.p, entry.q), entry);
        self.dirty = true;
    }

    /// Rewrite the file if anything changed. Ordering is by (p, q), so the
    /// file contents are deterministic for a given set of entries.
    pub fn save(&self) -> std::io::Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let mut out = Vec::new();
        serde_json::to_writer(&mut out, &Header { schema: SCHEMA })?;
        out.push(b'\n');
        for entry in self.entries.values() {
            serde_json::to_writer(&mut out, entry)?;
            out.push(b'\n');
        }
        let mut file = fs::File::create(&self.path)?;
        file.write_all(&out)
    }
}
