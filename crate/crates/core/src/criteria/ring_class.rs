use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Environment variable naming a ring class table file.
pub const TABLE_ENV: &str = "DIOPHANTUS_TABLE";

const DEFAULT_TABLE: &str = include_str!("../../data/ring_class.txt");

/// A monic polynomial over Z whose splitting field is the ring class field of
/// Z[sqrt(-d)] (over Q(sqrt(-d))).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingClassEntry {
    pub d: u64,
    /// Coefficients c0, c1, ..., ck of sum c_i x^i.
    pub poly: Vec<i64>,
    /// Where the record came from: "default" or a file path.
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct RingClassTable {
    entries: BTreeMap<u64, RingClassEntry>,
}

impl RingClassTable {
    /// Parse `d c0 c1 ... ck` records; `#` starts a comment.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |msg: String| Error::TableParse { line, msg };
            let mut fields = body.split_whitespace();
            let d: u64 = fields
                .next()
                .unwrap()
                .parse()
                .map_err(|e| err(format!("bad d: {e}")))?;
            let poly = fields
                .map(|f| f.parse::<i64>().map_err(|e| err(format!("bad coefficient `{f}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if poly.len() < 3 {
                return Err(err("polynomial must have degree at least 2".into()));
            }
            if poly.last() != Some(&1) {
                return Err(err("polynomial must be monic".into()));
            }
            if d == 0 {
                return Err(err("d must be positive".into()));
            }
            entries.insert(
                d,
                RingClassEntry {
                    d,
                    poly,
                    source: source.to_string(),
                },
            );
        }
        Ok(RingClassTable { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::BadInput(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// The shipped table.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_TABLE, "default").expect("shipped table parses")
    }

    /// An explicit path wins, then the environment variable, then the
    /// shipped table.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        if let Some(p) = path {
            return Self::from_file(p);
        }
        match std::env::var_os(TABLE_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::builtin()),
        }
    }

    pub fn get(&self, d: u64) -> Option<&RingClassEntry> {
        self.entries.get(&d)
    }

    pub fn entries(&self) -> impl Iterator<Item = &RingClassEntry> {
        self.entries.values()
    }
}
