//! Append-only JSON-lines persistence for census runs.
//!
//! Records go one per line into the output file. A sidecar
//! `<out>.meta.json` holds the run key (schema version, range, flags); a
//! resumed run must present the same key or it is refused.

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::census::{CensusOptions, CensusRecord, SCHEMA_VERSION};
use crate::error::{EsError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreMeta {
    pub v: u32,
    pub lo: u64,
    pub hi: u64,
    pub flags: CensusOptions,
}

impl StoreMeta {
    pub fn new(lo: u64, hi: u64, flags: CensusOptions) -> Self {
        // shard count does not affect content
        let flags = CensusOptions { shards: 0, ..flags };
        StoreMeta { v: SCHEMA_VERSION, lo, hi, flags }
    }
}

pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn io_err(path: &Path, err: std::io::Error) -> EsError {
    EsError::Store(format!("{}: {err}", path.display()))
}

pub struct CensusStore {
    path: PathBuf,
}

impl CensusStore {
    /// Starts a fresh store, truncating any previous output.
    pub fn create(path: &Path, meta: &StoreMeta) -> Result<Self> {
        File::create(path).map_err(|e| io_err(path, e))?;
        let mp = meta_path(path);
        let json = serde_json::to_string(meta).expect("meta serializes");
        fs::write(&mp, json + "\n").map_err(|e| io_err(&mp, e))?;
        Ok(CensusStore { path: path.to_owned() })
    }

    /// Reopens an existing store for the same run key. Returns the store and
    /// the last prime already recorded, if any. A torn final line from an
    /// interrupted write is dropped.
    pub fn resume(path: &Path, meta: &StoreMeta) -> Result<(Self, Option<u64>)> {
        let mp = meta_path(path);
        let raw = fs::read_to_string(&mp).map_err(|e| io_err(&mp, e))?;
        let stored: StoreMeta = serde_json::from_str(&raw)
            .map_err(|e| EsError::StoreMismatch(format!("{}: {e}", mp.display())))?;
        if &stored != meta {
            return Err(EsError::StoreMismatch(format!(
                "{} was written by a different run (stored {:?}, requested {:?})",
                path.display(),
                stored,
                meta
            )));
        }
        let mut content = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        if !content.is_empty() && !content.ends_with('\n') {
            let keep = content.rfind('\n').map_or(0, |i| i + 1);
            content.truncate(keep);
            fs::write(path, &content).map_err(|e| io_err(path, e))?;
        }
        let records = parse_records(&content, path)?;
        let last = records.last().map(|r| r.p);
        Ok((CensusStore { path: path.to_owned() }, last))
    }

    pub fn append(&self, records: &[CensusRecord]) -> Result<()> {
        let file = OpenOptions::new()
            .append(true)
            .open(&self.path)
            .map_err(|e| io_err(&self.path, e))?;
        let mut w = BufWriter::new(file);
        for r in records {
            let line = serde_json::to_string(r).expect("record serializes");
            writeln!(w, "{line}").map_err(|e| io_err(&self.path, e))?;
        }
        w.flush().map_err(|e| io_err(&self.path, e))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

fn parse_records(content: &str, path: &Path) -> Result<Vec<CensusRecord>> {
    let mut out: Vec<CensusRecord> = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let rec: CensusRecord = serde_json::from_str(line).map_err(|e| {
            EsError::StoreMismatch(format!("{}:{}: {e}", path.display(), i + 1))
        })?;
        if rec.v != SCHEMA_VERSION {
            return Err(EsError::StoreMismatch(format!(
                "{}:{}: schema version {} (expected {SCHEMA_VERSION})",
                path.display(),
                i + 1,
                rec.v
            )));
        }
        if out.last().is_some_and(|prev| prev.p >= rec.p) {
            return Err(EsError::StoreMismatch(format!(
                "{}:{}: records out of order",
                path.display(),
                i + 1
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn read_records(path: &Path) -> Result<Vec<CensusRecord>> {
    let content = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_records(&content, path)
}
