//! Artifact writing: every file lands through a temporary sibling and a
//! rename, so readers never observe a half-written artifact.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::RunResult;

/// Shortest round-trip rendering; identical bits give identical bytes.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> RunResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// In-memory CSV table flushed atomically.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> RunResult<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Table { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> RunResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn save(self, path: &Path) -> RunResult<()> {
        let bytes = self.writer.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        write_atomic(path, &bytes)
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> RunResult<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}
