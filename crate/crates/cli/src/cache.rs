//! Content-addressed store of finished command outputs.

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Bumped whenever the output of any command changes shape.
pub const SCHEMA: &str = "1";

pub struct Cache {
    dir: PathBuf,
}

/// Bytes to print and the exit code to return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub output: Vec<u8>,
}

pub fn key(parts: &[(String, String)]) -> String {
    let mut h = Sha256::new();
    h.update(format!("vermaforge {} schema {SCHEMA}\n", env!("CARGO_PKG_VERSION")));
    for (k, v) in parts {
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.out"))
    }

    /// Entries that fail to parse are treated as misses.
    pub fn get(&self, key: &str) -> Option<Outcome> {
        let bytes = std::fs::read(self.path(key)).ok()?;
        let nl = bytes.iter().position(|&b| b == b'\n')?;
        let head = std::str::from_utf8(&bytes[..nl]).ok()?;
        let code: u8 = head.strip_prefix("exit ")?.parse().ok()?;
        Some(Outcome { code, output: bytes[nl + 1..].to_vec() })
    }

    pub fn put(&self, key: &str, out: &Outcome) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        write!(tmp, "exit {}\n", out.code)?;
        tmp.write_all(&out.output)?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}
