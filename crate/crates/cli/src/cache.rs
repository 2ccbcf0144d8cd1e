//! On-disk cache of subgroup lattices and tables of marks, keyed by a digest
//! of the Cayley table.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use equichar_core::burnside::BurnsideRing;
use equichar_core::group::{FiniteGroup, TABLE_LIMIT};
use equichar_core::Int;

/// Bumped whenever the stored layout or the canonical class order changes;
/// entries under an older tag are ignored and overwritten.
const VERSION: &str = "equichar-marks-v1";

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    order: usize,
    classes: usize,
    reps: Vec<Vec<usize>>,
    marks: Vec<Vec<i64>>,
}

pub struct MarksCache {
    dir: PathBuf,
}

impl MarksCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        MarksCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of the version tag, the order and the Cayley table;
    /// `None` for groups too large to tabulate.
    pub fn key(group: &FiniteGroup) -> Option<String> {
        let n = group.order();
        if n > TABLE_LIMIT {
            return None;
        }
        let mut h = Sha256::new();
        h.update(VERSION.as_bytes());
        h.update((n as u64).to_le_bytes());
        for a in 0..n {
            for b in 0..n {
                h.update((group.mul(a, b) as u32).to_le_bytes());
            }
        }
        Some(hex::encode(h.finalize()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The ring for `group`, read from the cache when a valid entry exists
    /// and written back otherwise.
    pub fn ring(&self, group: &Arc<FiniteGroup>) -> Result<Arc<BurnsideRing>> {
        let Some(key) = Self::key(group) else {
            return Ok(BurnsideRing::new(group)?);
        };
        let path = self.path(&key);
        if let Some(ring) = self.load(group, &path) {
            return Ok(ring);
        }
        let ring = BurnsideRing::new(group)?;
        self.store(&ring, &path)?;
        Ok(ring)
    }

    fn load(&self, group: &Arc<FiniteGroup>, path: &Path) -> Option<Arc<BurnsideRing>> {
        let text = fs::read_to_string(path).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.version != VERSION
            || entry.order != group.order()
            || entry.classes != entry.reps.len()
            || entry.classes != entry.marks.len()
        {
            return None;
        }
        let marks = entry
            .marks
            .iter()
            .map(|r| r.iter().map(|&x| x as Int).collect())
            .collect();
        BurnsideRing::from_parts(group, entry.reps, marks).ok()
    }

    fn store(&self, ring: &BurnsideRing, path: &Path) -> Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let entry = Entry {
            version: VERSION.to_string(),
            order: ring.group().order(),
            classes: ring.rank(),
            reps: (0..ring.rank()).map(|i| ring.class_rep(i).elements().to_vec()).collect(),
            marks: ring
                .table_of_marks()
                .iter()
                .map(|r| r.iter().map(|&x| x as i64).collect())
                .collect(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.flush()?;
        tmp.persist(path)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
