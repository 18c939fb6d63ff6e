//! Table directory: one file per weight plus a manifest of content hashes.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use super::pipeline::{solve_weight, SolveOutcome, SolverConfig};
use super::table::{sha256_hex, Phase, SubstitutionTable, TableSet};
use crate::error::{Error, Result};
use crate::BUILD_ID;

const MANIFEST: &str = "manifest.txt";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub weight: u32,
    pub phase: Phase,
    pub entries: usize,
    pub generators: usize,
    pub sha256: String,
}

impl fmt::Display for ManifestEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phase = self.phase.to_string().replace(' ', ":");
        write!(
            f,
            "weight={} phase={phase} entries={} generators={} sha256={}",
            self.weight, self.entries, self.generators, self.sha256
        )
    }
}

impl ManifestEntry {
    fn parse(s: &str) -> Option<Self> {
        let mut fields = BTreeMap::new();
        for part in s.split_whitespace() {
            let (k, v) = part.split_once('=')?;
            fields.insert(k, v);
        }
        Some(ManifestEntry {
            weight: fields.get("weight")?.parse().ok()?,
            phase: fields.get("phase")?.replace(':', " ").parse().ok()?,
            entries: fields.get("entries")?.parse().ok()?,
            generators: fields.get("generators")?.parse().ok()?,
            sha256: fields.get("sha256")?.to_string(),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub build: String,
    pub files: BTreeMap<String, ManifestEntry>,
}

impl Manifest {
    pub fn to_text(&self) -> String {
        let mut out = format!("build = {}\n", self.build);
        for (name, e) in &self.files {
            out.push_str(&format!("file {name} = {e}\n"));
        }
        out
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut m = Manifest::default();
        for (i, line) in text.lines().enumerate() {
            let err = |msg: &str| Error::parse(source_name, i + 1, msg);
            if line.trim().is_empty() {
                continue;
            }
            if let Some(build) = line.strip_prefix("build = ") {
                m.build = build.to_string();
            } else if let Some(rest) = line.strip_prefix("file ") {
                let (name, entry) = rest.split_once(" = ").ok_or_else(|| err("expected `file NAME = ...`"))?;
                let entry = ManifestEntry::parse(entry).ok_or_else(|| err("malformed file entry"))?;
                m.files.insert(name.to_string(), entry);
            } else {
                return Err(err("unrecognized manifest line"));
            }
        }
        Ok(m)
    }
}

pub struct TableStore {
    dir: PathBuf,
}

impl TableStore {
    /// Opens (creating if needed) a table directory and checks it is writable.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let probe = dir.join(".write-probe");
        fs::write(&probe, b"").map_err(|e| Error::io(&dir, e))?;
        fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))?;
        Ok(TableStore { dir })
    }

    /// Opens an existing directory without requiring write access.
    pub fn open_read_only(dir: impl Into<PathBuf>) -> Self {
        TableStore { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_name(weight: u32, depth_cap: Option<usize>) -> String {
        match depth_cap {
            Some(d) => format!("weight-{weight:02}-depth-{d}.tbl"),
            None => format!("weight-{weight:02}.tbl"),
        }
    }

    pub fn table_path(&self, weight: u32, depth_cap: Option<usize>) -> PathBuf {
        self.dir.join(Self::file_name(weight, depth_cap))
    }

    pub fn checkpoint_path(&self, weight: u32) -> PathBuf {
        self.dir.join(format!("weight-{weight:02}.ckpt"))
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.dir.join(MANIFEST)
    }

    pub fn manifest(&self) -> Result<Manifest> {
        let path = self.manifest_path();
        match fs::read_to_string(&path) {
            Ok(text) => Manifest::parse(&text, &path.display().to_string()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Manifest::default()),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    pub fn has(&self, weight: u32) -> bool {
        self.table_path(weight, None).exists()
    }

    /// Reads a table and checks its bytes against the manifest hash.
    pub fn load(&self, weight: u32, depth_cap: Option<usize>) -> Result<SubstitutionTable> {
        let name = Self::file_name(weight, depth_cap);
        let path = self.dir.join(&name);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(Error::MissingTable(weight)),
            Err(e) => return Err(Error::io(&path, e)),
        };
        let manifest = self.manifest()?;
        let entry = manifest.files.get(&name).ok_or_else(|| Error::HashMismatch {
            path: path.clone(),
            expected: "(no manifest entry)".into(),
            actual: sha256_hex(&bytes),
        })?;
        let actual = sha256_hex(&bytes);
        if actual != entry.sha256 {
            return Err(Error::HashMismatch {
                path,
                expected: entry.sha256.clone(),
                actual,
            });
        }
        let text = String::from_utf8(bytes).map_err(|_| Error::parse(&name, 0, "not UTF-8"))?;
        let table = SubstitutionTable::parse(&text, &name)?;
        if table.weight != weight {
            return Err(Error::parse(&name, 1, format!("holds weight {}, expected {weight}", table.weight)));
        }
        Ok(table)
    }

    /// Loads the fully reduced tables of weights 2 through `max_weight`.
    pub fn load_through(&self, max_weight: u32) -> Result<TableSet> {
        let mut set = TableSet::new();
        for w in 2..=max_weight {
            set.insert(self.load(w, None)?);
        }
        Ok(set)
    }

    /// Writes a table and records its hash in the manifest.
    pub fn save(&self, table: &SubstitutionTable) -> Result<PathBuf> {
        let cap = match table.phase {
            Phase::DepthCapped(d) => Some(d),
            _ => None,
        };
        let name = Self::file_name(table.weight, cap);
        let path = self.dir.join(&name);
        let text = table.to_text();
        write_atomic(&path, text.as_bytes())?;
        let mut manifest = self.manifest()?;
        manifest.build = BUILD_ID.to_string();
        manifest.files.insert(
            name,
            ManifestEntry {
                weight: table.weight,
                phase: table.phase,
                entries: table.entries.len(),
                generators: table.generators.len(),
                sha256: sha256_hex(text.as_bytes()),
            },
        );
        write_atomic(&self.manifest_path(), manifest.to_text().as_bytes())?;
        Ok(path)
    }

    /// Makes sure fully reduced tables exist for weights 2 through
    /// `max_weight`, solving and saving whatever is missing. `on_solved` sees
    /// each freshly solved weight.
    pub fn ensure(
        &self,
        max_weight: u32,
        config: &SolverConfig,
        mut on_solved: impl FnMut(&SolveOutcome),
    ) -> Result<TableSet> {
        let mut set = TableSet::new();
        for w in 2..=max_weight {
            let table = if self.has(w) {
                self.load(w, None)?
            } else {
                let cfg = SolverConfig {
                    depth_cap: None,
                    checkpoint_path: Some(self.checkpoint_path(w)),
                    ..config.clone()
                };
                let outcome = solve_weight(w, &set, &cfg)?;
                self.save(&outcome.table)?;
                on_solved(&outcome);
                outcome.table
            };
            set.insert(table);
        }
        Ok(set)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trip() {
        let mut m = Manifest {
            build: BUILD_ID.into(),
            ..Default::default()
        };
        m.files.insert(
            "weight-10-depth-3.tbl".into(),
            ManifestEntry {
                weight: 10,
                phase: Phase::DepthCapped(3),
                entries: 5,
                generators: 1,
                sha256: "ab".repeat(32),
            },
        );
        let text = m.to_text();
        assert_eq!(Manifest::parse(&text, "m").unwrap(), m);
        assert!(Manifest::parse("bogus line", "m").is_err());
    }

    #[test]
    fn file_names() {
        assert_eq!(TableStore::file_name(8, None), "weight-08.tbl");
        assert_eq!(TableStore::file_name(12, Some(4)), "weight-12-depth-4.tbl");
    }
}
